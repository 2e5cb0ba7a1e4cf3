use super::{reduce_germ, ReductionCertificate};
use crate::error::{Error, Result};
use crate::exact_lattice::{dot, primitive_decompose, solve, LatVec, Lattice, Rational};
use crate::polyconv::Polyhedron;
use crate::toric_germ::{check_semiample, mld_fiber, FibrationGerm, Ray};
use num_traits::{Signed, Zero};

/// A ray of the image cone: `Φ(e_source) = q · e` with `a = a_source / q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRay {
    pub e: LatVec,
    pub a: Rational,
    pub source: usize,
    pub q: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermImage {
    pub n_prime: Lattice,
    pub sigma_prime: Polyhedron,
    pub psi_prime: LatVec,
    pub rays_prime: Vec<ImageRay>,
    pub germ: FibrationGerm,
    pub certificate: ReductionCertificate,
}

/// Reduces an affine germ at `a = mld` and rebuilds the image singularity with
/// `ψ = ψ′ ∘ Φ`; the image germ's mld is checked to equal `a`.
pub fn alc_reduce_germ(g: &FibrationGerm) -> Result<GermImage> {
    if !g.is_affine() {
        return Err(Error::NotAffine);
    }
    let a = mld_fiber(g)?.value;
    if !a.is_positive() {
        return Err(Error::NonpositiveMld);
    }
    let certificate = reduce_germ(g, &a)?;
    let psi = check_semiample(g)?.psi.into_iter().next().expect("one cone");
    let phi = &certificate.phi;
    let dp = phi.target.dim();
    let r = phi.ambient_matrix();
    let psi_prime = solve(&r, &psi, dp).ok_or(Error::PsiDoesNotFactor)?;
    if (0..g.dim()).any(|k| dot(&r[k], &psi_prime) != psi[k]) {
        return Err(Error::PsiDoesNotFactor);
    }
    let n_prime = phi.target.clone();
    let images: Vec<(usize, LatVec)> = g
        .rays()
        .iter()
        .enumerate()
        .map(|(i, ray)| (i, phi.apply(&ray.e)))
        .filter(|(_, x)| x.iter().any(|c| !c.is_zero()))
        .collect();
    let sigma_prime = Polyhedron::cone(dp, &images.iter().map(|(_, x)| x.clone()).collect::<Vec<_>>());
    let mut rays_prime: Vec<ImageRay> = Vec::new();
    for (i, x) in &images {
        let (e, q) = primitive_decompose(x, &n_prime)?;
        if !sigma_prime.rays().contains(&e) || rays_prime.iter().any(|r| r.e == e) {
            continue;
        }
        let ai = &g.rays()[*i].a;
        let a_img = ai / &q;
        if dot(&psi_prime, &e) != a_img {
            return Err(Error::Internal("image coefficient differs from the image form".into()));
        }
        rays_prime.push(ImageRay { e, a: a_img, source: *i, q });
    }
    rays_prime.sort_by(|x, y| x.e.cmp(&y.e));
    if rays_prime.len() != sigma_prime.rays().len() {
        return Err(Error::Internal("image cone ray without a preimage ray".into()));
    }
    let germ = FibrationGerm::affine(
        n_prime.clone(),
        &rays_prime.iter().map(|r| Ray::new(r.e.clone(), r.a.clone())).collect::<Vec<_>>(),
    )?;
    if mld_fiber(&germ)?.value != a {
        return Err(Error::Internal("image germ changes the minimal log discrepancy".into()));
    }
    Ok(GermImage { n_prime, sigma_prime, psi_prime, rays_prime, germ, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lattice::{q, qf, qvec};
    use crate::toric_germ::examples::*;

    #[test]
    fn half_lattice_maps_to_the_line() {
        let img = alc_reduce_germ(&a11_half()).unwrap();
        assert_eq!(img.n_prime, Lattice::standard(1));
        assert_eq!(img.psi_prime, qvec(&[1]));
        assert_eq!(img.rays_prime.len(), 1);
        assert_eq!((img.rays_prime[0].e.clone(), img.rays_prime[0].a.clone()), (qvec(&[1]), q(1)));
        assert_eq!(img.rays_prime[0].q, q(1));
        assert_eq!(mld_fiber(&img.germ).unwrap().value, q(1));
    }

    #[test]
    fn plane_with_half_boundary_stays_put() {
        let g = a2(qf(1, 2), qf(1, 2));
        let img = alc_reduce_germ(&g).unwrap();
        assert_eq!(img.n_prime.dim(), 2);
        assert_eq!(img.psi_prime, vec![qf(1, 2), qf(1, 2)]);
        assert_eq!(mld_fiber(&img.germ).unwrap().value, q(1));
    }

    #[test]
    fn smooth_line_is_unchanged() {
        let img = alc_reduce_germ(&a1(q(1))).unwrap();
        assert_eq!(img.germ, a1(q(1)));
        assert!(img.certificate.projection_chain.is_empty());
    }

    #[test]
    fn rejects_fibrations_and_zero_mld() {
        assert_eq!(alc_reduce_germ(&p1_a1()), Err(Error::NotAffine));
        assert!(alc_reduce_germ(&a2(q(1), q(0))).is_ok());
        assert_eq!(alc_reduce_germ(&a1(q(0))), Err(Error::NonpositiveMld));
    }
}
