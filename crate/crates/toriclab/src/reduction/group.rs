use crate::error::{Error, Result};
use crate::exact_lattice::{
    inverse, matmul, qint, snf, to_rational_matrix, transpose, unit_vec, vec_mat, zero_vec, Int, LatVec, Lattice,
    QMatrix, Rational,
};
use crate::polyconv::{lattice_points, Polyhedron, Region};
use crate::toric_germ::FibrationGerm;
use num_traits::{One, Signed, Zero};

/// `G = g⁻¹(Z^p)` for `g = (dual_generators)`; every generator is an integer covector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRep {
    pub d: usize,
    pub dual_generators: Vec<Vec<Int>>,
    pub p: usize,
}

impl GroupRep {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.dual_generators
            .iter()
            .all(|w| w.iter().zip(x).map(|(a, b)| qint(a) * b).sum::<Rational>().is_integer())
    }
}

/// A simplicial affine germ in the coordinates where its rays are the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFactorialData {
    /// Rows are the rays; ray coordinates of `x` are `x · rays⁻¹`.
    pub rays: QMatrix,
    pub n_ray: Lattice,
    /// Cyclic factors of `N/Z^d` as `(generator in [0,1)^d, order > 1)`.
    pub cyclic: Vec<(LatVec, Int)>,
    pub group: GroupRep,
    pub coefficients: Vec<Rational>,
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn qfactorial_group(g: &FibrationGerm) -> Result<QFactorialData> {
    if !g.is_affine() {
        return Err(Error::NotAffine);
    }
    let d = g.dim();
    if g.rays().len() != d {
        return Err(Error::NotSimplicial);
    }
    let rays: QMatrix = g.rays().iter().map(|r| r.e.clone()).collect();
    let rays_inv = inverse(&rays).ok_or(Error::NotSimplicial)?;
    let k = matmul(g.lattice().basis(), &rays_inv, d);
    let n_ray = Lattice::from_basis(&k)?;
    // Z^d in N_ray coordinates; integral because every ray lies in N.
    let kinv = inverse(n_ray.basis()).expect("basis");
    let kinv_int: Vec<Vec<Int>> = kinv.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
    if kinv.iter().flatten().any(|x| !x.is_integer()) {
        return Err(Error::Internal("rays not in the lattice".into()));
    }
    let (s, _, v) = snf(&kinv_int);
    let vinv = inverse(&to_rational_matrix(&v)).expect("unimodular");
    let mut cyclic = Vec::new();
    for i in 0..d {
        if s[i][i] > Int::one() {
            let gen: LatVec = vec_mat(&vinv[i], n_ray.basis(), d).iter().map(frac).collect();
            cyclic.push((gen, s[i][i].clone()));
        }
    }
    let dual_generators: Vec<Vec<Int>> = transpose(&kinv_int, d);
    Ok(QFactorialData {
        rays,
        n_ray,
        cyclic,
        group: GroupRep { d, dual_generators, p: d },
        coefficients: g.rays().iter().map(|r| r.a.clone()).collect(),
    })
}

/// `U = conv(0, e_i / a_i) + cone(e_i : a_i = 0)` in ray coordinates.
pub fn ray_coordinate_u(coefficients: &[Rational]) -> Polyhedron {
    let d = coefficients.len();
    let mut vs = vec![zero_vec(d)];
    let mut rs = Vec::new();
    for (i, a) in coefficients.iter().enumerate() {
        if a.is_zero() {
            rs.push(unit_vec(d, i));
        } else {
            vs.push(unit_vec(d, i).into_iter().map(|x| x / a).collect());
        }
    }
    Polyhedron::from_vrep(d, &vs, &rs).expect("nonempty")
}

/// `G ∩ int(tU) = ∅`, decided as `Z^p ∩ int(t·g(U)) = ∅`.
pub fn series_check(grp: &GroupRep, u: &Polyhedron, t: &Rational) -> Result<bool> {
    if u.dim() != grp.d {
        return Err(Error::DimensionMismatch { expected: grp.d, got: u.dim() });
    }
    if grp.dual_generators.len() != grp.p || grp.dual_generators.iter().any(|w| w.len() != grp.d) {
        return Err(Error::DimensionMismatch { expected: grp.d, got: grp.dual_generators.len() });
    }
    if !t.is_positive() {
        return Err(Error::NonpositiveT);
    }
    if !u.is_compact() {
        return Err(Error::NonCompact);
    }
    let y = transpose(&to_rational_matrix(&grp.dual_generators), grp.d);
    let image = u.linear_image(&y, grp.p).scale(t);
    if !image.is_full_dim() {
        return Ok(true);
    }
    Ok(lattice_points(&Lattice::standard(grp.p), &image, Region::Interior)?.is_empty())
}
