use super::{lattice_points, minkowski_diff_self, polar, Polyhedron, Region};
use crate::error::{Error, Result};
use crate::exact_lattice::{
    dot, hnf, inverse, is_unimodular, is_zero_vec, rank, sign_normalize, sub, to_rational_matrix,
    transpose, vec_mat, Int, LatVec, Lattice, QMatrix, Rational,
};
use num_traits::{Signed, Zero};

/// Gauge `min{t ≥ 0 : x ∈ t·s}` of a polyhedron containing the origin,
/// with `None` for `+∞` (when `x` leaves the cone spanned by `s`).
pub fn gauge(s: &Polyhedron, x: &[Rational]) -> Option<Rational> {
    let mut g = Rational::zero();
    for h in s.ineqs() {
        let v = dot(&h.normal, x);
        if h.offset.is_negative() {
            let t = v / &h.offset;
            if t > g {
                g = t;
            }
        } else if v.is_negative() {
            return None;
        }
    }
    Some(g)
}

/// `i`-th successive minimum of a symmetric convex body, with `i` independent
/// witnesses (sign-normalized). Candidates are ordered by gauge, then lexicographically.
pub fn successive_minimum(lat: &Lattice, s: &Polyhedron, i: usize) -> Result<(Rational, Vec<LatVec>)> {
    let d = lat.dim();
    if s.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: s.dim() });
    }
    if !s.is_compact() {
        return Err(Error::UnboundedInput);
    }
    if !s.is_full_dim() {
        return Err(Error::DegenerateDimension);
    }
    if !s.is_symmetric() {
        return Err(Error::AsymmetricInput);
    }
    if i == 0 || i > d {
        return Err(Error::IndexOutOfRange(i));
    }
    let basis_gauges: Vec<Rational> =
        lat.basis().iter().map(|b| gauge(s, b).expect("symmetric body has 0 inside")).collect();
    let top = basis_gauges.iter().max().cloned().expect("d ≥ 1");
    let mut t = basis_gauges.iter().min().cloned().expect("d ≥ 1");
    loop {
        let pts = lattice_points(lat, &s.scale(&t), Region::Closure)?;
        let mut cands: Vec<(Rational, LatVec)> = pts
            .into_iter()
            .filter(|x| !is_zero_vec(x))
            .map(|x| (gauge(s, &x).expect("finite"), sign_normalize(&x)))
            .collect();
        cands.sort();
        cands.dedup();
        let mut chosen: Vec<LatVec> = Vec::new();
        for (g, x) in cands {
            let mut trial = chosen.clone();
            trial.push(x.clone());
            if rank(&trial, d) > chosen.len() {
                chosen = trial;
                if chosen.len() == i {
                    return Ok((g, chosen));
                }
            }
        }
        if t >= top {
            return Err(Error::Internal("successive minimum search exhausted".into()));
        }
        t = (&t * Rational::from_integer(2.into())).min(top.clone());
    }
}

/// A basis of the dual lattice together with the largest width of the polytope
/// along any basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundednessCertificate {
    pub dual_basis: Vec<LatVec>,
    pub box_side: Rational,
    /// `λ_d(Λ*, (p-p)*)`; the construction guarantees `box_side ≤ d·dual_minimum`.
    pub dual_minimum: Rational,
}

fn width(p: &Polyhedron, phi: &[Rational]) -> Rational {
    let (lo, hi) = p.vertex_range(phi);
    hi - lo
}

fn round(x: &Rational) -> Rational {
    (x + Rational::new(1.into(), 2.into())).floor()
}

/// Dual basis from the last successive minimum of `(Λ*, (p-p)*)` completed to a
/// lattice basis with size-reduced coefficients.
pub fn boundedness_certificate(lat: &Lattice, p: &Polyhedron) -> Result<BoundednessCertificate> {
    let d = lat.dim();
    if !p.is_compact() {
        return Err(Error::UnboundedInput);
    }
    if !p.is_full_dim() {
        return Err(Error::DegenerateDimension);
    }
    if d == 0 {
        return Ok(BoundednessCertificate { dual_basis: Vec::new(), box_side: Rational::zero(), dual_minimum: Rational::zero() });
    }
    let dual = lat.dual();
    let body = polar(&minkowski_diff_self(p))?;
    let (lambda, ws) = successive_minimum(&dual, &body, d)?;
    let wc: Vec<Vec<Int>> = ws
        .iter()
        .map(|w| dual.coords(w).iter().map(|x| x.to_integer()).collect())
        .collect();
    let (h, u) = hnf(&transpose(&wc, d));
    let y = to_rational_matrix(&transpose(&u, d));
    let mut v: QMatrix = inverse(&y).expect("unimodular");
    let ht = to_rational_matrix(&transpose(&h, d));
    let mut mu: QMatrix = inverse(&ht).expect("independent witnesses");
    for k in 0..d {
        for j in (0..k).rev() {
            let r = round(&mu[k][j]);
            if !r.is_zero() {
                v[k] = sub(&v[k], &v[j].iter().map(|x| x * &r).collect::<LatVec>());
                mu[k] = sub(&mu[k], &mu[j].iter().map(|x| x * &r).collect::<LatVec>());
            }
        }
    }
    let dual_basis: Vec<LatVec> = v.iter().map(|c| vec_mat(c, dual.basis(), d)).collect();
    let box_side = dual_basis.iter().map(|phi| width(p, phi)).max().expect("d ≥ 1");
    Ok(BoundednessCertificate { dual_basis, box_side, dual_minimum: lambda })
}

/// Checks the basis property and every width bound.
pub fn verify_boundedness(lat: &Lattice, p: &Polyhedron, cert: &BoundednessCertificate) -> bool {
    let d = lat.dim();
    if cert.dual_basis.len() != d || p.dim() != d {
        return false;
    }
    let dual = lat.dual();
    let coords: Vec<LatVec> = cert.dual_basis.iter().map(|phi| dual.coords(phi)).collect();
    if !coords.iter().flatten().all(|x| x.is_integer()) {
        return false;
    }
    let ints: Vec<Vec<Int>> = coords.iter().map(|c| c.iter().map(|x| x.to_integer()).collect()).collect();
    is_unimodular(&ints) && cert.dual_basis.iter().all(|phi| width(p, phi) <= cert.box_side)
}
