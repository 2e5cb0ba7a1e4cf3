use super::{lattice_points, Polyhedron, Region};
use crate::error::{Error, Result};
use crate::exact_lattice::{dot, scale, sub, Int, LatVec, Lattice, Rational};
use num_traits::One;

/// Coefficient of asymmetry of `point` in a polytope, with witnesses
/// `point = gamma·witness_vertex + (1 - gamma)·witness_boundary`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymmetryReport {
    pub point: LatVec,
    pub gamma: Rational,
    pub witness_vertex: LatVec,
    pub witness_boundary: LatVec,
}

/// Largest `t` with `point + t(p - p) ⊆ p`.
///
/// For a facet `⟨n, x⟩ ≥ c` with vertex maximum `M`, containment of the
/// translate requires `⟨n, point⟩ - c ≥ t (M - c)`; the minimum over facets
/// is the answer, and the maximizing vertex of the binding facet is `v₀`.
pub fn asymmetry(point: &[Rational], p: &Polyhedron) -> Result<AsymmetryReport> {
    if !p.is_compact() {
        return Err(Error::UnboundedInput);
    }
    if !p.is_full_dim() {
        return Err(Error::DegenerateDimension);
    }
    if point.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: point.len() });
    }
    if !p.contains(point) {
        return Err(Error::PointOutside);
    }
    let mut best: Option<(Rational, LatVec)> = None;
    for h in p.ineqs() {
        let (_, top) = p.vertex_range(&h.normal);
        let width = &top - &h.offset;
        let t = (dot(&h.normal, point) - &h.offset) / &width;
        if best.as_ref().is_none_or(|(b, _)| t < *b) {
            let v0 = p
                .vertices()
                .iter()
                .find(|v| dot(&h.normal, v) == top)
                .expect("maximum is attained at a vertex")
                .clone();
            best = Some((t, v0));
        }
    }
    let (gamma, v0) = best.expect("a full-dimensional polytope has facets");
    let rest = Rational::one() - &gamma;
    let boundary = scale(&rest.recip(), &sub(point, &scale(&gamma, &v0)));
    Ok(AsymmetryReport { point: point.to_vec(), gamma, witness_vertex: v0, witness_boundary: boundary })
}

/// Maximum asymmetry over interior lattice points; ties go to the
/// lexicographically smallest point.
pub fn pikhurko_constant(lat: &Lattice, p: &Polyhedron) -> Result<(Rational, LatVec)> {
    if !p.is_full_dim() {
        return Err(Error::DegenerateDimension);
    }
    let pts = lattice_points(lat, p, Region::Interior)?;
    let mut best: Option<(Rational, LatVec)> = None;
    for x in pts {
        let g = asymmetry(&x, p)?.gamma;
        if best.as_ref().is_none_or(|(b, _)| g > *b) {
            best = Some((g, x));
        }
    }
    best.ok_or(Error::NoInteriorLatticePoint)
}

/// Pikhurko constant of `[lo, hi]` with respect to `Z` by the two-case closed form.
pub fn interval_gamma_closed_form(lo: &Rational, hi: &Rational) -> Result<Rational> {
    let z = lo.floor() + Rational::one();
    let last = hi.ceil() - Rational::one();
    if last < z {
        return Err(Error::NoInteriorInteger);
    }
    let count: Int = (&last - &z).to_integer() + 1;
    let mut alpha = &z - lo;
    let mut beta = hi - &last;
    if alpha < beta {
        std::mem::swap(&mut alpha, &mut beta);
    }
    let two = Rational::from_integer(2.into());
    if count.clone() % 2 == 1.into() {
        let k = Rational::from_integer((count - 1) / 2);
        Ok((&k + &beta) / (&two * &k + &alpha + &beta))
    } else {
        let k = Rational::from_integer((count - 2) / 2);
        Ok((&k + &alpha) / (&two * &k + Rational::one() + &alpha + &beta))
    }
}
