use super::FibrationGerm;
use crate::error::{Error, Result};
use crate::exact_lattice::{dot, primitive_decompose, scale, solve, zero_vec, LatVec, Rational};
use crate::polyconv::{polar, support_min, Halfspace, Polyhedron};
use num_traits::{One, Zero};

/// `□ = {m : ⟨m, e_i⟩ + a_i ≥ 0}`, its polar `U`, and the cone `σ₀` of the rays with `a_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentData {
    pub moment: Polyhedron,
    pub u: Polyhedron,
    pub sigma0: Polyhedron,
}

/// `U` from its generators: `conv({0} ∪ {e_i / a_i : a_i > 0}) + cone{e_i : a_i = 0}`.
pub(crate) fn u_from_hull(g: &FibrationGerm) -> Polyhedron {
    let d = g.dim();
    let mut vs = vec![zero_vec(d)];
    let mut rs = Vec::new();
    for r in g.rays() {
        if r.a.is_zero() {
            rs.push(r.e.clone());
        } else {
            vs.push(scale(&r.a.recip(), &r.e));
        }
    }
    Polyhedron::from_vrep(d, &vs, &rs).expect("contains the origin")
}

pub(crate) fn moment_polytope(g: &FibrationGerm) -> Polyhedron {
    let ineqs: Vec<Halfspace> = g.rays().iter().map(|r| Halfspace::new(r.e.clone(), -r.a.clone())).collect();
    Polyhedron::from_hrep(g.dim(), &ineqs).expect("contains the origin")
}

/// Builds `□` and `U`, checking `polar(□)` against the hull formula and `polar(U) = □`.
pub fn moment_data(g: &FibrationGerm) -> Result<MomentData> {
    let moment = moment_polytope(g);
    let u = polar(&moment)?;
    if u != u_from_hull(g) || polar(&u)? != moment {
        return Err(Error::InternalDualityMismatch);
    }
    let zero_rays: Vec<LatVec> = g.rays().iter().filter(|r| r.a.is_zero()).map(|r| r.e.clone()).collect();
    let sigma0 = Polyhedron::cone(g.dim(), &zero_rays);
    Ok(MomentData { moment, u, sigma0 })
}

/// Per maximal cone `σ`, the form `ψ_σ` with `⟨ψ_σ, e_i⟩ = a_i` on the rays of `σ`;
/// each satisfies `-ψ_σ ∈ □`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiampleWitness {
    pub psi: Vec<LatVec>,
}

pub fn check_semiample(g: &FibrationGerm) -> Result<SemiampleWitness> {
    let d = g.dim();
    let mut psi = Vec::with_capacity(g.fan().len());
    for (k, cone) in g.fan().iter().enumerate() {
        let a: Vec<LatVec> = cone.iter().map(|&i| g.rays()[i].e.clone()).collect();
        let b: LatVec = cone.iter().map(|&i| g.rays()[i].a.clone()).collect();
        let p = solve(&a, &b, d).ok_or(Error::NotRCartier { cone: k })?;
        if let Some(j) = g.rays().iter().position(|r| dot(&p, &r.e) > r.a) {
            return Err(Error::NotSemiample { cone: k, ray: j });
        }
        psi.push(p);
    }
    Ok(SemiampleWitness { psi })
}

/// `a_{E_e}(X, B) = -h_□(e)` with `value = None` standing for `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyQuery {
    pub e: LatVec,
    pub value: Option<Rational>,
    pub over_fiber: bool,
}

pub fn log_discrepancy(g: &FibrationGerm, e: &[Rational]) -> Result<DiscrepancyQuery> {
    let d = g.dim();
    if e.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: e.len() });
    }
    if !g.lattice().contains(e) {
        return Err(Error::NotInLattice);
    }
    let (_, content) = primitive_decompose(e, g.lattice())?;
    if !content.is_one() {
        return Err(Error::NotPrimitive);
    }
    if !g.support().contains(e) {
        return Err(Error::OutsideSupport);
    }
    let w = check_semiample(g).map_err(|_| Error::RequiresSemiample)?;
    let value = support_min(&moment_polytope(g), e).map(|h| -h);
    let k = g.cone_containing(e).ok_or(Error::OutsideSupport)?;
    if value.as_ref() != Some(&dot(&w.psi[k], e)) {
        return Err(Error::Internal("log discrepancy differs from the cone form".into()));
    }
    Ok(DiscrepancyQuery { e: e.to_vec(), value, over_fiber: g.over_fiber(e) })
}

/// `-h_□(e)` through the semiample forms: the maximum of `⟨ψ_σ, e⟩` over the maximal cones.
#[cfg(test)]
pub(crate) fn discrepancy_by_forms(w: &SemiampleWitness, e: &[Rational]) -> Rational {
    w.psi.iter().map(|p| dot(p, e)).max().expect("at least one cone")
}
