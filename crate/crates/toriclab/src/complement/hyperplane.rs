use crate::error::{Error, Result};
use crate::exact_lattice::{dot, primitive_decompose, solve, transpose, LatVec, Rational};
use crate::polyconv::Polyhedron;
use crate::reduction::{verify_reduction_detail, ReductionCertificate};
use crate::toric_germ::{moment_data, FibrationGerm};
use num_traits::Signed;

/// `H = div(χ^{m̄})` on the base with `π*(m̄) = Φ*(m′)`; `B + γ_h·f*H` is lc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneCertificate {
    pub m_bar: LatVec,
    pub m_prime: LatVec,
    pub gamma_h: Rational,
}

/// One section per ray `m′` of `σ′^∨` whose pullback factors through the base, in
/// lexicographic order of `m′`.
pub fn hyperplane_sections(
    g: &FibrationGerm,
    t: &Rational,
    cert: &ReductionCertificate,
) -> Result<Vec<HyperplaneCertificate>> {
    if g.base_dim() == 0 {
        return Err(Error::BaseIsPoint);
    }
    let u = moment_data(g)?.u;
    verify_reduction_detail(cert, g.lattice(), &u, t).map_err(Error::InvalidCertificate)?;
    let target = &cert.phi.target;
    let dp = target.dim();
    let sigma_prime = Polyhedron::cone(dp, cert.u_prime.vertices());
    let dual = target.dual();
    let mut normals: Vec<LatVec> = Vec::new();
    for h in sigma_prime.ineqs() {
        normals.push(primitive_decompose(&h.normal, &dual)?.0);
    }
    normals.sort();
    normals.dedup();
    let p = g.projection_ambient();
    let pt = transpose(p, g.dim());
    let base_dual = g.base_lattice().dual();
    let mut out = Vec::new();
    for m_prime in normals {
        let pulled = cert.phi.pullback(&m_prime);
        let Some(m_bar) = solve(&pt, &pulled, g.base_dim()) else { continue };
        if !base_dual.contains(&m_bar) {
            return Err(Error::Internal("base character outside the dual lattice".into()));
        }
        let top = cert.u_prime.vertex_range(&m_prime).1 * t;
        if !top.is_positive() {
            return Err(Error::Internal("image polytope has no extent along a dual ray".into()));
        }
        let gamma_h = t / top;
        if g.rays().iter().any(|r| &gamma_h * dot(&pulled, &r.e) > r.a) {
            return Err(Error::Internal("hyperplane section is not lc".into()));
        }
        out.push(HyperplaneCertificate { m_bar, m_prime, gamma_h });
    }
    Ok(out)
}

/// The section for the lexicographically smallest admissible ray of `σ′^∨`.
pub fn hyperplane_section(g: &FibrationGerm, t: &Rational, cert: &ReductionCertificate) -> Result<HyperplaneCertificate> {
    hyperplane_sections(g, t, cert)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidCertificate("projection does not factor through the base".into()))
}
