//! Reduction of `(N, tU)` by successive shortest-vector quotients, with certificates that
//! can be re-checked without rerunning the search.

mod group;
mod image;

pub use group::{qfactorial_group, ray_coordinate_u, series_check, GroupRep, QFactorialData};
pub use image::{alc_reduce_germ, GermImage, ImageRay};

use crate::error::{Error, Result};
use crate::exact_lattice::{
    lattice_quotient, to_rational_matrix, zero_vec, Int, LatVec, Lattice, LatticeMap, Rational,
};
use crate::oracle::{box_covers, covering_box, oracle_lattice_scan, replay, EnumerationRecord, Predicate};
use crate::polyconv::{
    boundedness_certificate, lattice_points, minkowski_diff_self, pikhurko_constant, successive_minimum,
    verify_boundedness, BoundednessCertificate, Halfspace, Polyhedron, Region,
};
use crate::serial::{self, QStr};
use crate::toric_germ::{check_ct, sigma0_reduce, FibrationGerm};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

/// Why the quotient loop ended at the returned level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopReason {
    DimensionOne,
    /// Quotienting by `b` would create an interior lattice point; `tau ≥ gamma` holds.
    QuotientGainsInteriorPoint { b: LatVec, tau: Rational, gamma: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub phi: LatticeMap,
    /// Each quotient step's primitive `b` and its first successive minimum.
    pub projection_chain: Vec<(LatVec, Rational)>,
    pub u_prime: Polyhedron,
    pub t: Rational,
    /// Exhaustive scan of a box around `tU′` for interior lattice points.
    pub emptiness_witness: EnumerationRecord,
    pub bound: BoundednessCertificate,
    pub stop: StopReason,
}

impl ReductionCertificate {
    pub fn target_dim(&self) -> usize {
        self.phi.target.dim()
    }

    pub fn scaled_image(&self) -> Polyhedron {
        self.u_prime.scale(&self.t)
    }
}

fn ineq_pairs(p: &Polyhedron) -> Vec<(LatVec, Rational)> {
    p.ineqs().iter().map(|h| (h.normal.clone(), h.offset.clone())).collect()
}

fn emptiness_record(lat: &Lattice, p: &Polyhedron) -> Result<EnumerationRecord> {
    let (lo, hi) = covering_box(lat.basis(), p.vertices())
        .ok_or_else(|| Error::Internal("covering box out of range".into()))?;
    oracle_lattice_scan(lat.basis(), &lo, &hi, Predicate::interior(&ineq_pairs(p)))
}

/// Quotients `(lat, t·u)` by shortest vectors of `□ − □` while the image keeps no
/// interior lattice point and has dimension above one.
pub fn tlc_reduce(lat: &Lattice, u: &Polyhedron, t: &Rational) -> Result<ReductionCertificate> {
    if !t.is_positive() {
        return Err(Error::NonpositiveT);
    }
    if u.dim() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), got: u.dim() });
    }
    if !u.is_compact() {
        return Err(Error::NonCompact);
    }
    if lat.dim() == 0 || !u.is_full_dim() {
        return Err(Error::DegenerateDimension);
    }
    if !u.contains(&zero_vec(lat.dim())) {
        return Err(Error::OriginNotContained);
    }
    let start = u.scale(t);
    if let Some(x) = lattice_points(lat, &start, Region::Interior)?.into_iter().next() {
        return Err(Error::InteriorPointPresent(x));
    }
    let mut phi = LatticeMap::identity(lat);
    let mut chain = Vec::new();
    let mut cur_lat = lat.clone();
    let mut cur = start;
    let stop = loop {
        if cur_lat.dim() == 1 {
            break StopReason::DimensionOne;
        }
        let (tau, bs) = successive_minimum(&cur_lat, &minkowski_diff_self(&cur), 1)?;
        let b = bs.into_iter().next().expect("one witness");
        let (next_lat, q) = lattice_quotient(&cur_lat, &b)?;
        let next = cur.linear_image(&q.ambient_matrix(), next_lat.dim());
        if lattice_points(&next_lat, &next, Region::Interior)?.is_empty() {
            phi = phi.then(&q)?;
            chain.push((b, tau));
            cur_lat = next_lat;
            cur = next;
        } else {
            let (gamma, _) = pikhurko_constant(&next_lat, &next)?;
            if tau < gamma {
                return Err(Error::Internal("projection step has tau below gamma".into()));
            }
            break StopReason::QuotientGainsInteriorPoint { b, tau, gamma };
        }
    };
    let u_prime = u.linear_image(&phi.ambient_matrix(), cur_lat.dim());
    let emptiness_witness = emptiness_record(&cur_lat, &cur)?;
    if !emptiness_witness.hits.is_empty() {
        return Err(Error::Internal("interior point after a checked quotient".into()));
    }
    let bound = boundedness_certificate(&cur_lat, &cur)?;
    Ok(ReductionCertificate { phi, projection_chain: chain, u_prime, t: t.clone(), emptiness_witness, bound, stop })
}

/// Reduction of a germ at `t`: the quotient by the zero-coefficient rays followed by
/// [`tlc_reduce`]; `phi` is the composition, so `U′ = Φ(U)` for the germ's `U`.
///
/// Over a point the origin is interior to `U`, so only the `(C_t)` verdict is returned.
pub fn reduce_germ(g: &FibrationGerm, t: &Rational) -> Result<ReductionCertificate> {
    let report = check_ct(g, t)?;
    if !report.holds {
        return Err(Error::CtFails(report.witness.unwrap_or_else(|| report.mld_fiber.minimizer.clone())));
    }
    if g.base_dim() == 0 {
        return Err(Error::BaseIsPoint);
    }
    let red = sigma0_reduce(g)?;
    let mut cert = tlc_reduce(&red.n0, &red.u0, t)?;
    cert.phi = red.quot.then(&cert.phi)?;
    Ok(cert)
}

/// Re-checks a certificate against its inputs; the error names the first failing clause.
pub fn verify_reduction_detail(
    cert: &ReductionCertificate,
    lat: &Lattice,
    u: &Polyhedron,
    t: &Rational,
) -> std::result::Result<(), String> {
    let phi = &cert.phi;
    if phi.source != *lat {
        return Err("source lattice differs from the input lattice".into());
    }
    if phi.is_zero() || !phi.is_surjective() {
        return Err("projection is zero or not surjective".into());
    }
    if cert.t != *t || !t.is_positive() {
        return Err("t differs from the certified value".into());
    }
    let dp = phi.target.dim();
    if u.dim() != lat.dim() || cert.u_prime.dim() != dp {
        return Err("dimensions disagree".into());
    }
    if !cert.u_prime.is_compact() {
        return Err("image is not compact".into());
    }
    if !cert.u_prime.same_set(&u.linear_image(&phi.ambient_matrix(), dp)) {
        return Err("image differs from the projection of U".into());
    }
    if cert.projection_chain.iter().any(|(_, tau)| !tau.is_positive()) {
        return Err("nonpositive successive minimum in the chain".into());
    }
    let tu = cert.scaled_image();
    let rec = &cert.emptiness_witness;
    let basis = serial::mat_in(&rec.basis);
    if basis != *phi.target.basis() {
        return Err("enumeration lattice differs from the target lattice".into());
    }
    let Predicate::InInterior(_) = &rec.predicate else {
        return Err("enumeration predicate is not an interior test".into());
    };
    let halfspaces: Vec<Halfspace> =
        rec.predicate.ineqs().into_iter().map(|(n, c)| Halfspace::new(n, c)).collect();
    match Polyhedron::from_hrep(dp, &halfspaces) {
        Ok(p) if p.same_set(&tu) => {}
        _ => return Err("enumeration predicate differs from tU′".into()),
    }
    if !box_covers(&basis, &rec.lo, &rec.hi, tu.vertices()) {
        return Err("enumeration box does not cover tU′".into());
    }
    if !rec.hits.is_empty() {
        return Err("enumeration found interior lattice points".into());
    }
    if !replay(rec) {
        return Err("enumeration does not replay".into());
    }
    if !verify_boundedness(&phi.target, &tu, &cert.bound) {
        return Err("boundedness certificate is invalid".into());
    }
    Ok(())
}

pub fn verify_reduction(cert: &ReductionCertificate, lat: &Lattice, u: &Polyhedron, t: &Rational) -> bool {
    verify_reduction_detail(cert, lat, u, t).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLatticeMap {
    pub matrix: Vec<Vec<QStr>>,
    pub source: Vec<Vec<QStr>>,
    pub target: Vec<Vec<QStr>>,
}

impl RawLatticeMap {
    pub fn from_map(m: &LatticeMap) -> RawLatticeMap {
        RawLatticeMap {
            matrix: serial::mat_out(&to_rational_matrix(&m.matrix)),
            source: serial::mat_out(m.source.basis()),
            target: serial::mat_out(m.target.basis()),
        }
    }

    pub fn to_map(&self) -> Result<LatticeMap> {
        let source = basis_lattice(&self.source)?;
        let target = basis_lattice(&self.target)?;
        let mut matrix = Vec::with_capacity(self.matrix.len());
        for row in serial::mat_in(&self.matrix) {
            if row.iter().any(|x| !x.is_integer()) {
                return Err(Error::InvalidCertificate("non-integral map matrix".into()));
            }
            matrix.push(row.into_iter().map(|x| x.to_integer()).collect::<Vec<Int>>());
        }
        LatticeMap::new(matrix, source, target)
    }
}

fn basis_lattice(rows: &[Vec<QStr>]) -> Result<Lattice> {
    let m = serial::mat_in(rows);
    if m.is_empty() {
        return Ok(Lattice::standard(0));
    }
    Lattice::from_basis(&m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawStep {
    pub b: Vec<QStr>,
    pub tau: QStr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RawStop {
    DimensionOne,
    QuotientGainsInteriorPoint { b: Vec<QStr>, tau: QStr, gamma: QStr },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawBound {
    pub dual_basis: Vec<Vec<QStr>>,
    pub box_side: QStr,
    pub dual_minimum: QStr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawReductionCertificate {
    pub phi: RawLatticeMap,
    pub projection_chain: Vec<RawStep>,
    pub u_prime_vertices: Vec<Vec<QStr>>,
    pub t: QStr,
    pub emptiness_witness: EnumerationRecord,
    pub bound: RawBound,
    pub stop: RawStop,
}

impl ReductionCertificate {
    pub fn to_raw(&self) -> RawReductionCertificate {
        RawReductionCertificate {
            phi: RawLatticeMap::from_map(&self.phi),
            projection_chain: self
                .projection_chain
                .iter()
                .map(|(b, tau)| RawStep { b: serial::vec_out(b), tau: QStr(tau.clone()) })
                .collect(),
            u_prime_vertices: serial::mat_out(self.u_prime.vertices()),
            t: QStr(self.t.clone()),
            emptiness_witness: self.emptiness_witness.clone(),
            bound: RawBound {
                dual_basis: serial::mat_out(&self.bound.dual_basis),
                box_side: QStr(self.bound.box_side.clone()),
                dual_minimum: QStr(self.bound.dual_minimum.clone()),
            },
            stop: match &self.stop {
                StopReason::DimensionOne => RawStop::DimensionOne,
                StopReason::QuotientGainsInteriorPoint { b, tau, gamma } => RawStop::QuotientGainsInteriorPoint {
                    b: serial::vec_out(b),
                    tau: QStr(tau.clone()),
                    gamma: QStr(gamma.clone()),
                },
            },
        }
    }

    pub fn from_raw(raw: &RawReductionCertificate) -> Result<ReductionCertificate> {
        let phi = raw.phi.to_map()?;
        let dp = phi.target.dim();
        let verts = serial::mat_in(&raw.u_prime_vertices);
        if verts.iter().any(|v| v.len() != dp) {
            return Err(Error::InvalidCertificate("image vertex of wrong dimension".into()));
        }
        let u_prime = Polyhedron::from_vrep(dp, &verts, &[])?;
        Ok(ReductionCertificate {
            phi,
            projection_chain: raw.projection_chain.iter().map(|s| (serial::vec_in(&s.b), s.tau.0.clone())).collect(),
            u_prime,
            t: raw.t.0.clone(),
            emptiness_witness: raw.emptiness_witness.clone(),
            bound: BoundednessCertificate {
                dual_basis: serial::mat_in(&raw.bound.dual_basis),
                box_side: raw.bound.box_side.0.clone(),
                dual_minimum: raw.bound.dual_minimum.0.clone(),
            },
            stop: match &raw.stop {
                RawStop::DimensionOne => StopReason::DimensionOne,
                RawStop::QuotientGainsInteriorPoint { b, tau, gamma } => StopReason::QuotientGainsInteriorPoint {
                    b: serial::vec_in(b),
                    tau: tau.0.clone(),
                    gamma: gamma.0.clone(),
                },
            },
        })
    }

    pub fn to_json(&self) -> String {
        serial::to_json(&self.to_raw())
    }

    pub fn from_json(text: &str) -> Result<ReductionCertificate> {
        ReductionCertificate::from_raw(&serial::from_json(text)?)
    }
}
