//! Germs of toric fibrations `X → Y ∋ P` with boundary, their moment polytope
//! `□` and its polar `U`, semiampleness witnesses, log discrepancies, minimal
//! log discrepancies over the fiber and the property `(C_t)`.

mod mld;
mod moment;

pub use mld::{check_ct, mld_fiber, mld_total, sigma0_reduce, CtReport, MldResult, Sigma0Reduction};
pub use moment::{
    check_semiample, log_discrepancy, moment_data, DiscrepancyQuery, MomentData, SemiampleWitness,
};

use crate::error::{Error, Result};
use crate::exact_lattice::{
    dot, mat_vec, neg, primitive_decompose, primitive_integer, rank, to_rational_vec,
    transpose, LatVec, Lattice, LatticeMap, QMatrix, Rational,
};
use crate::polyconv::{Halfspace, Polyhedron};
use crate::serial::{self, QNum, QStr};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A fan ray `e` with log-discrepancy coefficient `a`; the boundary coefficient is `1 - a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ray {
    pub e: LatVec,
    pub a: Rational,
}

impl Ray {
    pub fn new(e: LatVec, a: Rational) -> Ray {
        Ray { e, a }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRay {
    pub e: Vec<QStr>,
    pub a: QStr,
}

/// Wire form of a germ. `pi` is the ambient `d̄ × d` matrix with `π(v) = pi · v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGerm {
    #[serde(rename = "N")]
    pub n: Vec<Vec<QStr>>,
    #[serde(rename = "Nbar")]
    pub nbar: Vec<Vec<QStr>>,
    pub pi: Vec<Vec<QNum>>,
    pub sigma_bar: Vec<Vec<QStr>>,
    pub fan: Vec<Vec<usize>>,
    pub rays: Vec<RawRay>,
}

/// A validated germ. Rays are sorted lexicographically and every maximal cone
/// lists its ray indices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationGerm {
    n: Lattice,
    nbar: Lattice,
    pi: LatticeMap,
    pi_ambient: QMatrix,
    sigma_bar: Polyhedron,
    fan: Vec<Vec<usize>>,
    cones: Vec<Polyhedron>,
    rays: Vec<Ray>,
    support: Polyhedron,
}

fn square_basis(rows: &[LatVec]) -> Result<Lattice> {
    let d = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: r.len() });
    }
    Lattice::from_basis(rows)
}

fn strongly_convex(c: &Polyhedron) -> bool {
    c.rays().iter().all(|r| !c.rays().contains(&neg(r)))
}

fn direction(e: &[Rational]) -> LatVec {
    to_rational_vec(&primitive_integer(e))
}

/// Indices of `members` lying on the hyperplane `⟨h, ·⟩ = 0`.
fn on_hyperplane(h: &[Rational], members: &[usize], rays: &[Ray]) -> Vec<usize> {
    members.iter().copied().filter(|&i| dot(h, &rays[i].e).is_zero()).collect()
}

/// Whether `sub ⊆ cone` spans a face of the cone.
fn spans_face(cone: &Polyhedron, members: &[usize], sub: &[usize], rays: &[Ray]) -> bool {
    let mut on_all: Vec<usize> = members.to_vec();
    for h in cone.ineqs() {
        if sub.iter().all(|&i| dot(&h.normal, &rays[i].e).is_zero()) {
            on_all.retain(|&i| dot(&h.normal, &rays[i].e).is_zero());
        }
    }
    on_all == sub
}

impl FibrationGerm {
    /// Validates and normalizes a germ.
    ///
    /// `pi` is the ambient `d̄ × d` matrix of the projection and `sigma_bar`
    /// lists generators of the base cone.
    pub fn new(
        n: Lattice,
        nbar: Lattice,
        pi: QMatrix,
        sigma_bar: &[LatVec],
        fan_in: &[Vec<usize>],
        rays: &[Ray],
    ) -> Result<FibrationGerm> {
        let d = n.dim();
        let db = nbar.dim();
        if pi.len() != db {
            return Err(Error::DimensionMismatch { expected: db, got: pi.len() });
        }
        if let Some(r) = pi.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: r.len() });
        }
        let r = transpose(&pi, d);
        let pi_map = LatticeMap::from_ambient(&r, &n, &nbar)?;
        if !pi_map.is_surjective() {
            return Err(Error::NotSurjective);
        }

        for ray in rays {
            if ray.e.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: ray.e.len() });
            }
            if ray.a.is_negative() || ray.a > Rational::one() {
                return Err(Error::CoefficientRange(ray.a.to_string()));
            }
            if !n.contains(&ray.e) {
                return Err(Error::NotInLattice);
            }
            let (_, content) = primitive_decompose(&ray.e, &n)?;
            if !content.is_one() {
                return Err(Error::NotPrimitive);
            }
        }
        let es: Vec<LatVec> = rays.iter().map(|r| r.e.clone()).collect();
        if rank(&es, d) < d {
            return Err(Error::RaysDontSpan);
        }

        // Normalize: rays sorted, cones sorted.
        let mut order: Vec<usize> = (0..rays.len()).collect();
        order.sort_by(|&i, &j| rays[i].e.cmp(&rays[j].e));
        let mut new_index = vec![0; rays.len()];
        for (k, &i) in order.iter().enumerate() {
            new_index[i] = k;
        }
        let rays: Vec<Ray> = order.iter().map(|&i| rays[i].clone()).collect();
        if rays.windows(2).any(|w| w[0].e == w[1].e) {
            return Err(Error::InvalidFan("duplicate ray".into()));
        }
        let mut fan: Vec<Vec<usize>> = Vec::with_capacity(fan_in.len());
        for (k, c) in fan_in.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidFan(format!("cone {k} is empty")));
            }
            let mut idx = Vec::with_capacity(c.len());
            for &i in c {
                if i >= rays.len() {
                    return Err(Error::InvalidFan(format!("cone {k} refers to missing ray {i}")));
                }
                idx.push(new_index[i]);
            }
            idx.sort_unstable();
            if idx.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFan(format!("cone {k} repeats a ray")));
            }
            fan.push(idx);
        }
        if fan.is_empty() {
            return Err(Error::InvalidFan("no maximal cones".into()));
        }
        fan.sort();
        if fan.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFan("duplicate cone".into()));
        }

        let sb_dirs: Vec<LatVec> = sigma_bar
            .iter()
            .map(|v| {
                if v.len() != db {
                    Err(Error::DimensionMismatch { expected: db, got: v.len() })
                } else {
                    Ok(v.clone())
                }
            })
            .collect::<Result<_>>()?;
        let sigma_bar = Polyhedron::cone(db, &sb_dirs);
        if !strongly_convex(&sigma_bar) {
            return Err(Error::InvalidBaseCone("cone contains a line".into()));
        }
        if !sigma_bar.is_full_dim() {
            return Err(Error::InvalidBaseCone("cone is not full-dimensional".into()));
        }

        let cones = check_fan(d, &fan, &rays)?;
        let support = check_support(d, &rays, &fan, &cones, &r, &sigma_bar, &pi_map)?;
        Ok(FibrationGerm { n, nbar, pi: pi_map, pi_ambient: pi, sigma_bar, fan, cones, rays, support })
    }

    /// The affine germ `X → X` of a cone in `lat` given by its rays.
    pub fn affine(n: Lattice, rays: &[Ray]) -> Result<FibrationGerm> {
        let d = n.dim();
        let es: Vec<LatVec> = rays.iter().map(|r| r.e.clone()).collect();
        let all: Vec<usize> = (0..rays.len()).collect();
        FibrationGerm::new(n.clone(), n, crate::exact_lattice::identity(d), &es, &[all], rays)
    }

    pub fn from_raw(raw: &RawGerm) -> Result<FibrationGerm> {
        let n = square_basis(&serial::mat_in(&raw.n))?;
        let nbar = square_basis(&serial::mat_in(&raw.nbar))?;
        let rays: Vec<Ray> = raw.rays.iter().map(|r| Ray::new(serial::vec_in(&r.e), r.a.0.clone())).collect();
        FibrationGerm::new(n, nbar, serial::num_mat_in(&raw.pi), &serial::mat_in(&raw.sigma_bar), &raw.fan, &rays)
    }

    pub fn from_json(text: &str) -> Result<FibrationGerm> {
        FibrationGerm::from_raw(&serial::from_json(text)?)
    }

    /// Canonical wire form; re-validating it reproduces `self`.
    pub fn to_raw(&self) -> RawGerm {
        RawGerm {
            n: serial::mat_out(self.n.basis()),
            nbar: serial::mat_out(self.nbar.basis()),
            pi: serial::num_mat_out(&self.pi_ambient),
            sigma_bar: serial::mat_out(self.sigma_bar.rays()),
            fan: self.fan.clone(),
            rays: self.rays.iter().map(|r| RawRay { e: serial::vec_out(&r.e), a: QStr(r.a.clone()) }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serial::to_json(&self.to_raw())
    }

    pub fn dim(&self) -> usize {
        self.n.dim()
    }

    pub fn base_dim(&self) -> usize {
        self.nbar.dim()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.n
    }

    pub fn base_lattice(&self) -> &Lattice {
        &self.nbar
    }

    pub fn projection(&self) -> &LatticeMap {
        &self.pi
    }

    pub fn projection_ambient(&self) -> &QMatrix {
        &self.pi_ambient
    }

    pub fn sigma_bar(&self) -> &Polyhedron {
        &self.sigma_bar
    }

    pub fn fan(&self) -> &[Vec<usize>] {
        &self.fan
    }

    pub fn cones(&self) -> &[Polyhedron] {
        &self.cones
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// `|Δ| = π⁻¹(σ̄)`.
    pub fn support(&self) -> &Polyhedron {
        &self.support
    }

    /// Whether `π(e)` lies in the interior of `σ̄`, i.e. `e ∈ int|Δ|`.
    pub fn over_fiber(&self, e: &[Rational]) -> bool {
        self.base_dim() == 0 || self.sigma_bar.interior_contains(&self.pi.apply(e))
    }

    /// A single cone and an isomorphic projection.
    pub fn is_affine(&self) -> bool {
        self.fan.len() == 1 && self.base_dim() == self.dim()
    }

    pub fn boundary_is_zero(&self) -> bool {
        self.rays.iter().all(|r| r.a.is_one())
    }

    /// Index of the first maximal cone containing `e`.
    pub fn cone_containing(&self, e: &[Rational]) -> Option<usize> {
        self.cones.iter().position(|c| c.contains(e))
    }
}

/// Checks each maximal cone and that cones meet along common faces.
fn check_fan(d: usize, fan: &[Vec<usize>], rays: &[Ray]) -> Result<Vec<Polyhedron>> {
    let mut used = vec![false; rays.len()];
    let mut cones = Vec::with_capacity(fan.len());
    for (k, c) in fan.iter().enumerate() {
        let gens: Vec<LatVec> = c.iter().map(|&i| rays[i].e.clone()).collect();
        let cone = Polyhedron::cone(d, &gens);
        if !cone.is_full_dim() {
            return Err(Error::InvalidFan(format!("cone {k} is not full-dimensional")));
        }
        if !strongly_convex(&cone) {
            return Err(Error::InvalidFan(format!("cone {k} contains a line")));
        }
        let mut dirs: Vec<LatVec> = gens.iter().map(|e| direction(e)).collect();
        dirs.sort();
        if dirs != cone.rays() {
            return Err(Error::InvalidFan(format!("cone {k} lists a ray that is not extremal")));
        }
        for &i in c {
            used[i] = true;
        }
        cones.push(cone);
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::InvalidFan(format!("ray {i} lies in no cone")));
    }
    for a in 0..fan.len() {
        for b in a + 1..fan.len() {
            let common: Vec<usize> = fan[a].iter().copied().filter(|i| fan[b].contains(i)).collect();
            let meet = cones[a].intersect(&cones[b])?;
            let gens: Vec<LatVec> = common.iter().map(|&i| rays[i].e.clone()).collect();
            let face = Polyhedron::cone(d, &gens);
            if !meet.same_set(&face)
                || !spans_face(&cones[a], &fan[a], &common, rays)
                || !spans_face(&cones[b], &fan[b], &common, rays)
            {
                return Err(Error::InvalidFan(format!("cones {a} and {b} do not meet in a common face")));
            }
        }
    }
    Ok(cones)
}

/// Checks `|Δ| = π⁻¹(σ̄)`: the rays map into `σ̄`, their hull is the preimage,
/// and every wall not on the boundary of the hull is shared by two cones.
fn check_support(
    d: usize,
    rays: &[Ray],
    fan: &[Vec<usize>],
    cones: &[Polyhedron],
    r: &QMatrix,
    sigma_bar: &Polyhedron,
    pi: &LatticeMap,
) -> Result<Polyhedron> {
    for (i, ray) in rays.iter().enumerate() {
        if !sigma_bar.contains(&pi.apply(&ray.e)) {
            return Err(Error::SupportMismatch(format!("ray {i} maps outside the base cone")));
        }
    }
    let pre: Vec<Halfspace> =
        sigma_bar.ineqs().iter().map(|h| Halfspace::new(mat_vec(r, &h.normal), Rational::zero())).collect();
    let preimage = Polyhedron::from_hrep(d, &pre)?;
    let es: Vec<LatVec> = rays.iter().map(|r| r.e.clone()).collect();
    let hull = Polyhedron::cone(d, &es);
    if !hull.same_set(&preimage) {
        return Err(Error::SupportMismatch("hull of the rays differs from the preimage of the base cone".into()));
    }
    let mut walls: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (k, cone) in cones.iter().enumerate() {
        for h in cone.ineqs() {
            let wall = on_hyperplane(&h.normal, &fan[k], rays);
            let on_boundary = preimage
                .ineqs()
                .iter()
                .any(|g| wall.iter().all(|&i| dot(&g.normal, &rays[i].e).is_zero()));
            if !on_boundary {
                *walls.entry(wall).or_default() += 1;
            }
        }
    }
    if let Some((w, c)) = walls.iter().find(|(_, &c)| c != 2) {
        return Err(Error::SupportMismatch(format!("interior wall {w:?} lies in {c} maximal cone(s)")));
    }
    Ok(preimage)
}
