//! Brute-force reference computations. Nothing here calls the polyhedral,
//! normal-form or germ algorithms of the other modules; only the exact number
//! types, the germ's raw data, the cell cap and the parallel map are shared.

mod golden;
mod linalg;

pub use golden::{
    check_golden, compute_golden, fixtures_root, golden_cases, golden_path, oracle_mld_doubling, run_golden, GoldenCase,
    GoldenOutcome, GoldenValue, FIXTURES_ENV,
};

use crate::error::{Error, Result};
use crate::exact_lattice::{Int, LatVec, QMatrix, Rational};
use crate::polyconv::cell_cap;
use crate::serial::{self, QStr};
use crate::toric_germ::FibrationGerm;
use linalg::{dot, inverse, kernel_line, rank, row_times, solve_any};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A scan predicate; inequalities read `⟨n, x⟩ ≥ c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "ineqs", rename_all = "snake_case")]
pub enum Predicate {
    InClosure(Vec<(Vec<QStr>, QStr)>),
    InInterior(Vec<(Vec<QStr>, QStr)>),
    Primitive,
}

impl Predicate {
    pub fn closure(ineqs: &[(LatVec, Rational)]) -> Predicate {
        Predicate::InClosure(wire(ineqs))
    }

    pub fn interior(ineqs: &[(LatVec, Rational)]) -> Predicate {
        Predicate::InInterior(wire(ineqs))
    }

    /// Inequalities of the closure or interior predicates.
    pub fn ineqs(&self) -> Vec<(LatVec, Rational)> {
        match self {
            Predicate::InClosure(v) | Predicate::InInterior(v) => {
                v.iter().map(|(n, c)| (serial::vec_in(n), c.0.clone())).collect()
            }
            Predicate::Primitive => Vec::new(),
        }
    }

    fn holds(&self, ineqs: &[(LatVec, Rational)], coords: &[i64], x: &[Rational]) -> bool {
        match self {
            Predicate::InClosure(_) => ineqs.iter().all(|(n, c)| dot(n, x) >= *c),
            Predicate::InInterior(_) => ineqs.iter().all(|(n, c)| dot(n, x) > *c),
            Predicate::Primitive => coords.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1,
        }
    }
}

fn wire(ineqs: &[(LatVec, Rational)]) -> Vec<(Vec<QStr>, QStr)> {
    ineqs.iter().map(|(n, c)| (serial::vec_out(n), QStr(c.clone()))).collect()
}

/// An exhaustive scan of a coordinate box of a lattice; replaying it must reproduce `hits`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRecord {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub basis: Vec<Vec<QStr>>,
    pub predicate: Predicate,
    pub hits: Vec<Vec<QStr>>,
}

fn check_cells(lo: &[i64], hi: &[i64]) -> Result<()> {
    let cells = lo
        .iter()
        .zip(hi)
        .map(|(l, h)| if h < l { 0u128 } else { (h - l + 1) as u128 })
        .fold(1u128, |a, b| a.saturating_mul(b));
    if cells > cell_cap() as u128 {
        return Err(Error::BoxTooLarge { cells, cap: cell_cap() });
    }
    Ok(())
}

/// Visits every coordinate vector of the box, first coordinate split across threads.
fn scan<T: Send, F>(lo: &[i64], hi: &[i64], f: F) -> Result<Vec<T>>
where
    F: Fn(&[i64]) -> Option<T> + Sync + Send,
{
    check_cells(lo, hi)?;
    let d = lo.len();
    if d == 0 {
        return Ok(f(&[]).into_iter().collect());
    }
    if lo.iter().zip(hi).any(|(l, h)| h < l) {
        return Ok(Vec::new());
    }
    Ok(crate::par::flat_map_range(lo[0], hi[0] + 1, |x0| {
        let mut out = Vec::new();
        let mut c = lo.to_vec();
        c[0] = x0;
        'outer: loop {
            if let Some(v) = f(&c) {
                out.push(v);
            }
            for i in (1..d).rev() {
                if c[i] < hi[i] {
                    c[i] += 1;
                    continue 'outer;
                }
                c[i] = lo[i];
            }
            return out;
        }
    }))
}

fn point(basis: &QMatrix, c: &[i64]) -> LatVec {
    let cq: LatVec = c.iter().map(|&v| Rational::from_integer(Int::from(v))).collect();
    row_times(&cq, basis, basis.len())
}

pub fn oracle_lattice_scan(basis: &QMatrix, lo: &[i64], hi: &[i64], predicate: Predicate) -> Result<EnumerationRecord> {
    let ineqs = predicate.ineqs();
    let mut hits = scan(lo, hi, |c| {
        let x = point(basis, c);
        predicate.holds(&ineqs, c, &x).then_some(x)
    })?;
    hits.sort();
    Ok(EnumerationRecord {
        lo: lo.to_vec(),
        hi: hi.to_vec(),
        basis: serial::mat_out(basis),
        predicate,
        hits: serial::mat_out(&hits),
    })
}

/// Re-runs the scan and compares hits.
pub fn replay(rec: &EnumerationRecord) -> bool {
    let basis = serial::mat_in(&rec.basis);
    if rec.lo.len() != basis.len() || rec.hi.len() != basis.len() {
        return false;
    }
    match oracle_lattice_scan(&basis, &rec.lo, &rec.hi, rec.predicate.clone()) {
        Ok(again) => again.hits == rec.hits,
        Err(_) => false,
    }
}

/// Smallest integer coordinate box containing the given points.
pub fn covering_box(basis: &QMatrix, points: &[LatVec]) -> Option<(Vec<i64>, Vec<i64>)> {
    let d = basis.len();
    let inv = inverse(basis)?;
    let coords: Vec<LatVec> = points.iter().map(|p| row_times(p, &inv, d)).collect();
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    #[allow(clippy::needless_range_loop)]
    for j in 0..d {
        let mn = coords.iter().map(|c| &c[j]).min()?;
        let mx = coords.iter().map(|c| &c[j]).max()?;
        lo.push(mn.ceil().to_integer().to_i64()?);
        hi.push(mx.floor().to_integer().to_i64()?);
    }
    Some((lo, hi))
}

/// Whether every point lies in the coordinate box.
pub fn box_covers(basis: &QMatrix, lo: &[i64], hi: &[i64], points: &[LatVec]) -> bool {
    let d = basis.len();
    let Some(inv) = inverse(basis) else { return false };
    points.iter().all(|p| {
        let c = row_times(p, &inv, d);
        c.iter()
            .zip(lo.iter().zip(hi))
            .all(|(x, (l, h))| x.ceil().to_integer() >= Int::from(*l) && x.floor().to_integer() <= Int::from(*h))
    })
}

/// Facet normals `n` (with `⟨n, r⟩ ≥ 0` on all generators) of a full-dimensional cone, by subsets.
fn cone_facets(gens: &[LatVec], dim: usize) -> Vec<LatVec> {
    let mut out: Vec<LatVec> = Vec::new();
    if dim == 0 {
        return out;
    }
    for subset in subsets(gens.len(), dim - 1) {
        let rows: Vec<LatVec> = subset.iter().map(|&i| gens[i].clone()).collect();
        let Some(n) = kernel_line(&rows, dim) else { continue };
        let vals: Vec<Rational> = gens.iter().map(|g| dot(&n, g)).collect();
        let n = if vals.iter().all(|v| !v.is_negative()) {
            n
        } else if vals.iter().all(|v| !v.is_positive()) {
            n.iter().map(|x| -x.clone()).collect()
        } else {
            continue;
        };
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn sup_norm(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// Values of `value` at the primitive `e` of an ambient box of the given radius with
/// `π(e)` in `σ̄` (or in its interior when `fiber_only`).
fn support_scan<F>(g: &FibrationGerm, radius: &Rational, fiber_only: bool, value: F) -> Result<Vec<Rational>>
where
    F: Fn(&LatVec) -> Option<Rational> + Sync + Send,
{
    let d = g.dim();
    let p = g.projection_ambient();
    let facets = cone_facets(g.sigma_bar().rays(), g.base_dim());
    let basis = g.lattice().basis().clone();
    let inv = inverse(&basis).ok_or(Error::SingularBasis)?;
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    #[allow(clippy::needless_range_loop)]
    for j in 0..d {
        let w: Rational = (0..d).map(|k| inv[k][j].abs()).sum::<Rational>() * radius;
        let b = w.floor().to_integer().to_i64().ok_or(Error::BoxTooLarge { cells: u128::MAX, cap: cell_cap() })?;
        lo.push(-b);
        hi.push(b);
    }
    scan(&lo, &hi, |c| {
        if c.iter().fold(0i64, |g, &v| g.gcd(&v)) != 1 {
            return None;
        }
        let x = point(&basis, c);
        let image: LatVec = p.iter().map(|row| dot(row, &x)).collect();
        let inside = facets.iter().all(|n| {
            let v = dot(n, &image);
            if fiber_only { v.is_positive() } else { !v.is_negative() }
        });
        if !inside {
            return None;
        }
        value(&x)
    })
}

/// `cap·max|e_i/a_i| + 4·Σ_{a_i=0}|e_i|` in the sup norm.
pub fn search_radius(g: &FibrationGerm, cap: &Rational) -> Rational {
    let rays = g.rays();
    let zero_part: Rational = rays
        .iter()
        .filter(|r| r.a.is_zero())
        .map(|r| sup_norm(&r.e) * Rational::from_integer(4.into()))
        .sum();
    let far = rays
        .iter()
        .filter(|r| !r.a.is_zero())
        .map(|r| sup_norm(&r.e) / &r.a)
        .max()
        .unwrap_or_else(Rational::zero);
    zero_part + cap * far
}

/// `min{max_σ⟨ψ_σ, e⟩ : e ∈ N primitive, π(e) ∈ int σ̄, value ≤ cap}` over the ambient box
/// of radius [`search_radius`].
pub fn oracle_mld(g: &FibrationGerm, cap: &Rational) -> Result<Rational> {
    let d = g.dim();
    let rays = g.rays();
    let mut psis = Vec::new();
    for cone in g.fan() {
        let a: Vec<LatVec> = cone.iter().map(|&i| rays[i].e.clone()).collect();
        let b: LatVec = cone.iter().map(|&i| rays[i].a.clone()).collect();
        let psi = solve_any(&a, &b, d).ok_or(Error::RequiresSemiample)?;
        if rays.iter().any(|r| dot(&psi, &r.e) > r.a) {
            return Err(Error::RequiresSemiample);
        }
        psis.push(psi);
    }
    let vals = support_scan(g, &search_radius(g, cap), true, |x| {
        let v = psis.iter().map(|psi| dot(psi, x)).max()?;
        (v <= *cap).then_some(v)
    })?;
    vals.into_iter().min().ok_or(Error::CapTooSmall)
}

/// `min −(1/n)·min_m⟨m, e⟩` over primitive `e` of the box of radius [`search_radius`]`(cap)`,
/// over the fiber or over all of `|Δ|`; `None` when no point is scanned.
pub fn oracle_complement_min(
    g: &FibrationGerm,
    characters: &[LatVec],
    n: &Rational,
    fiber_only: bool,
    cap: &Rational,
) -> Result<Option<Rational>> {
    if characters.is_empty() {
        return Ok(None);
    }
    let vals = support_scan(g, &search_radius(g, cap), fiber_only, |x| {
        let m = characters.iter().map(|c| dot(c, x)).min()?;
        Some(-m / n)
    })?;
    Ok(vals.into_iter().min())
}

/// Facets `(n, c)` with `⟨n, x⟩ ≥ c` of the hull of full-dimensional `vertices`, by `d`-subsets.
fn polytope_facets(vertices: &[LatVec], d: usize) -> Vec<(LatVec, Rational)> {
    let mut out: Vec<(LatVec, Rational)> = Vec::new();
    for subset in subsets(vertices.len(), d) {
        let rows: Vec<LatVec> = subset
            .iter()
            .map(|&i| vertices[i].iter().cloned().chain([Rational::from_integer((-1).into())]).collect())
            .collect();
        let Some(h) = kernel_line(&rows, d + 1) else { continue };
        let (n, c) = (h[..d].to_vec(), h[d].clone());
        if n.iter().all(Zero::is_zero) {
            continue;
        }
        let vals: Vec<Rational> = vertices.iter().map(|v| dot(&n, v) - &c).collect();
        let (n, c) = if vals.iter().all(|v| !v.is_negative()) {
            (n, c)
        } else if vals.iter().all(|v| !v.is_positive()) {
            (n.iter().map(|x| -x.clone()).collect(), -c)
        } else {
            continue;
        };
        out.push((n, c));
    }
    out
}

/// Pikhurko constant by scanning interior lattice points and, for each, shooting
/// every difference of two vertices against every facet.
pub fn oracle_gamma(basis: &QMatrix, vertices: &[LatVec]) -> Result<Rational> {
    let d = basis.len();
    let diffs: Vec<LatVec> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
        .collect();
    if vertices.is_empty() || rank(&diffs, d) < d {
        return Err(Error::DegenerateDimension);
    }
    let facets = polytope_facets(vertices, d);
    let (lo, hi) = covering_box(basis, vertices).ok_or(Error::SingularBasis)?;
    let interior = scan(&lo, &hi, |c| {
        let x = point(basis, c);
        facets.iter().all(|(n, k)| dot(n, &x) > *k).then_some(x)
    })?;
    let mut best: Option<Rational> = None;
    for p in &interior {
        let mut t: Option<Rational> = None;
        for (n, c) in &facets {
            let slack = dot(n, p) - c;
            for v in vertices {
                for w in vertices {
                    let drop = dot(n, w) - dot(n, v);
                    if drop.is_positive() {
                        let bound = &slack / &drop;
                        if t.as_ref().is_none_or(|x| bound < *x) {
                            t = Some(bound);
                        }
                    }
                }
            }
        }
        let t = t.expect("a full-dimensional polytope has two distinct vertices");
        if best.as_ref().is_none_or(|b| t > *b) {
            best = Some(t);
        }
    }
    best.ok_or(Error::NoInteriorLatticePoint)
}
