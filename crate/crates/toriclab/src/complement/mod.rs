//! Complements of bounded index built from characters of `n□`, and hyperplane sections
//! of the base read off a reduction certificate.

mod hyperplane;

pub use hyperplane::{hyperplane_section, hyperplane_sections, HyperplaneCertificate};

use crate::error::{Error, Result};
use crate::exact_lattice::{
    dot, lcm_denominators, primitive_decompose, qint, scale, Int, LatVec, Lattice, Rational,
};
use crate::oracle::oracle_complement_min;
use crate::polyconv::{gauge, lattice_points, polar, Polyhedron, Region};
use crate::reduction::{reduce_germ, verify_reduction_detail, RawReductionCertificate, ReductionCertificate};
use crate::serial::{self, QStr};
use crate::toric_germ::{moment_data, mld_total, FibrationGerm};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const DEFAULT_INDEX_CAP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Fiber,
    Total,
}

/// `B⁺ = B + (1/n)·D` for a general `D` in the span of `characters`, all inside `M ∩ n□`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementCertificate {
    pub n: Int,
    pub characters: Vec<LatVec>,
    pub bplus_coeffs: Vec<Rational>,
    /// A lower bound for the mld of `(X, B⁺)` over the scope; at least `t`.
    pub verified_mld: Rational,
    pub scope: Scope,
    pub t: Rational,
    /// Present for local complements, whose characters come from this reduction.
    pub reduction: Option<ReductionCertificate>,
}

/// Whether `1 − a` is `r`-hyperstandard: `a = x/q` with `rx ∈ Z`, `x ∈ [0,1]`, `q ≥ 1`.
pub fn is_hyperstandard(a: &Rational, r: u64) -> bool {
    if r == 0 || a.is_negative() || *a > Rational::one() {
        return false;
    }
    if a.is_zero() {
        return true;
    }
    a.numer() <= &a.denom().gcd(&Int::from(r))
}

pub fn check_hyperstandard(g: &FibrationGerm, r: u64) -> Result<()> {
    match g.rays().iter().find(|ray| !is_hyperstandard(&ray.a, r)) {
        Some(ray) => Err(Error::NotHyperstandard(crate::exact_lattice::fmt_rational(&(Rational::one() - &ray.a)))),
        None => Ok(()),
    }
}

fn bplus(g: &FibrationGerm, characters: &[LatVec], n: &Rational) -> Vec<Rational> {
    g.rays()
        .iter()
        .map(|ray| {
            let m = characters.iter().map(|c| dot(c, &ray.e)).min().expect("nonempty characters");
            Rational::one() - &ray.a + (m + n * &ray.a) / n
        })
        .collect()
}

/// Interior of the tangent cone at the origin of a polytope containing it.
fn in_open_cone(p: &Polyhedron, x: &[Rational]) -> bool {
    p.ineqs().iter().filter(|h| h.offset.is_zero()).all(|h| dot(&h.normal, x).is_positive())
}

/// Least gauge of `u` over nonzero lattice points of `c·u`, optionally only inside `int cone(u)`.
fn least_gauge(lat: &Lattice, u: &Polyhedron, c: &Rational, open: bool) -> Result<Option<Rational>> {
    let pts = lattice_points(lat, &u.scale(c), Region::Closure)?;
    Ok(pts
        .iter()
        .filter(|x| x.iter().any(|v| !v.is_zero()) && (!open || in_open_cone(u, x)))
        .filter_map(|x| gauge(u, x))
        .min())
}

/// Local complement over the fiber from the vertices of `n□′`, where `□′` is the polar of
/// the reduced image `U′` and `n` clears the denominators of its vertices.
pub fn local_complement(g: &FibrationGerm, t: &Rational, r: u64) -> Result<ComplementCertificate> {
    if g.base_dim() == 0 {
        return Err(Error::BaseIsPoint);
    }
    check_hyperstandard(g, r)?;
    let red = reduce_germ(g, t)?;
    let target = red.phi.target.clone();
    let box_prime = polar(&red.u_prime)?;
    let dual = target.dual();
    let n = lcm_denominators(box_prime.vertices().iter().flat_map(|v| dual.coords(v)).collect::<Vec<_>>().iter());
    let nq = qint(&n);
    let mut characters: Vec<LatVec> =
        box_prime.vertices().iter().map(|v| red.phi.pullback(&scale(&nq, v))).collect();
    characters.sort();
    characters.dedup();
    // On int cone(U′) the characters realise the gauge of U′, whose minimum there is at least t.
    let verified_mld = lower_bound_in_cone(&target, &red.u_prime, &Rational::one())?;
    if verified_mld < *t {
        return Err(Error::Internal("local complement below t".into()));
    }
    Ok(ComplementCertificate {
        n,
        bplus_coeffs: bplus(g, &characters, &nq),
        characters,
        verified_mld,
        scope: Scope::Fiber,
        t: t.clone(),
        reduction: Some(red),
    })
}

/// Least gauge over `N′ ∩ int cone(U′)`, searched in growing multiples of `U′`.
fn lower_bound_in_cone(lat: &Lattice, u: &Polyhedron, start: &Rational) -> Result<Rational> {
    let mut c = start.clone();
    for _ in 0..16 {
        if let Some(v) = least_gauge(lat, u, &c, true)? {
            return Ok(v);
        }
        c *= Rational::from_integer(2.into());
    }
    Err(Error::Internal("no lattice point in the open image cone".into()))
}

/// Primitive generators of the rays of `σ̄^∨` in `M̄`, pulled back to `M`.
fn pulled_back_dual_rays(g: &FibrationGerm) -> Result<Vec<LatVec>> {
    let dual = g.base_lattice().dual();
    let p = g.projection_ambient();
    let mut out = Vec::new();
    for h in g.sigma_bar().ineqs() {
        let (m, _) = primitive_decompose(&h.normal, &dual)?;
        let mut pulled = vec![Rational::zero(); g.dim()];
        for (mj, row) in m.iter().zip(p) {
            for (x, y) in pulled.iter_mut().zip(row) {
                *x += mj * y;
            }
        }
        out.push(pulled);
    }
    Ok(out)
}

/// Generators `A` of `M ∩ n□` modulo `π*(M̄ ∩ σ̄^∨)`: lattice points of
/// `n·conv(vertices) + Σ [0, 1]·π*(h_j)`, without those `a` with `a − π*(h_j) ∈ n□`.
pub fn module_generators(g: &FibrationGerm, n: &Int) -> Result<Vec<LatVec>> {
    let md = moment_data(g)?;
    let nq = qint(n);
    let hs = pulled_back_dual_rays(g)?;
    let d = g.dim();
    let mut trunc = Polyhedron::from_vrep(d, &md.moment.vertices().iter().map(|v| scale(&nq, v)).collect::<Vec<_>>(), &[])?;
    for h in &hs {
        trunc = trunc.minkowski_sum(&Polyhedron::from_vrep(d, &[vec![Rational::zero(); d], h.clone()], &[])?);
    }
    let moment_n = md.moment.scale(&nq);
    let m = g.lattice().dual();
    let pts = lattice_points(&m, &trunc, Region::Closure)?;
    let mut keep: Vec<LatVec> = pts
        .into_iter()
        .filter(|a| {
            !hs.iter().any(|h| {
                let b: LatVec = a.iter().zip(h).map(|(x, y)| x - y).collect();
                moment_n.contains(&b)
            })
        })
        .collect();
    keep.sort();
    Ok(keep)
}

/// `min −(1/n)·min_{a∈A}⟨a, e⟩` over nonzero `e ∈ N ∩ |Δ|`, or `None` when it is zero
/// along a rational direction.
fn global_value(g: &FibrationGerm, chars: &[LatVec], n: &Int) -> Result<Option<Rational>> {
    let nq = qint(n);
    let d = g.dim();
    let verts: Vec<LatVec> = chars.iter().map(|a| scale(&nq.recip(), a)).collect();
    let q = Polyhedron::from_vrep(d, &verts, &pulled_back_dual_rays(g)?)?;
    let uq = polar(&q)?;
    if !uq.is_compact() || !uq.is_full_dim() {
        return Ok(None);
    }
    let c = g.rays().iter().filter_map(|r| gauge(&uq, &r.e)).max().expect("rays").max(Rational::one());
    least_gauge(g.lattice(), &uq, &c, false)
}

/// Least `n` among multiples of `r·lcm(denominators of a_i)` with `1/n ≤ 1 − t` and
/// `−(1/n)·min⟨M ∩ n□, e⟩ ≥ t` for every primitive `e ∈ |Δ|`.
pub fn global_complement(g: &FibrationGerm, t: &Rational, r: u64, index_cap: u64) -> Result<ComplementCertificate> {
    if !t.is_positive() || *t >= Rational::one() {
        return Err(Error::TOutOfRange);
    }
    check_hyperstandard(g, r)?;
    let total = mld_total(g)?;
    if total.value < *t {
        return Err(Error::MldTooSmall(crate::exact_lattice::fmt_rational(&total.value)));
    }
    let l = lcm_denominators(g.rays().iter().map(|ray| &ray.a));
    let step = l * Int::from(r);
    let mut n = step.clone();
    while n <= Int::from(index_cap) {
        let nq = qint(&n);
        if nq.recip() <= Rational::one() - t {
            let chars = module_generators(g, &n)?;
            if let Some(v) = global_value(g, &chars, &n)? {
                if v >= *t {
                    return Ok(ComplementCertificate {
                        bplus_coeffs: bplus(g, &chars, &nq),
                        n,
                        characters: chars,
                        verified_mld: v,
                        scope: Scope::Total,
                        t: t.clone(),
                        reduction: None,
                    });
                }
            }
        }
        n += &step;
    }
    Err(Error::IndexCapExceeded(index_cap))
}

/// Re-checks a complement certificate; the error names the first failing clause.
pub fn verify_complement_detail(cert: &ComplementCertificate, g: &FibrationGerm, t: &Rational) -> std::result::Result<(), String> {
    if !cert.n.is_positive() {
        return Err("index is not positive".into());
    }
    if cert.characters.is_empty() {
        return Err("no characters".into());
    }
    if cert.t != *t {
        return Err("t differs from the certified value".into());
    }
    let nq = qint(&cert.n);
    let m = g.lattice().dual();
    for c in &cert.characters {
        if c.len() != g.dim() || !m.contains(c) {
            return Err("character outside the dual lattice".into());
        }
        if g.rays().iter().any(|ray| dot(c, &ray.e) + &nq * &ray.a < Rational::zero()) {
            return Err("character outside n□".into());
        }
    }
    let coeffs = bplus(g, &cert.characters, &nq);
    if coeffs != cert.bplus_coeffs {
        return Err("B⁺ coefficients differ from the characters".into());
    }
    if g.rays().iter().zip(&coeffs).any(|(ray, b)| *b < Rational::one() - &ray.a || *b > Rational::one()) {
        return Err("B⁺ coefficient outside [b_i, 1]".into());
    }
    if cert.verified_mld < *t {
        return Err("certified mld below t".into());
    }
    if cert.scope == Scope::Total && nq.recip() > Rational::one() - t {
        return Err("1/n exceeds 1 − t".into());
    }
    if let Some(red) = &cert.reduction {
        let u = moment_data(g).map_err(|e| e.to_string())?.u;
        verify_reduction_detail(red, g.lattice(), &u, t).map_err(|e| format!("reduction: {e}"))?;
        let bp = polar(&red.u_prime).map_err(|e| e.to_string())?;
        let mut expect: Vec<LatVec> = bp.vertices().iter().map(|v| red.phi.pullback(&scale(&nq, v))).collect();
        expect.sort();
        expect.dedup();
        if expect != cert.characters {
            return Err("characters are not the pulled-back vertices of n□′".into());
        }
    }
    let cap = &cert.verified_mld + Rational::one();
    match oracle_complement_min(g, &cert.characters, &nq, cert.scope == Scope::Fiber, &cap) {
        Ok(Some(v)) if v < cert.verified_mld => Err(format!("enumeration finds value {v} below the certified mld")),
        Ok(_) => Ok(()),
        Err(e) => Err(format!("enumeration failed: {e}")),
    }
}

pub fn verify_complement(cert: &ComplementCertificate, g: &FibrationGerm, t: &Rational) -> bool {
    verify_complement_detail(cert, g, t).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComplementCertificate {
    pub n: QStr,
    pub characters: Vec<Vec<QStr>>,
    pub bplus_coeffs: Vec<QStr>,
    pub verified_mld: QStr,
    pub scope: Scope,
    pub t: QStr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<RawReductionCertificate>,
}

impl ComplementCertificate {
    pub fn to_raw(&self) -> RawComplementCertificate {
        RawComplementCertificate {
            n: QStr(qint(&self.n)),
            characters: serial::mat_out(&self.characters),
            bplus_coeffs: serial::vec_out(&self.bplus_coeffs),
            verified_mld: QStr(self.verified_mld.clone()),
            scope: self.scope,
            t: QStr(self.t.clone()),
            reduction: self.reduction.as_ref().map(|r| r.to_raw()),
        }
    }

    pub fn from_raw(raw: &RawComplementCertificate) -> Result<ComplementCertificate> {
        if !raw.n.0.is_integer() {
            return Err(Error::InvalidCertificate("non-integral index".into()));
        }
        Ok(ComplementCertificate {
            n: raw.n.0.to_integer(),
            characters: serial::mat_in(&raw.characters),
            bplus_coeffs: serial::vec_in(&raw.bplus_coeffs),
            verified_mld: raw.verified_mld.0.clone(),
            scope: raw.scope,
            t: raw.t.0.clone(),
            reduction: raw.reduction.as_ref().map(ReductionCertificate::from_raw).transpose()?,
        })
    }

    pub fn to_json(&self) -> String {
        serial::to_json(&self.to_raw())
    }

    pub fn from_json(text: &str) -> Result<ComplementCertificate> {
        ComplementCertificate::from_raw(&serial::from_json(text)?)
    }

    /// Index as a machine integer when it fits.
    pub fn n_u64(&self) -> Option<u64> {
        self.n.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lattice::{q, qf, qvec};
    use crate::toric_germ::examples::*;

    #[test]
    fn hyperstandard_membership() {
        assert!(is_hyperstandard(&qf(1, 2), 1));
        assert!(is_hyperstandard(&q(0), 1));
        assert!(is_hyperstandard(&q(1), 1));
        assert!(!is_hyperstandard(&qf(2, 3), 1));
        assert!(!is_hyperstandard(&qf(2, 3), 2));
        assert!(is_hyperstandard(&qf(2, 3), 3));
        assert!(!is_hyperstandard(&qf(3, 2), 3));
        assert_eq!(check_hyperstandard(&a1(qf(2, 3)), 1), Err(Error::NotHyperstandard("1/3".into())));
    }

    #[test]
    fn line_with_half_boundary_has_index_two() {
        let g = a1(qf(1, 2));
        let c = local_complement(&g, &qf(1, 2), 1).unwrap();
        assert_eq!(c.n, Int::from(2));
        assert_eq!(c.characters, vec![qvec(&[-1])]);
        assert_eq!(c.bplus_coeffs, vec![qf(1, 2)]);
        assert!(verify_complement(&c, &g, &qf(1, 2)));
    }

    #[test]
    fn p1_times_a1_local() {
        let g = p1_a1();
        let c = local_complement(&g, &q(1), 1).unwrap();
        assert_eq!(c.n, Int::from(1));
        assert_eq!(c.characters, vec![qvec(&[0, -1])]);
        assert_eq!(c.bplus_coeffs, vec![q(1), q(0), q(1)]);
        assert_eq!(c.verified_mld, q(1));
        assert_eq!(verify_complement_detail(&c, &g, &q(1)), Ok(()));
        assert_eq!(local_complement(&g, &qf(3, 2), 1), Err(Error::CtFails(qvec(&[0, 1]))));
        assert_eq!(local_complement(&p1_point(qf(1, 2), qf(1, 2)), &qf(1, 2), 1), Err(Error::BaseIsPoint));
    }

    #[test]
    fn global_examples() {
        let g = p1_point(qf(1, 2), qf(1, 2));
        let c = global_complement(&g, &qf(1, 2), 1, DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(c.n, Int::from(2));
        assert_eq!(verify_complement_detail(&c, &g, &qf(1, 2)), Ok(()));
        let g = p1_a1();
        let c = global_complement(&g, &qf(1, 2), 1, DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(c.n, Int::from(2));
        assert!(verify_complement(&c, &g, &qf(1, 2)));
        let g = a2(q(1), q(1));
        let c = global_complement(&g, &qf(1, 2), 1, DEFAULT_INDEX_CAP).unwrap();
        assert_eq!(c.n, Int::from(2));
        assert!(c.verified_mld >= qf(1, 2));
        assert!(verify_complement(&c, &g, &qf(1, 2)));
        assert_eq!(global_complement(&g, &q(1), 1, DEFAULT_INDEX_CAP), Err(Error::TOutOfRange));
        assert_eq!(
            global_complement(&a2(q(1), qf(1, 4)), &qf(1, 2), 1, DEFAULT_INDEX_CAP),
            Err(Error::MldTooSmall("1/4".into()))
        );
    }

    #[test]
    fn global_monotone_in_the_index() {
        let g = p1_a1();
        for n in [2, 3, 4] {
            let chars = module_generators(&g, &Int::from(n)).unwrap();
            assert!(global_value(&g, &chars, &Int::from(n)).unwrap().unwrap() >= qf(1, 2));
        }
    }

    #[test]
    fn mutations_fail() {
        let g = p1_a1();
        let c = local_complement(&g, &q(1), 1).unwrap();
        let mut moved = c.clone();
        moved.characters[0] = qvec(&[0, -2]);
        assert!(!verify_complement(&moved, &g, &q(1)));
        let g = a1(qf(1, 2));
        let c = local_complement(&g, &qf(1, 2), 1).unwrap();
        let mut lowered = c.clone();
        lowered.n = Int::from(1);
        assert!(!verify_complement(&lowered, &g, &qf(1, 2)));
    }

    #[test]
    fn json_round_trip() {
        let c = local_complement(&p1_a1(), &q(1), 1).unwrap();
        assert_eq!(ComplementCertificate::from_json(&c.to_json()).unwrap(), c);
    }
}
