use super::moment::{check_semiample, moment_data};
use super::FibrationGerm;
use crate::error::{Error, Result};
use crate::exact_lattice::{
    add, dot, is_zero_vec, primitive_decompose, quotient_by, rank, scale, zero_vec, LatVec, Lattice,
    LatticeMap, Rational,
};
use crate::polyconv::{gauge, lattice_points, Polyhedron, Region};
use num_traits::{One, Signed, Zero};

/// The quotient `g: N → N₀ = N / (N ∩ (σ₀ - σ₀))` and the compact image `U₀ = g(U)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma0Reduction {
    pub n0: Lattice,
    pub u0: Polyhedron,
    pub quot: LatticeMap,
}

pub fn sigma0_reduce(g: &FibrationGerm) -> Result<Sigma0Reduction> {
    let d = g.dim();
    let md = moment_data(g)?;
    let zero_rays = zero_rays(g);
    if zero_rays.is_empty() {
        return Ok(Sigma0Reduction { n0: g.lattice().clone(), u0: md.u, quot: LatticeMap::identity(g.lattice()) });
    }
    if rank(&zero_rays, d) == d {
        return Err(Error::DegenerateQuotient);
    }
    let (n0, quot) = quotient_by(g.lattice(), &zero_rays)?;
    let u0 = md.u.linear_image(&quot.ambient_matrix(), n0.dim());
    Ok(Sigma0Reduction { n0, u0, quot })
}

fn zero_rays(g: &FibrationGerm) -> Vec<LatVec> {
    g.rays().iter().filter(|r| r.a.is_zero()).map(|r| r.e.clone()).collect()
}

/// An exact minimum with a lattice point attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MldResult {
    pub value: Rational,
    pub minimizer: LatVec,
}

/// Interior of the tangent cone at the origin of a polytope containing it.
fn in_open_cone(p: &Polyhedron, x: &[Rational]) -> bool {
    p.ineqs().iter().filter(|h| h.offset.is_zero()).all(|h| dot(&h.normal, x).is_positive())
}

/// Lexicographically largest among points of least gauge; `None` if `pts` is empty.
fn least_gauge(u: &Polyhedron, pts: impl IntoIterator<Item = LatVec>) -> Option<(Rational, LatVec)> {
    let mut best: Option<(Rational, LatVec)> = None;
    for x in pts {
        let Some(v) = gauge(u, &x) else { continue };
        let better = match &best {
            None => true,
            Some((bv, bx)) => v < *bv || (v == *bv && x > *bx),
        };
        if better {
            best = Some((v, x));
        }
    }
    best
}

/// `min{-h_□(e) : e ∈ N primitive, e ∈ int|Δ|}` with a minimizer; ties go to the
/// lexicographically largest point among those found.
///
/// When a ray with `a_i = 0` meets `int|Δ|` the value is 0. Otherwise the value is the
/// least gauge of `U₀` over `N₀ ∩ int cone(U₀)`, which is searched inside `c₀·U₀` where
/// `c₀` is the gauge at the image of a cone's ray sum. A minimizer in `N` is then found in
/// `m*·conv(0, e_i/a_i) + Σ_{a_i=0} [0, R]·e_i` for doubling `R`.
pub fn mld_fiber(g: &FibrationGerm) -> Result<MldResult> {
    check_semiample(g).map_err(|_| Error::RequiresSemiample)?;
    if let Some(r) = zero_value_witness(g)? {
        return Ok(r);
    }
    let red = match sigma0_reduce(g) {
        Ok(r) => r,
        Err(Error::DegenerateQuotient) => {
            return Err(Error::Internal("degenerate quotient without a zero-value witness".into()))
        }
        Err(e) => return Err(e),
    };
    let s: LatVec = g.fan()[0].iter().fold(zero_vec(g.dim()), |acc, &i| add(&acc, &g.rays()[i].e));
    let x0 = red.quot.apply(&s);
    let c0 = gauge(&red.u0, &x0).ok_or_else(|| Error::Internal("ray sum outside cone(U0)".into()))?;
    if !c0.is_positive() {
        return Err(Error::Internal("ray sum has zero gauge".into()));
    }
    let pts = lattice_points(&red.n0, &red.u0.scale(&c0), Region::Closure)?;
    let inside = pts.into_iter().filter(|x| !is_zero_vec(x) && in_open_cone(&red.u0, x));
    let (value, x) = least_gauge(&red.u0, inside).ok_or_else(|| Error::Internal("no interior candidate".into()))?;
    if zero_rays(g).is_empty() {
        return Ok(MldResult { value, minimizer: x });
    }
    lift_minimizer(g, &value)
}

/// Value 0 when `σ₀` meets `int|Δ|`: a zero ray over the fiber, else the primitive ray sum.
fn zero_value_witness(g: &FibrationGerm) -> Result<Option<MldResult>> {
    let zr = zero_rays(g);
    if zr.is_empty() {
        return Ok(None);
    }
    if let Some(e) = zr.iter().filter(|e| g.over_fiber(e)).max() {
        return Ok(Some(MldResult { value: Rational::zero(), minimizer: e.clone() }));
    }
    let s = zr.iter().fold(zero_vec(g.dim()), |acc, e| add(&acc, e));
    if !is_zero_vec(&s) && g.over_fiber(&s) {
        let (e, _) = primitive_decompose(&s, g.lattice())?;
        return Ok(Some(MldResult { value: Rational::zero(), minimizer: e }));
    }
    Ok(None)
}

fn lift_minimizer(g: &FibrationGerm, value: &Rational) -> Result<MldResult> {
    let d = g.dim();
    let u = moment_data(g)?.u;
    let mut vs = vec![zero_vec(d)];
    vs.extend(g.rays().iter().filter(|r| !r.a.is_zero()).map(|r| scale(&(value / &r.a), &r.e)));
    let compact = Polyhedron::from_vrep(d, &vs, &[])?;
    let zr = zero_rays(g);
    let mut radius = Rational::one();
    for _ in 0..24 {
        let mut region = compact.clone();
        for e in &zr {
            let seg = Polyhedron::from_vrep(d, &[zero_vec(d), scale(&radius, e)], &[])?;
            region = region.minkowski_sum(&seg);
        }
        let pts = lattice_points(g.lattice(), &region, Region::Closure)?;
        let hits = pts
            .into_iter()
            .filter(|e| !is_zero_vec(e) && g.over_fiber(e) && gauge(&u, e).as_ref() == Some(value));
        if let Some(e) = hits.max() {
            return Ok(MldResult { value: value.clone(), minimizer: e });
        }
        radius = &radius * Rational::from_integer(2.into());
    }
    Err(Error::Internal("minimizer lift did not terminate".into()))
}

/// `min{-h_□(e) : e ∈ N primitive, e ∈ |Δ| \ {0}}` with a minimizer (lexicographically largest on ties).
pub fn mld_total(g: &FibrationGerm) -> Result<MldResult> {
    check_semiample(g).map_err(|_| Error::RequiresSemiample)?;
    if let Some(e) = zero_rays(g).into_iter().max() {
        return Ok(MldResult { value: Rational::zero(), minimizer: e });
    }
    let u = moment_data(g)?.u;
    let c = g.rays().iter().map(|r| r.a.clone()).min().expect("rays span");
    let pts = lattice_points(g.lattice(), &u.scale(&c), Region::Closure)?;
    let (value, minimizer) = least_gauge(&u, pts.into_iter().filter(|x| !is_zero_vec(x)))
        .ok_or_else(|| Error::Internal("no nonzero lattice point in c·U".into()))?;
    Ok(MldResult { value, minimizer })
}

/// Outcome of the `(C_t)` test: `holds` iff `N ∩ int(tU) ⊆ {0}`, else a violating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtReport {
    pub t: Rational,
    pub holds: bool,
    pub mld_fiber: MldResult,
    pub witness: Option<LatVec>,
}

pub fn check_ct(g: &FibrationGerm, t: &Rational) -> Result<CtReport> {
    if !t.is_positive() {
        return Err(Error::NonpositiveT);
    }
    check_semiample(g).map_err(|_| Error::RequiresSemiample)?;
    if t.is_one() && g.base_dim() == 0 && g.boundary_is_zero() && mld_total(g)?.value >= Rational::one() {
        return Err(Error::SpecialCaseC1);
    }
    let m = mld_fiber(g)?;
    let holds = m.value >= *t;
    let witness = (!holds).then(|| m.minimizer.clone());
    Ok(CtReport { t: t.clone(), holds, mld_fiber: m, witness })
}
