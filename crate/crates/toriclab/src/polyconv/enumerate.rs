use super::{Halfspace, Polyhedron};
use crate::error::{Error, Result};
use crate::exact_lattice::{dot, lcm_denominators, qint, Int, LatVec, Lattice, Rational};
use crate::par;
use num_traits::ToPrimitive;
use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_CELL_CAP: u64 = 10_000_000;

static CELL_CAP: AtomicU64 = AtomicU64::new(DEFAULT_CELL_CAP);

/// Ceiling on the number of box cells any single enumeration may visit.
pub fn cell_cap() -> u64 {
    CELL_CAP.load(Ordering::Relaxed)
}

pub fn set_cell_cap(cap: u64) {
    CELL_CAP.store(cap, Ordering::Relaxed);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Closure,
    Interior,
}

/// Integer constraint `⟨w, c⟩ ≥ k` on lattice coordinates.
struct IntCons {
    w: Vec<i128>,
    k: i128,
}

fn to_i128(x: &Int) -> Option<i128> {
    x.to_i128().filter(|v| v.unsigned_abs() < (1u128 << 60))
}

/// Rewrites ambient halfspaces as integer constraints on lattice coordinates.
fn lattice_constraints(lat: &Lattice, ineqs: &[Halfspace], region: Region) -> Option<Vec<IntCons>> {
    let mut out = Vec::with_capacity(ineqs.len());
    for h in ineqs {
        let w: Vec<Rational> = lat.basis().iter().map(|b| dot(b, &h.normal)).collect();
        let l = lcm_denominators(w.iter().chain(std::iter::once(&h.offset)));
        let lq = qint(&l);
        let wi: Vec<Int> = w.iter().map(|x| (x * &lq).to_integer()).collect();
        let th = &h.offset * &lq;
        let k = match region {
            Region::Closure => th.ceil().to_integer(),
            Region::Interior => th.floor().to_integer() + 1,
        };
        out.push(IntCons {
            w: wi.iter().map(to_i128).collect::<Option<Vec<_>>>()?,
            k: to_i128(&k)?,
        });
    }
    Some(out)
}

fn cells(lo: &[i64], hi: &[i64]) -> u128 {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| if h < l { 0 } else { (h - l + 1) as u128 })
        .fold(1u128, |a, b| a.saturating_mul(b))
}

fn check_cap(lo: &[i64], hi: &[i64]) -> Result<()> {
    let c = cells(lo, hi);
    let cap = cell_cap();
    if c > cap as u128 {
        return Err(Error::BoxTooLarge { cells: c, cap });
    }
    Ok(())
}

/// All integer vectors `c` in the box `[lo, hi]` with `keep(c)`, in lexicographic order
/// of the box coordinates. The first coordinate is split across threads.
pub fn scan_box<F>(lo: &[i64], hi: &[i64], keep: F) -> Result<Vec<Vec<i64>>>
where
    F: Fn(&[i64]) -> bool + Sync + Send,
{
    check_cap(lo, hi)?;
    let d = lo.len();
    if d == 0 {
        return Ok(if keep(&[]) { vec![Vec::new()] } else { Vec::new() });
    }
    if cells(lo, hi) == 0 {
        return Ok(Vec::new());
    }
    Ok(par::flat_map_range(lo[0], hi[0] + 1, |x0| {
        let mut out = Vec::new();
        let mut c: Vec<i64> = lo.to_vec();
        c[0] = x0;
        loop {
            if keep(&c) {
                out.push(c.clone());
            }
            let mut i = d - 1;
            loop {
                if i == 0 {
                    return out;
                }
                if c[i] < hi[i] {
                    c[i] += 1;
                    break;
                }
                c[i] = lo[i];
                i -= 1;
            }
        }
    }))
}

/// Integer box in lattice coordinates covering the compact polytope `p`.
fn coord_box(lat: &Lattice, p: &Polyhedron) -> Option<(Vec<i64>, Vec<i64>)> {
    let d = lat.dim();
    let coords: Vec<LatVec> = p.vertices().iter().map(|v| lat.coords(v)).collect();
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for j in 0..d {
        let mn = coords.iter().map(|c| &c[j]).min()?;
        let mx = coords.iter().map(|c| &c[j]).max()?;
        lo.push(mn.ceil().to_integer().to_i64()?);
        hi.push(mx.floor().to_integer().to_i64()?);
    }
    Some((lo, hi))
}

/// Lattice points of the closure or of the ambient interior of a compact polyhedron,
/// sorted lexicographically in ambient coordinates.
pub fn lattice_points(lat: &Lattice, p: &Polyhedron, region: Region) -> Result<Vec<LatVec>> {
    if p.dim() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), got: p.dim() });
    }
    if !p.is_compact() {
        return Err(Error::UnboundedInput);
    }
    if region == Region::Interior && !p.is_full_dim() {
        return Ok(Vec::new());
    }
    let (lo, hi) = coord_box(lat, p).ok_or(Error::BoxTooLarge { cells: u128::MAX, cap: cell_cap() })?;
    let hits: Vec<Vec<i64>> = match lattice_constraints(lat, p.ineqs(), region) {
        Some(cons) => scan_box(&lo, &hi, |c| {
            cons.iter().all(|k| {
                let s: i128 = k.w.iter().zip(c).map(|(w, x)| w * (*x as i128)).sum();
                s >= k.k
            })
        })?,
        None => scan_box(&lo, &hi, |c| {
            let x = lat.from_coords(&c.iter().map(|&v| Rational::from_integer(Int::from(v))).collect::<Vec<_>>());
            match region {
                Region::Closure => p.contains(&x),
                Region::Interior => p.interior_contains(&x),
            }
        })?,
    };
    let mut pts: Vec<LatVec> = hits
        .iter()
        .map(|c| lat.from_coords(&c.iter().map(|&v| Rational::from_integer(Int::from(v))).collect::<Vec<_>>()))
        .collect();
    pts.sort();
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lattice::{qf, qvec};

    fn u_polygon() -> Polyhedron {
        Polyhedron::from_vrep(2, &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[-1, 0])], &[]).unwrap()
    }

    #[test]
    fn interior_of_small_polygon_is_empty() {
        let pts = lattice_points(&Lattice::standard(2), &u_polygon(), Region::Interior).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn interior_of_tripled_polygon() {
        let p = u_polygon().scale(&Rational::from_integer(3.into()));
        let pts = lattice_points(&Lattice::standard(2), &p, Region::Interior).unwrap();
        assert_eq!(pts, vec![qvec(&[-1, 1]), qvec(&[0, 1]), qvec(&[0, 2]), qvec(&[1, 1])]);
    }

    #[test]
    fn closure_of_unit_square() {
        let p = Polyhedron::cuboid(&qvec(&[0, 0]), &qvec(&[1, 1])).unwrap();
        let pts = lattice_points(&Lattice::standard(2), &p, Region::Closure).unwrap();
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn half_lattice_simplex_closure() {
        let gens = vec![qvec(&[1, 0]), qvec(&[0, 1]), vec![qf(1, 2), qf(1, 2)]];
        let n = Lattice::from_generators(&gens, 2).unwrap();
        let pts = lattice_points(&n, &super::super::standard_simplex(2), Region::Closure).unwrap();
        assert_eq!(pts, vec![qvec(&[0, 0]), qvec(&[0, 1]), vec![qf(1, 2), qf(1, 2)], qvec(&[1, 0])]);
    }

    #[test]
    fn unbounded_is_rejected() {
        let ray = Polyhedron::cone(1, &[qvec(&[1])]);
        assert_eq!(lattice_points(&Lattice::standard(1), &ray, Region::Closure), Err(Error::UnboundedInput));
    }

    #[test]
    fn cap_is_enforced() {
        let p = Polyhedron::cuboid(&qvec(&[0, 0, 0]), &qvec(&[300, 300, 300])).unwrap();
        assert!(matches!(
            lattice_points(&Lattice::standard(3), &p, Region::Closure),
            Err(Error::BoxTooLarge { .. })
        ));
    }
}
