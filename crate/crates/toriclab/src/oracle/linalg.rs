//! Plain Gaussian elimination, kept separate from the main linear algebra.

use crate::exact_lattice::{LatVec, Rational};
use num_traits::Zero;

/// Row echelon form in place; returns pivot columns.
fn eliminate(m: &mut [LatVec], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(row, p);
        let lead = m[row][c].clone();
        for x in m[row].iter_mut() {
            *x = &*x / &lead;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let src = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&src) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

/// Some solution of an overdetermined but consistent system `a x = b`, else `None`.
pub fn solve_any(a: &[LatVec], b: &[Rational], cols: usize) -> Option<LatVec> {
    let mut m: Vec<LatVec> = a.iter().zip(b).map(|(r, bi)| r.iter().cloned().chain([bi.clone()]).collect()).collect();
    let piv = eliminate(&mut m, cols + 1);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &p) in piv.iter().enumerate() {
        x[p] = m[i][cols].clone();
    }
    Some(x)
}

pub fn rank(rows: &[LatVec], cols: usize) -> usize {
    let mut m = rows.to_vec();
    eliminate(&mut m, cols).len()
}

/// A nonzero kernel vector when the kernel of `rows` is one-dimensional.
pub fn kernel_line(rows: &[LatVec], cols: usize) -> Option<LatVec> {
    let mut m = rows.to_vec();
    let piv = eliminate(&mut m, cols);
    if piv.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !piv.contains(c))?;
    let mut x = vec![Rational::zero(); cols];
    x[free] = Rational::from_integer(1.into());
    for (i, &p) in piv.iter().enumerate() {
        x[p] = -m[i][free].clone();
    }
    Some(x)
}

pub fn inverse(a: &[LatVec]) -> Option<Vec<LatVec>> {
    let n = a.len();
    let mut m: Vec<LatVec> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| Rational::from_integer(((i == j) as i64).into())));
            row
        })
        .collect();
    let piv = eliminate(&mut m, n);
    (piv.len() == n && piv.iter().enumerate().all(|(i, &p)| i == p)).then(|| m.iter().map(|r| r[n..].to_vec()).collect())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v · m` for a row vector `v`.
pub fn row_times(v: &[Rational], m: &[LatVec], cols: usize) -> LatVec {
    let mut out = vec![Rational::zero(); cols];
    for (vi, row) in v.iter().zip(m) {
        if !vi.is_zero() {
            for (o, x) in out.iter_mut().zip(row) {
                *o = &*o + vi * x;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lattice::{q, qmat, qvec};

    #[test]
    fn small_systems() {
        let a = qmat(&[&[2, 1], &[1, 1]]);
        assert_eq!(solve_any(&a, &qvec(&[3, 2]), 2), Some(qvec(&[1, 1])));
        assert_eq!(inverse(&a).unwrap(), qmat(&[&[1, -1], &[-1, 2]]));
        assert_eq!(kernel_line(&qmat(&[&[1, 1]]), 2), Some(qvec(&[-1, 1])));
        assert_eq!(solve_any(&qmat(&[&[1, 0], &[1, 0]]), &qvec(&[1, 2]), 2), None);
        assert_eq!(rank(&qmat(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(dot(&qvec(&[1, 2]), &qvec(&[3, 4])), q(11));
    }
}
