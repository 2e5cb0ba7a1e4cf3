//! Exact rational linear algebra over lattices in a fixed ambient `Q^d`.

mod lattice;
mod normal_form;

pub use lattice::{lattice_quotient, primitive_decompose, quotient_by, Lattice, LatticeMap};
pub use normal_form::{hnf, is_unimodular, snf};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rational = BigRational;
/// A vector of exact rationals; ambient coordinates unless stated otherwise.
pub type LatVec = Vec<Rational>;
pub type IntMatrix = Vec<Vec<Int>>;
pub type QMatrix = Vec<Vec<Rational>>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

pub fn qint(n: &Int) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn qvec(xs: &[i64]) -> LatVec {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn qmat(rows: &[&[i64]]) -> QMatrix {
    rows.iter().map(|r| qvec(r)).collect()
}

pub fn imat(rows: &[&[i64]]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect()
}

/// Parses `"p/q"` or `"p"`; the result is in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, d)) => {
            let p: Int = p.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}

pub fn zero_vec(d: usize) -> LatVec {
    vec![Rational::zero(); d]
}

pub fn unit_vec(d: usize, i: usize) -> LatVec {
    let mut v = zero_vec(d);
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn add(a: &[Rational], b: &[Rational]) -> LatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> LatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Rational]) -> LatVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale(c: &Rational, a: &[Rational]) -> LatVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn is_integral(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_integer())
}

/// Flips sign so the first nonzero coordinate is positive.
pub fn sign_normalize(a: &[Rational]) -> LatVec {
    match a.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(a),
        _ => a.to_vec(),
    }
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Int {
    xs.into_iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// Scales a nonzero rational vector to the primitive integer vector on its ray.
pub fn primitive_integer(a: &[Rational]) -> Vec<Int> {
    let l = lcm_denominators(a);
    let ints: Vec<Int> = a.iter().map(|x| (x * qint(&l)).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_rational_vec(a: &[Int]) -> LatVec {
    a.iter().map(qint).collect()
}

pub fn to_rational_matrix(m: &[Vec<Int>]) -> QMatrix {
    m.iter().map(|r| to_rational_vec(r)).collect()
}

pub fn identity(d: usize) -> QMatrix {
    (0..d).map(|i| unit_vec(d, i)).collect()
}

pub fn int_identity(d: usize) -> IntMatrix {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// `a · b`; `cols` is the column count of `b`.
pub fn matmul(a: &[LatVec], b: &[LatVec], cols: usize) -> QMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Rational::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            s += x * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn int_matmul(a: &[Vec<Int>], b: &[Vec<Int>], cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Int::zero();
                    for (k, x) in row.iter().enumerate() {
                        s += x * &b[k][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Rational], m: &[LatVec], cols: usize) -> LatVec {
    (0..cols)
        .map(|j| {
            let mut s = Rational::zero();
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() && !m[k][j].is_zero() {
                    s += x * &m[k][j];
                }
            }
            s
        })
        .collect()
}

/// Matrix times column vector.
pub fn mat_vec(m: &[LatVec], v: &[Rational]) -> LatVec {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref(m: &[LatVec], cols: usize) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[LatVec], cols: usize) -> usize {
    rref(m, cols).1.len()
}

/// Basis of `{x : m · x = 0}` (right null space).
pub fn nullspace(m: &[LatVec], cols: usize) -> QMatrix {
    let (r, pivots) = rref(m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zero_vec(cols);
            x[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -r[i][f].clone();
            }
            x
        })
        .collect()
}

/// Solves `a · x = b` for a column vector `x`; `None` if inconsistent.
/// Returns one solution (free variables set to zero).
pub fn solve(a: &[LatVec], b: &[Rational], cols: usize) -> Option<LatVec> {
    let aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = zero_vec(cols);
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[i][cols].clone();
    }
    Some(x)
}

pub fn inverse(m: &[LatVec]) -> Option<QMatrix> {
    let d = m.len();
    let aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vec(d, i));
            r
        })
        .collect();
    if d == 0 {
        return Some(Vec::new());
    }
    let (r, pivots) = rref(&aug, 2 * d);
    if pivots.len() < d || pivots[d - 1] != d - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[d..].to_vec()).collect())
}

pub fn det(m: &[LatVec]) -> Rational {
    let d = m.len();
    let mut a: QMatrix = m.to_vec();
    let mut det = Rational::one();
    for c in 0..d {
        let Some(p) = (c..d).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    det
}
