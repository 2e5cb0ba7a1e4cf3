use super::{int_identity, Int, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn cols_of(m: &[Vec<Int>]) -> usize {
    m.first().map_or(0, Vec::len)
}

fn row_axpy(m: &mut [Vec<Int>], dst: usize, src: usize, f: &Int) {
    if f.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(&s) {
        *x -= f * y;
    }
}

fn col_axpy(m: &mut [Vec<Int>], dst: usize, src: usize, f: &Int) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let y = row[src].clone();
        row[dst] -= f * y;
    }
}

fn negate_row(m: &mut [Vec<Int>], i: usize) {
    for x in m[i].iter_mut() {
        *x = -x.clone();
    }
}

fn swap_cols(m: &mut [Vec<Int>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Row Hermite normal form: returns `(h, u)` with `u · m = h`, `u` unimodular,
/// pivots positive and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows of `h` come last.
pub fn hnf(m: &[Vec<Int>]) -> (IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = cols_of(m);
    let mut h: IntMatrix = m.to_vec();
    let mut u = int_identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()));
            let Some(p) = best else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !h[i][c].is_zero() {
                    let f = h[i][c].div_floor(&h[r][c]);
                    row_axpy(&mut h, i, r, &f);
                    row_axpy(&mut u, i, r, &f);
                    if !h[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let f = h[i][c].div_floor(&h[r][c]);
            row_axpy(&mut h, i, r, &f);
            row_axpy(&mut u, i, r, &f);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(s, u, v)` with `u · m · v = s`, `s` diagonal,
/// nonnegative, and each diagonal entry dividing the next.
pub fn snf(m: &[Vec<Int>]) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = cols_of(m);
    let mut s: IntMatrix = m.to_vec();
    let mut u = int_identity(rows);
    let mut v = int_identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s[i][j].is_zero()
                        && best.is_none_or(|(a, b)| s[i][j].abs() < s[a][b].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (s, u, v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let f = s[i][t].div_floor(&s[t][t]);
                row_axpy(&mut s, i, t, &f);
                row_axpy(&mut u, i, t, &f);
                clean &= s[i][t].is_zero();
            }
            for j in t + 1..cols {
                let f = s[t][j].div_floor(&s[t][t]);
                col_axpy(&mut s, j, t, &f);
                col_axpy(&mut v, j, t, &f);
                clean &= s[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !s[i][j].is_multiple_of(&s[t][t])));
            match bad {
                Some(i) => {
                    let one = -Int::one();
                    row_axpy(&mut s, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
    }
    (s, u, v)
}

/// True iff `m` is square with determinant ±1.
pub fn is_unimodular(m: &[Vec<Int>]) -> bool {
    let n = m.len();
    if cols_of(m) != n && n > 0 {
        return false;
    }
    let (s, _, _) = snf(m);
    (0..n).all(|i| s[i][i].is_one())
}
