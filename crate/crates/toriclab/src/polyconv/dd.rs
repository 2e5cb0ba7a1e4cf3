//! Double description over the integers for cones `{y : a·y ≥ 0}`.

use crate::exact_lattice::Int;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn idot(a: &[Int], b: &[Int]) -> Int {
    let mut s = Int::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

fn reduce(v: Vec<Int>) -> Vec<Int> {
    let g = v.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g == Int::from(1) {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// `p·x + q·y` for integer vectors.
fn comb(p: &Int, x: &[Int], q: &Int, y: &[Int]) -> Vec<Int> {
    x.iter().zip(y).map(|(a, b)| p * a + q * b).collect()
}

#[derive(Clone)]
struct Ray {
    v: Vec<Int>,
    zeros: Vec<u64>,
}

fn set_bit(bits: &mut [u64], k: usize) {
    bits[k / 64] |= 1 << (k % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// Minimal generators of `{y ∈ R^n : a·y ≥ 0 for every row a}`:
/// a lineality basis and the extreme rays modulo lineality, all primitive integer vectors.
pub fn cone_generators(constraints: &[Vec<Int>], n: usize) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let words = constraints.len().div_ceil(64).max(1);
    let mut lin: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    for (k, a) in constraints.iter().enumerate() {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(i0) = lin.iter().position(|l| !idot(a, l).is_zero()) {
            let mut l0 = lin.remove(i0);
            let mut al0 = idot(a, &l0);
            if al0.is_negative() {
                l0 = l0.into_iter().map(|x| -x).collect();
                al0 = -al0;
            }
            for l in lin.iter_mut() {
                let al = idot(a, l);
                if !al.is_zero() {
                    *l = reduce(comb(&al0, l, &-al, &l0));
                }
            }
            for r in rays.iter_mut() {
                let ar = idot(a, &r.v);
                if !ar.is_zero() {
                    r.v = reduce(comb(&al0, &r.v, &-ar, &l0));
                }
                set_bit(&mut r.zeros, k);
            }
            let mut zeros = vec![0u64; words];
            for j in 0..k {
                set_bit(&mut zeros, j);
            }
            rays.push(Ray { v: l0, zeros });
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    set_bit(&mut r.zeros, k);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut r = r.clone();
                if vals[i].is_zero() {
                    set_bit(&mut r.zeros, k);
                }
                next.push(r);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = and(&rays[p].zeros, &rays[q].zeros);
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == q || !subset(&common, &rays[r].zeros));
                if !adjacent {
                    continue;
                }
                let v = reduce(comb(&vals[p], &rays[q].v, &-vals[q].clone(), &rays[p].v));
                let mut zeros = common;
                set_bit(&mut zeros, k);
                next.push(Ray { v, zeros });
            }
        }
        rays = next;
    }
    let rays = rays.into_iter().map(|r| r.v).collect();
    (lin, rays)
}
