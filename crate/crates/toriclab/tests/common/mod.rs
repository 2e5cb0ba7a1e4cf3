#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toriclab::complement::check_hyperstandard;
use toriclab::exact_lattice::{det, Int, LatVec, Lattice, Rational};
use toriclab::oracle::fixtures_root;
use toriclab::polyconv::Polyhedron;
use toriclab::toric_germ::{FibrationGerm, Ray};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

pub fn qvec(xs: &[i64]) -> LatVec {
    xs.iter().map(|&x| q(x)).collect()
}

/// Every corpus germ as `(name, text, germ)`, sorted by name.
pub fn corpus() -> Vec<(String, String, FibrationGerm)> {
    let dir = fixtures_root().join("germs");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let g = FibrationGerm::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            (p.file_stem().unwrap().to_string_lossy().into_owned(), text, g)
        })
        .collect()
}

pub fn corpus_germ(name: &str) -> FibrationGerm {
    corpus().into_iter().find(|(n, _, _)| n == name).unwrap_or_else(|| panic!("no fixture {name}")).2
}

/// Smallest `r ≤ 12` for which every coefficient is hyperstandard.
pub fn hyperstandard_index(g: &FibrationGerm) -> Option<u64> {
    (1..=12).find(|&r| check_hyperstandard(g, r).is_ok())
}

pub fn rand_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    qf(rng.gen_range(lo * den..=hi * den), den)
}

/// Coefficients from `{1/m : m ≤ 4} ∪ {2/3, 3/4}`.
pub fn rand_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    const CHOICES: [(i64, i64); 6] = [(1, 1), (1, 2), (1, 3), (2, 3), (3, 4), (1, 4)];
    let (n, d) = CHOICES[rng.gen_range(0..CHOICES.len())];
    qf(n, d)
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    v.iter().map(|x| x / g).collect()
}

/// A simplicial affine germ of dimension `d`: primitive integer rays with nonzero
/// determinant, over `Z^d` or `Z^d + Z·(k/m)`.
pub fn random_simplicial_germ(rng: &mut ChaCha8Rng, d: usize) -> FibrationGerm {
    loop {
        let rays: Vec<Vec<i64>> = (0..d)
            .map(|i| {
                let mut v: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=2)).collect();
                v[i] = rng.gen_range(1..=2);
                primitive(&v)
            })
            .collect();
        let m: Vec<LatVec> = rays.iter().map(|r| qvec(r)).collect();
        if det(&m).is_zero() {
            continue;
        }
        let mut gens: Vec<LatVec> = (0..d).map(|i| (0..d).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect();
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(2..=4);
            gens.push((0..d).map(|_| qf(rng.gen_range(0..k), k)).collect());
        }
        let Ok(lat) = Lattice::from_generators(&gens, d) else { continue };
        // Rays must be primitive in the refined lattice.
        let rs: Vec<Ray> = m
            .iter()
            .map(|e| {
                let (p, _) = toriclab::exact_lattice::primitive_decompose(e, &lat).unwrap();
                Ray::new(p, rand_coefficient(rng))
            })
            .collect();
        if let Ok(g) = FibrationGerm::affine(lat, &rs) {
            return g;
        }
    }
}

/// A full-dimensional pointed polyhedron containing the origin, compact or not.
pub fn random_polyhedron(rng: &mut ChaCha8Rng, d: usize, compact: bool) -> Polyhedron {
    loop {
        let k = rng.gen_range(d + 1..=d + 3);
        let mut vs: Vec<LatVec> = (0..k).map(|_| (0..d).map(|_| rand_q(rng, -2, 2, 2)).collect()).collect();
        if rng.gen_bool(0.3) {
            vs.push(vec![Rational::zero(); d]);
        }
        let rs: Vec<LatVec> = if compact {
            Vec::new()
        } else {
            (0..rng.gen_range(1..=d)).map(|_| (0..d).map(|_| q(rng.gen_range(0..=2))).collect::<LatVec>())
                .filter(|r| r.iter().any(|x| !x.is_zero()))
                .collect()
        };
        let Ok(p) = Polyhedron::from_vrep(d, &vs, &rs) else { continue };
        if p.is_full_dim() && p.contains(&vec![Rational::zero(); d]) && p.is_compact() == compact {
            return p;
        }
    }
}

/// A compact polytope with the origin in its interior.
pub fn random_body(rng: &mut ChaCha8Rng, d: usize) -> Polyhedron {
    let mut vs: Vec<LatVec> = Vec::new();
    for i in 0..d {
        for sign in [1, -1] {
            let mut v = vec![Rational::zero(); d];
            v[i] = rand_q(rng, 1, 3, 2) * q(sign);
            vs.push(v);
        }
    }
    for _ in 0..rng.gen_range(0..=3) {
        vs.push((0..d).map(|_| rand_q(rng, -3, 3, 2)).collect());
    }
    Polyhedron::from_vrep(d, &vs, &[]).expect("nonempty")
}

/// `conv(±v)` for random integer `v`, rescaled by a random rational; full-dimensional.
pub fn random_symmetric(rng: &mut ChaCha8Rng, d: usize) -> Polyhedron {
    loop {
        let mut vs: Vec<LatVec> = Vec::new();
        let scale = qf(rng.gen_range(1..=6), rng.gen_range(1..=3));
        for _ in 0..rng.gen_range(d..=d + 2) {
            let v: LatVec = (0..d).map(|_| q(rng.gen_range(-3..=3)) * &scale).collect();
            vs.push(v.iter().map(|x| -x).collect());
            vs.push(v);
        }
        let p = Polyhedron::from_vrep(d, &vs, &[]).expect("nonempty");
        if p.is_full_dim() {
            return p;
        }
    }
}

pub fn factorial(d: usize) -> Rational {
    (1..=d as i64).map(q).fold(Rational::one(), |a, b| a * b)
}
