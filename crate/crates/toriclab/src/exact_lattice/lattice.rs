use super::{
    hnf, identity, inverse, is_integral, is_zero_vec, lcm_denominators, matmul, qint, scale, snf,
    to_rational_matrix, transpose, vec_mat, Int, IntMatrix, LatVec, QMatrix, Rational,
};
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A full-rank lattice inside `Q^d`, stored by a basis in row Hermite form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: QMatrix,
    inv: QMatrix,
}

impl Lattice {
    pub fn standard(d: usize) -> Lattice {
        Lattice { basis: identity(d), inv: identity(d) }
    }

    /// Lattice with the given rows as a basis; errors if they are dependent.
    pub fn from_basis(rows: &[LatVec]) -> Result<Lattice> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: rows.first().map_or(0, Vec::len) });
        }
        let lat = Lattice::from_generators(rows, d)?;
        Ok(lat)
    }

    /// Lattice generated by arbitrary rational vectors spanning `Q^d`.
    pub fn from_generators(gens: &[LatVec], d: usize) -> Result<Lattice> {
        if gens.iter().any(|g| g.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: 0 });
        }
        let den = lcm_denominators(gens.iter().flatten());
        let ints: IntMatrix = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * qint(&den)).to_integer()).collect())
            .collect();
        let (h, _) = hnf(&ints);
        let basis: QMatrix = h
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|r| r.iter().map(|x| Rational::new(x.clone(), den.clone())).collect())
            .collect();
        if basis.len() != d {
            return Err(Error::SingularBasis);
        }
        let inv = inverse(&basis).ok_or(Error::SingularBasis)?;
        Ok(Lattice { basis, inv })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the basis (rational in general).
    pub fn coords(&self, v: &[Rational]) -> LatVec {
        vec_mat(v, &self.inv, self.dim())
    }

    pub fn from_coords(&self, c: &[Rational]) -> LatVec {
        vec_mat(c, &self.basis, self.dim())
    }

    pub fn inverse_basis(&self) -> &QMatrix {
        &self.inv
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.dim() && is_integral(&self.coords(v))
    }

    /// The dual lattice in `(Q^d)^*`, identified with `Q^d` by the dot product.
    pub fn dual(&self) -> Lattice {
        let d = self.dim();
        Lattice::from_basis(&transpose(&self.inv, d)).expect("inverse transpose is nonsingular")
    }

    /// Volume of a fundamental domain.
    pub fn covolume(&self) -> Rational {
        super::det(&self.basis).abs()
    }

    pub fn is_standard(&self) -> bool {
        self.basis == identity(self.dim())
    }
}

/// A homomorphism of lattices given by an integer matrix in their bases:
/// target coordinates are `matrix · source coordinates`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    pub matrix: IntMatrix,
    pub source: Lattice,
    pub target: Lattice,
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix, source: Lattice, target: Lattice) -> Result<LatticeMap> {
        if matrix.len() != target.dim() || matrix.iter().any(|r| r.len() != source.dim()) {
            return Err(Error::DimensionMismatch { expected: target.dim(), got: matrix.len() });
        }
        Ok(LatticeMap { matrix, source, target })
    }

    pub fn identity(lat: &Lattice) -> LatticeMap {
        LatticeMap { matrix: super::int_identity(lat.dim()), source: lat.clone(), target: lat.clone() }
    }

    /// Map whose real extension is `v ↦ v · r` in ambient coordinates;
    /// fails with `NotInLattice` unless it sends the source lattice into the target.
    pub fn from_ambient(r: &[LatVec], source: &Lattice, target: &Lattice) -> Result<LatticeMap> {
        let d = source.dim();
        let dt = target.dim();
        if r.len() != d || r.iter().any(|row| row.len() != dt) {
            return Err(Error::DimensionMismatch { expected: d, got: r.len() });
        }
        let t = matmul(&matmul(source.basis(), r, dt), target.inverse_basis(), dt);
        if !t.iter().all(|row| is_integral(row)) {
            return Err(Error::NotInLattice);
        }
        let matrix = transpose(&t, dt)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        Ok(LatticeMap { matrix, source: source.clone(), target: target.clone() })
    }

    /// The ambient matrix `r` with `apply(v) = v · r`.
    pub fn ambient_matrix(&self) -> QMatrix {
        let d = self.source.dim();
        let dt = self.target.dim();
        let mt = transpose(&to_rational_matrix(&self.matrix), d);
        matmul(&matmul(self.source.inverse_basis(), &mt, dt), self.target.basis(), dt)
    }

    pub fn apply(&self, v: &[Rational]) -> LatVec {
        vec_mat(v, &self.ambient_matrix(), self.target.dim())
    }

    /// Pullback of a dual vector: `⟨pullback(m), v⟩ = ⟨m, apply(v)⟩`.
    pub fn pullback(&self, m: &[Rational]) -> LatVec {
        super::mat_vec(&self.ambient_matrix(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.target.dim() == 0 || self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// Surjective iff the Smith form has `target.dim()` unit invariants.
    pub fn is_surjective(&self) -> bool {
        let dt = self.target.dim();
        if dt == 0 {
            return true;
        }
        let (s, _, _) = snf(&self.matrix);
        (0..dt).all(|i| i < self.source.dim() && s[i][i].is_one())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if other.source != self.target {
            return Err(Error::DimensionMismatch { expected: self.target.dim(), got: other.source.dim() });
        }
        let matrix = super::int_matmul(&other.matrix, &self.matrix, self.source.dim());
        Ok(LatticeMap { matrix, source: self.source.clone(), target: other.target.clone() })
    }
}

/// Writes `v = q · e` with `e` primitive in `lat` and `q > 0`.
pub fn primitive_decompose(v: &[Rational], lat: &Lattice) -> Result<(LatVec, Rational)> {
    if v.len() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), got: v.len() });
    }
    if is_zero_vec(v) {
        return Err(Error::ZeroVector);
    }
    let c = lat.coords(v);
    let num = c.iter().fold(Int::zero(), |g, x| g.gcd(x.numer()));
    let den = lcm_denominators(&c);
    let content = Rational::new(num, den);
    let e = scale(&content.recip(), v);
    Ok((e, content))
}

/// Quotient of `lat` by the saturation of the span of `gens`, as a map onto `Z^{d-r}`.
/// The map matrix is in Hermite form, so the result does not depend on `gens` beyond their span.
pub fn quotient_by(lat: &Lattice, gens: &[LatVec]) -> Result<(Lattice, LatticeMap)> {
    let d = lat.dim();
    let coords: Vec<LatVec> = gens.iter().map(|g| lat.coords(g)).collect();
    let den = lcm_denominators(coords.iter().flatten());
    let ints: IntMatrix = coords
        .iter()
        .map(|c| c.iter().map(|x| (x * qint(&den)).to_integer()).collect())
        .collect();
    let k = ints.len();
    let (h, u) = if k == 0 {
        (Vec::new(), super::int_identity(d))
    } else {
        hnf(&transpose(&ints, d))
    };
    let r = h.iter().filter(|row| row.iter().any(|x| !x.is_zero())).count();
    let m: IntMatrix = u[r..].to_vec();
    let m = if m.is_empty() { m } else { hnf(&m).0 };
    let target = Lattice::standard(d - r);
    let map = LatticeMap::new(m, lat.clone(), target.clone())?;
    Ok((target, map))
}

/// Quotient `lat / Z b` for primitive `b`.
pub fn lattice_quotient(lat: &Lattice, b: &[Rational]) -> Result<(Lattice, LatticeMap)> {
    if b.len() != lat.dim() {
        return Err(Error::DimensionMismatch { expected: lat.dim(), got: b.len() });
    }
    if is_zero_vec(b) {
        return Err(Error::ZeroVector);
    }
    let c = lat.coords(b);
    if !is_integral(&c) {
        return Err(Error::NotPrimitive);
    }
    let g = c.iter().fold(Int::zero(), |g, x| g.gcd(x.numer()));
    if !g.is_one() {
        return Err(Error::NotPrimitive);
    }
    quotient_by(lat, &[b.to_vec()])
}
