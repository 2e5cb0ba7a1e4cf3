//! Exact rational polyhedra in both representations, polar sets, support
//! functions, lattice points, asymmetry and Pikhurko constants, successive
//! minima and boundedness certificates.

mod asymmetry;
mod dd;
mod enumerate;
mod minima;

pub use asymmetry::{
    asymmetry, interval_gamma_closed_form, pikhurko_constant, AsymmetryReport,
};
pub use dd::cone_generators;
pub use enumerate::{cell_cap, lattice_points, scan_box, set_cell_cap, Region, DEFAULT_CELL_CAP};
pub use minima::{
    boundedness_certificate, gauge, successive_minimum, verify_boundedness, BoundednessCertificate,
};

use crate::error::{Error, Result};
use crate::exact_lattice::{
    dot, identity, is_zero_vec, neg, primitive_integer, qint, rank, rref, scale, solve, sub,
    to_rational_vec, vec_mat, zero_vec, Int, LatVec, Rational,
};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// The closed halfspace `⟨normal, x⟩ ≥ offset`; normals are primitive integer vectors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: LatVec,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: LatVec, offset: Rational) -> Halfspace {
        Halfspace { normal, offset }
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) - &self.offset
    }

    fn canonical(normal: &[Rational], offset: &Rational) -> Halfspace {
        let ints = primitive_integer(normal);
        let k = &qint(&ints.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Int::one))
            / normal.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Rational::one);
        Halfspace { normal: to_rational_vec(&ints), offset: offset * k }
    }
}

/// A rational polyhedron `conv(vertices) + cone(rays)` together with an
/// irredundant inequality description of the same set.
///
/// Both representations are canonical: vertices and rays are sorted, rays are
/// primitive integer vectors, lines appear as a pair of opposite rays, and
/// vertices are taken orthogonal to the lineality space. Equal sets therefore
/// compare equal with `==`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    vertices: Vec<LatVec>,
    rays: Vec<LatVec>,
    ineqs: Vec<Halfspace>,
}

/// Orthogonal projection of `x` onto the complement of `span(basis)`.
fn project_out(x: &[Rational], basis: &[LatVec]) -> LatVec {
    if basis.is_empty() {
        return x.to_vec();
    }
    let k = basis.len();
    let gram: Vec<LatVec> = basis.iter().map(|b| basis.iter().map(|c| dot(b, c)).collect()).collect();
    let rhs: LatVec = basis.iter().map(|b| dot(b, x)).collect();
    let c = solve(&gram, &rhs, k).expect("gram matrix of a basis is invertible");
    let mut y = x.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        if !ci.is_zero() {
            y = sub(&y, &scale(ci, b));
        }
    }
    y
}

/// RREF rows of an integer spanning set, each scaled to a primitive integer vector.
fn canonical_span(vs: &[Vec<Int>], n: usize) -> Vec<LatVec> {
    let q: Vec<LatVec> = vs.iter().map(|v| to_rational_vec(v)).collect();
    let (r, piv) = rref(&q, n);
    r.into_iter()
        .take(piv.len())
        .map(|row| to_rational_vec(&primitive_integer(&row)))
        .collect()
}

fn homogenize_ineq(h: &Halfspace) -> Vec<Int> {
    let mut v = vec![-h.offset.clone()];
    v.extend(h.normal.iter().cloned());
    primitive_integer(&v)
}

fn homogenize_point(x: &[Rational], w: i64) -> Vec<Int> {
    let mut v = vec![Rational::from_integer(Int::from(w))];
    v.extend(x.iter().cloned());
    if is_zero_vec(&v) {
        return vec![Int::zero(); v.len()];
    }
    primitive_integer(&v)
}

impl Polyhedron {
    /// Builds from vertices and rays; errors with `EmptySet` if there are no vertices.
    pub fn from_vrep(dim: usize, vertices: &[LatVec], rays: &[LatVec]) -> Result<Polyhedron> {
        if vertices.is_empty() {
            return Err(Error::EmptySet);
        }
        for v in vertices.iter().chain(rays) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
        }
        let ineqs = Self::vrep_to_hrep(dim, vertices, rays);
        Self::from_hrep(dim, &ineqs)
    }

    /// Builds from inequalities `⟨normal, x⟩ ≥ offset`; errors with `EmptySet` if infeasible.
    pub fn from_hrep(dim: usize, ineqs: &[Halfspace]) -> Result<Polyhedron> {
        for h in ineqs {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: h.normal.len() });
            }
        }
        let (vertices, rays) = Self::hrep_to_vrep(dim, ineqs)?;
        let ineqs = Self::vrep_to_hrep(dim, &vertices, &rays);
        Ok(Polyhedron { dim, vertices, rays, ineqs })
    }

    /// Irredundant canonical inequalities of `conv(vertices) + cone(rays)`.
    pub fn vrep_to_hrep(dim: usize, vertices: &[LatVec], rays: &[LatVec]) -> Vec<Halfspace> {
        let mut gens: Vec<Vec<Int>> = vertices.iter().map(|v| homogenize_point(v, 1)).collect();
        gens.extend(rays.iter().filter(|r| !is_zero_vec(r)).map(|r| homogenize_point(r, 0)));
        let (lin, facets) = cone_generators(&gens, dim + 1);
        let eqs = canonical_span(&lin, dim + 1);
        let mut out: Vec<Halfspace> = Vec::new();
        for e in &eqs {
            let n = e[1..].to_vec();
            if is_zero_vec(&n) {
                continue;
            }
            let off = -e[0].clone();
            out.push(Halfspace::canonical(&n, &off));
            out.push(Halfspace::canonical(&neg(&n), &-off));
        }
        for f in &facets {
            let p = project_out(&to_rational_vec(f), &eqs);
            let n = p[1..].to_vec();
            if is_zero_vec(&n) {
                continue;
            }
            out.push(Halfspace::canonical(&n, &-p[0].clone()));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Canonical vertices and rays of `{x : ⟨n, x⟩ ≥ c}`.
    pub fn hrep_to_vrep(dim: usize, ineqs: &[Halfspace]) -> Result<(Vec<LatVec>, Vec<LatVec>)> {
        let mut cons: Vec<Vec<Int>> = ineqs.iter().map(homogenize_ineq).collect();
        let mut pos = vec![Int::zero(); dim + 1];
        pos[0] = Int::one();
        cons.push(pos);
        let (lin, gens) = cone_generators(&cons, dim + 1);
        let lines = canonical_span(&lin, dim + 1);
        let line_vecs: Vec<LatVec> = lines.iter().map(|l| l[1..].to_vec()).collect();
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for g in &gens {
            let p = project_out(&to_rational_vec(g), &lines);
            if p[0].is_positive() {
                let w = p[0].clone();
                vertices.push(p[1..].iter().map(|x| x / &w).collect::<LatVec>());
            } else if !is_zero_vec(&p) {
                rays.push(to_rational_vec(&primitive_integer(&p[1..])));
            }
        }
        if vertices.is_empty() {
            return Err(Error::EmptySet);
        }
        for l in &line_vecs {
            rays.push(l.clone());
            rays.push(neg(l));
        }
        vertices.sort();
        vertices.dedup();
        rays.sort();
        rays.dedup();
        Ok((vertices, rays))
    }

    /// The single point `x`.
    pub fn point(x: &[Rational]) -> Polyhedron {
        Polyhedron::from_vrep(x.len(), &[x.to_vec()], &[]).expect("a point is nonempty")
    }

    /// The cone generated by `rays` with apex at the origin.
    pub fn cone(dim: usize, rays: &[LatVec]) -> Polyhedron {
        Polyhedron::from_vrep(dim, &[zero_vec(dim)], rays).expect("a cone contains its apex")
    }

    /// The axis-parallel box `∏ [lo_i, hi_i]`.
    pub fn cuboid(lo: &[Rational], hi: &[Rational]) -> Result<Polyhedron> {
        let d = lo.len();
        let mut ineqs = Vec::new();
        for i in 0..d {
            let e = crate::exact_lattice::unit_vec(d, i);
            ineqs.push(Halfspace::new(e.clone(), lo[i].clone()));
            ineqs.push(Halfspace::new(neg(&e), -hi[i].clone()));
        }
        Polyhedron::from_hrep(d, &ineqs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatVec] {
        &self.vertices
    }

    pub fn rays(&self) -> &[LatVec] {
        &self.rays
    }

    pub fn ineqs(&self) -> &[Halfspace] {
        &self.ineqs
    }

    pub fn is_compact(&self) -> bool {
        self.rays.is_empty()
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        let v0 = &self.vertices[0];
        let mut dirs: Vec<LatVec> = self.vertices[1..].iter().map(|v| sub(v, v0)).collect();
        dirs.extend(self.rays.iter().cloned());
        rank(&dirs, self.dim)
    }

    pub fn is_full_dim(&self) -> bool {
        self.affine_dim() == self.dim
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.ineqs.iter().all(|h| !h.value(x).is_negative())
    }

    /// Membership in the topological interior of `R^dim`.
    pub fn interior_contains(&self, x: &[Rational]) -> bool {
        self.ineqs.iter().all(|h| h.value(x).is_positive())
    }

    /// Recession-cone membership.
    pub fn recedes(&self, r: &[Rational]) -> bool {
        self.ineqs.iter().all(|h| !dot(&h.normal, r).is_negative())
    }

    /// `t·p` for `t ≥ 0`.
    pub fn scale(&self, t: &Rational) -> Polyhedron {
        if t.is_zero() {
            return Polyhedron::from_vrep(self.dim, &[zero_vec(self.dim)], &self.rays)
                .expect("nonempty");
        }
        assert!(t.is_positive(), "scale factor must be nonnegative");
        let mut vertices: Vec<LatVec> = self.vertices.iter().map(|v| scale(t, v)).collect();
        vertices.sort();
        let ineqs = self
            .ineqs
            .iter()
            .map(|h| Halfspace::new(h.normal.clone(), &h.offset * t))
            .collect();
        Polyhedron { dim: self.dim, vertices, rays: self.rays.clone(), ineqs }
    }

    /// `-p`.
    pub fn negate(&self) -> Polyhedron {
        let mut vertices: Vec<LatVec> = self.vertices.iter().map(|v| neg(v)).collect();
        let mut rays: Vec<LatVec> = self.rays.iter().map(|v| neg(v)).collect();
        let mut ineqs: Vec<Halfspace> = self
            .ineqs
            .iter()
            .map(|h| Halfspace::new(neg(&h.normal), h.offset.clone()))
            .collect();
        vertices.sort();
        rays.sort();
        ineqs.sort();
        Polyhedron { dim: self.dim, vertices, rays, ineqs }
    }

    pub fn translate(&self, v: &[Rational]) -> Polyhedron {
        let vs: Vec<LatVec> = self.vertices.iter().map(|x| crate::exact_lattice::add(x, v)).collect();
        Polyhedron::from_vrep(self.dim, &vs, &self.rays).expect("nonempty")
    }

    /// Image under `x ↦ x · r` where `r` is `dim × target_dim`.
    pub fn linear_image(&self, r: &[LatVec], target_dim: usize) -> Polyhedron {
        let vs: Vec<LatVec> = self.vertices.iter().map(|v| vec_mat(v, r, target_dim)).collect();
        let rs: Vec<LatVec> = self.rays.iter().map(|v| vec_mat(v, r, target_dim)).collect();
        Polyhedron::from_vrep(target_dim, &vs, &rs).expect("image of a nonempty set")
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        Polyhedron::from_hrep(self.dim, &ineqs)
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Polyhedron {
        let mut vs = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                vs.push(crate::exact_lattice::add(a, b));
            }
        }
        let mut rs = self.rays.clone();
        rs.extend(other.rays.iter().cloned());
        Polyhedron::from_vrep(self.dim, &vs, &rs).expect("nonempty")
    }

    /// Equality decided by mutual containment of generators, independent of canonical form.
    pub fn same_set(&self, other: &Polyhedron) -> bool {
        self.dim == other.dim
            && self.vertices.iter().all(|v| other.contains(v))
            && self.rays.iter().all(|r| other.recedes(r))
            && other.vertices.iter().all(|v| self.contains(v))
            && other.rays.iter().all(|r| self.recedes(r))
    }

    /// Symmetric about the origin.
    pub fn is_symmetric(&self) -> bool {
        *self == self.negate()
    }

    /// Minimum and maximum of `⟨phi, ·⟩` over the vertices.
    pub fn vertex_range(&self, phi: &[Rational]) -> (Rational, Rational) {
        let vals = self.vertices.iter().map(|v| dot(phi, v));
        let (mut lo, mut hi) = (None::<Rational>, None::<Rational>);
        for x in vals {
            if lo.as_ref().is_none_or(|l| x < *l) {
                lo = Some(x.clone());
            }
            if hi.as_ref().is_none_or(|h| x > *h) {
                hi = Some(x);
            }
        }
        (lo.expect("nonempty"), hi.expect("nonempty"))
    }
}

impl PartialOrd for Polyhedron {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polyhedron {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim, &self.vertices, &self.rays).cmp(&(other.dim, &other.vertices, &other.rays))
    }
}

/// Converts between the two representations; see [`Polyhedron::vrep_to_hrep`].
pub fn vrep_to_hrep(dim: usize, vertices: &[LatVec], rays: &[LatVec]) -> Result<Vec<Halfspace>> {
    if vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Polyhedron::from_vrep(dim, vertices, rays)?.ineqs)
}

pub fn hrep_to_vrep(dim: usize, ineqs: &[Halfspace]) -> Result<(Vec<LatVec>, Vec<LatVec>)> {
    let p = Polyhedron::from_hrep(dim, ineqs)?;
    Ok((p.vertices, p.rays))
}

/// `p* = {y : ⟨y, x⟩ ≥ -1 for all x ∈ p}`; requires `0 ∈ p`.
pub fn polar(p: &Polyhedron) -> Result<Polyhedron> {
    if !p.contains(&zero_vec(p.dim)) {
        return Err(Error::OriginNotContained);
    }
    let mut ineqs: Vec<Halfspace> = p
        .vertices
        .iter()
        .filter(|v| !is_zero_vec(v))
        .map(|v| Halfspace::new(v.clone(), -Rational::one()))
        .collect();
    ineqs.extend(p.rays.iter().map(|r| Halfspace::new(r.clone(), Rational::zero())));
    Polyhedron::from_hrep(p.dim, &ineqs)
}

/// `inf ⟨phi, p⟩`, with `None` standing for `-∞`.
pub fn support_min(p: &Polyhedron, phi: &[Rational]) -> Option<Rational> {
    if p.rays.iter().any(|r| dot(phi, r).is_negative()) {
        return None;
    }
    Some(p.vertex_range(phi).0)
}

/// `p - p = {x - y : x, y ∈ p}`.
pub fn minkowski_diff_self(p: &Polyhedron) -> Polyhedron {
    p.minkowski_sum(&p.negate())
}

/// The standard simplex `conv{0, e_1, ..., e_d}`.
pub fn standard_simplex(d: usize) -> Polyhedron {
    let mut vs = vec![zero_vec(d)];
    vs.extend(identity(d));
    Polyhedron::from_vrep(d, &vs, &[]).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lattice::{q, qf, qvec};

    fn hs(n: &[i64], c: Rational) -> Halfspace {
        Halfspace::new(qvec(n), c)
    }

    #[test]
    fn simplex_inequalities() {
        let p = standard_simplex(2);
        let mut expect = [hs(&[1, 0], q(0)), hs(&[0, 1], q(0)), hs(&[-1, -1], q(-1))];
        expect.sort();
        assert_eq!(p.ineqs(), &expect[..]);
    }

    #[test]
    fn half_strip_vertices_and_ray() {
        let ineqs = vec![hs(&[1, 0], q(-1)), hs(&[-1, 0], q(-1)), hs(&[0, 1], q(-1))];
        let p = Polyhedron::from_hrep(2, &ineqs).unwrap();
        assert_eq!(p.vertices(), &[qvec(&[-1, -1]), qvec(&[1, -1])]);
        assert_eq!(p.rays(), &[qvec(&[0, 1])]);
        for x in -4..=4 {
            for y in -4..=4 {
                let pt = vec![qf(x, 2), qf(y, 2)];
                let inside = x.abs() <= 2 && y >= -2;
                assert_eq!(p.contains(&pt), inside);
            }
        }
    }

    #[test]
    fn single_point_pins_every_coordinate() {
        let p = Polyhedron::point(&qvec(&[0, 0]));
        assert_eq!(p.ineqs().len(), 4);
        assert!(p.contains(&qvec(&[0, 0])));
        assert!(!p.contains(&qvec(&[0, 1])));
        assert_eq!(p.affine_dim(), 0);
    }

    #[test]
    fn infeasible_hrep_is_empty() {
        let ineqs = vec![hs(&[1], q(1)), hs(&[-1], q(0))];
        assert_eq!(Polyhedron::from_hrep(1, &ineqs), Err(Error::EmptySet));
    }

    #[test]
    fn polar_examples() {
        let p = polar(&standard_simplex(2)).unwrap();
        assert_eq!(p.ineqs(), &[hs(&[0, 1], q(-1)), hs(&[1, 0], q(-1))]);
        let sq = Polyhedron::cuboid(&qvec(&[-1, -1]), &qvec(&[1, 1])).unwrap();
        let cross = Polyhedron::from_vrep(
            2,
            &[qvec(&[1, 0]), qvec(&[-1, 0]), qvec(&[0, 1]), qvec(&[0, -1])],
            &[],
        )
        .unwrap();
        assert_eq!(polar(&sq).unwrap(), cross);
        let u = Polyhedron::from_vrep(
            2,
            &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[-1, 0])],
            &[],
        )
        .unwrap();
        let box_ = polar(&u).unwrap();
        assert_eq!(box_.vertices(), &[qvec(&[-1, -1]), qvec(&[1, -1])]);
        assert_eq!(box_.rays(), &[qvec(&[0, 1])]);
        assert_eq!(polar(&box_).unwrap(), u);
        let shifted = Polyhedron::cuboid(&qvec(&[1]), &qvec(&[2])).unwrap();
        assert_eq!(polar(&shifted), Err(Error::OriginNotContained));
    }

    #[test]
    fn support_min_examples() {
        let p = Polyhedron::from_hrep(2, &[hs(&[1, 0], q(-1)), hs(&[-1, 0], q(-1)), hs(&[0, 1], q(-1))]).unwrap();
        assert_eq!(support_min(&p, &qvec(&[0, 1])), Some(q(-1)));
        let seg = Polyhedron::from_vrep(2, &[qvec(&[0, 0]), qvec(&[1, 0])], &[]).unwrap();
        assert_eq!(support_min(&seg, &qvec(&[0, 0])), Some(q(0)));
        let ray = Polyhedron::cone(2, &[qvec(&[1, 0])]);
        assert_eq!(support_min(&ray, &qvec(&[-1, 0])), None);
    }

    #[test]
    fn difference_body_examples() {
        let unit = Polyhedron::cuboid(&qvec(&[0]), &qvec(&[1])).unwrap();
        assert_eq!(minkowski_diff_self(&unit), Polyhedron::cuboid(&qvec(&[-1]), &qvec(&[1])).unwrap());
        let hex = minkowski_diff_self(&standard_simplex(2));
        let expect = Polyhedron::from_vrep(
            2,
            &[qvec(&[1, 0]), qvec(&[-1, 0]), qvec(&[0, 1]), qvec(&[0, -1]), qvec(&[1, -1]), qvec(&[-1, 1])],
            &[],
        )
        .unwrap();
        assert_eq!(hex, expect);
        let sq = Polyhedron::cuboid(&qvec(&[-1, -1]), &qvec(&[1, 1])).unwrap();
        assert_eq!(minkowski_diff_self(&sq), sq.scale(&q(2)));
    }

    #[test]
    fn lines_are_kept_as_opposite_rays() {
        let strip = Polyhedron::from_hrep(2, &[hs(&[0, 1], q(0)), hs(&[0, -1], q(-1))]).unwrap();
        assert_eq!(strip.rays(), &[qvec(&[-1, 0]), qvec(&[1, 0])]);
        assert_eq!(strip.vertices(), &[qvec(&[0, 0]), qvec(&[0, 1])]);
        let p = polar(&strip).unwrap();
        assert_eq!(p.affine_dim(), 1);
        assert_eq!(polar(&p).unwrap(), strip);
    }
}
