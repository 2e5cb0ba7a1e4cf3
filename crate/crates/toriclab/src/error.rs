use crate::exact_lattice::{fmt_vec, LatVec};
use thiserror::Error;

/// Every failure the library can report.
///
/// Variants group into input errors, definitive mathematical negatives
/// (which carry a witness where one exists), resource caps, and internal
/// consistency failures that indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not primitive in the lattice")]
    NotPrimitive,
    #[error("vector does not lie in the lattice")]
    NotInLattice,
    #[error("basis is singular")]
    SingularBasis,

    #[error("inequalities define the empty set")]
    EmptySet,
    #[error("origin is not contained in the polyhedron")]
    OriginNotContained,
    #[error("polyhedron is unbounded")]
    UnboundedInput,
    #[error("point lies outside the polytope")]
    PointOutside,
    #[error("polytope is not full-dimensional")]
    DegenerateDimension,
    #[error("no interior lattice point")]
    NoInteriorLatticePoint,
    #[error("interval has no interior integer")]
    NoInteriorInteger,
    #[error("body is not symmetric about the origin")]
    AsymmetricInput,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("projection is not surjective onto the base lattice")]
    NotSurjective,
    #[error("fan support differs from the preimage of the base cone: {0}")]
    SupportMismatch(String),
    #[error("coefficient {0} outside [0,1]")]
    CoefficientRange(String),
    #[error("rays do not span the ambient space")]
    RaysDontSpan,
    #[error("invalid base cone: {0}")]
    InvalidBaseCone(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("polar of the moment polytope differs from the hull formula")]
    InternalDualityMismatch,
    #[error("K+B is not R-Cartier on maximal cone {cone}")]
    NotRCartier { cone: usize },
    #[error("-K-B is not semiample: cone {cone} violates the inequality of ray {ray}")]
    NotSemiample { cone: usize, ray: usize },
    #[error("vector lies outside the fan support")]
    OutsideSupport,
    #[error("germ is not semiample")]
    RequiresSemiample,
    #[error("rays with coefficient zero span the whole space")]
    DegenerateQuotient,
    #[error("t must be positive")]
    NonpositiveT,
    #[error("excluded case t = 1 over a point with empty boundary and canonical singularities")]
    SpecialCaseC1,

    #[error("lattice point {} lies in the interior", fmt_vec(.0))]
    InteriorPointPresent(LatVec),
    #[error("polytope is not compact")]
    NonCompact,
    #[error("psi does not factor through the projection")]
    PsiDoesNotFactor,
    #[error("minimal log discrepancy is not positive")]
    NonpositiveMld,
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("germ is not affine")]
    NotAffine,

    #[error("property fails at t; witness {}", fmt_vec(.0))]
    CtFails(LatVec),
    #[error("coefficient {0} is not hyperstandard for the given r")]
    NotHyperstandard(String),
    #[error("base is a point")]
    BaseIsPoint,
    #[error("total minimal log discrepancy {0} is below t")]
    MldTooSmall(String),
    #[error("t must lie in (0,1)")]
    TOutOfRange,
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("index search exceeded the cap {0}")]
    IndexCapExceeded(u64),
    #[error("enumeration of {cells} cells exceeds the cap {cap}")]
    BoxTooLarge { cells: u128, cap: u64 },
    #[error("cap is below the value at every candidate")]
    CapTooSmall,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
