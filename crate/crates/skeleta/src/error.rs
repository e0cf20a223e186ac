use thiserror::Error;

/// Crate-wide error type. Domain errors carry enough context to be
/// reported as machine-readable JSON by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("semifield tag mismatch: {0} vs {1}")]
    TagMismatch(String, String),
    #[error("element is not integral: {0}")]
    NotIntegral(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("map does not preserve joins (fails on {0})")]
    NotJoinPreserving(String),
    #[error("lattice point {0} is not a member of the monoid")]
    NotMember(String),
    #[error("monoid mismatch between ideal operands")]
    MonoidMismatch,
    #[error("monoid is not pointed")]
    NotPointed,
    #[error("rank too large: {0} (cap {1})")]
    RankTooLarge(usize, usize),
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("base semifield mismatch")]
    BaseMismatch,
    #[error("bound is not admissible: {0}")]
    BoundNotAdmissible(String),
    #[error("cannot localize at the zero ideal")]
    ZeroIdeal,
    #[error("presentation is not contracting: {0}")]
    NotContracting(String),
    #[error("too many generators: {0} (cap {1})")]
    TooManyGenerators(usize, usize),
    #[error("polytope has no vertex")]
    NoVertex,
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("fan cones are not face-compatible: {0}")]
    IncompatibleFan(String),
    #[error("gluing {0} is not an isomorphism of cell localizations: {1}")]
    GluingNotIso(usize, String),
    #[error("cellular cover formula fails on chart {0}")]
    CoverFails(String),
    #[error("sections disagree on gluing {0}")]
    InconsistentSections(usize),
    #[error("point lies outside the domain")]
    PointOutside,
    #[error("element has no admissible lower bound in this chart")]
    NotBounded,
    #[error("cycle length too small: need n >= 3, got {0}")]
    TooSmall(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("rank {0} unsupported here")]
    RankUnsupported(usize),
    #[error("relation {0} violated by the assignment")]
    RelationViolated(usize),
    #[error("sort violated for generator {0}: contracting generators take values <= 0")]
    SortViolated(String),
    #[error("parse error at {line}:{col}: expected {expected}")]
    Parse {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("equality undecided: {0}")]
    Undecided(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
