use thiserror::Error;

/// Every failure the library can report.
///
/// Domain errors carry enough context to explain which precondition failed.
/// None of them are used to encode "the answer is no": negative answers are
/// returned as `Ok(None)` or `Ok(false)`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("lattice is not contained in the candidate superlattice")]
    NotASublattice,

    #[error("support set is empty")]
    EmptySupport,

    #[error("weight {0} is not in the dual of the recession cone, the infimum is unbounded")]
    UnboundedDirection(String),

    #[error("series is zero")]
    ZeroSeries,

    #[error("truncation too coarse: {0}")]
    TruncationTooCoarse(String),

    #[error("weight {0} is not in the interior of the cone")]
    BoundaryWeight(String),

    #[error("value of the weight at the minimizer is not an integer: {0}")]
    NonIntegralValue(String),

    #[error("weight {0} takes a non-integral value on a generator")]
    NonIntegralWeight(String),

    #[error("weight {0} is not in the dual lattice")]
    WeightNotInDualLattice(String),

    #[error("semigroup cone contains a line (no vertex)")]
    NoVertex,

    #[error("dimension {found} exceeds the supported maximum {max}")]
    DimensionTooLarge { found: usize, max: usize },

    #[error("isomorphism search budget exceeded after {explored} candidates")]
    SearchBudgetExceeded { explored: u64 },

    #[error("exponent {0} does not enlarge the lattice (index 1)")]
    DegenerateExponent(String),

    #[error("branch is not quasi-ordinary: {0}")]
    NotQuasiOrdinary(String),

    #[error("discriminant vanishes identically")]
    ZeroDiscriminant,

    #[error("product of conjugates is not Galois stable: {0}")]
    NotGaloisStable(String),

    #[error("not a Weierstrass polynomial: {0}")]
    NotWeierstrass(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for malformed input as opposed to a failed mathematical precondition.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
