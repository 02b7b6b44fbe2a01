use thiserror::Error;

/// Unified error type for all engine operations.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Domain construction rejected the size parameter.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// Two arguments belong to different domains.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// A Gaussian element with norm 0 mod p has no inverse.
    #[error("element {re}+{im}i has norm 0 mod {p} and is not invertible")]
    NonInvertible { re: u32, im: u32, p: u32 },

    /// Input points coincide where distinct points are required.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The three points do not form the required right-angled configuration.
    #[error("points do not form a corner with the right angle at the apex")]
    NotACorner,

    /// A pattern matrix list is unusable (singular or repeated matrices).
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    /// Operation requires p = 3 mod 4.
    #[error("p = {p} is 1 mod 4; this operation requires p = 3 mod 4")]
    WrongResidue { p: u32 },

    /// The ratio a/b must be a quadratic residue mod p.
    #[error("{value} is not a quadratic residue mod {p}")]
    NotQuadraticResidue { value: u32, p: u32 },

    /// Zero passed where a nonzero residue is required.
    #[error("zero input where a nonzero residue is required")]
    ZeroInput,

    /// Coloring has the wrong number of color classes for this operation.
    #[error("operation requires {expected} color classes, coloring has {got}")]
    WrongColorCount { expected: u16, got: u16 },

    /// A point, offset, or function argument leaves its domain.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Exact search requested on a domain above the exhaustive limit.
    #[error("domain has {points} points, exact mode is limited to {limit}")]
    ExactLimitExceeded { points: u32, limit: u32 },

    /// No saturated set can exist in this domain.
    #[error("infeasible domain: {0}")]
    InfeasibleDomain(String),

    /// A coloring file or value failed validation.
    #[error("bad coloring: {0}")]
    BadColoring(String),

    /// A checkpoint file failed validation.
    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),

    /// A hex-encoded point set failed validation.
    #[error("bad bitset hex: {0}")]
    BadBitset(String),

    /// A numeric argument is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
