use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("number of assets m={0} is outside the supported range 1..={max}", max = crate::lattice::MAX_M)]
    UnsupportedDimension(usize),

    #[error("index {index} is out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("polytope P(b) is empty: ||b||_inf > 1")]
    EmptyPolytope,

    #[error("subvertex criterion violated: sum of b(i) = {sum} > 2 - m = {bound}")]
    SubvertexCriterion { sum: String, bound: String },

    #[error("vector is not a point of the polytope")]
    NotInPolytope,

    #[error("LP size cap exceeded: m={m} > {cap}")]
    LpCapExceeded { m: usize, cap: usize },

    #[error("tree size cap exceeded: m*n={bits} > {cap} bits")]
    TreeCapExceeded { bits: usize, cap: usize },

    #[error("payoff is not symmetric; the composition formula does not apply")]
    NotSymmetric,

    #[error("invalid payoff: {0}")]
    InvalidPayoff(String),

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid market model: {0}")]
    InvalidMarket(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}
