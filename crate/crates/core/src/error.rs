use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("row index {index} out of range for a family with {rows} stored rows")]
    RowOutOfRange { index: usize, rows: usize },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid sparse vector: {0}")]
    InvalidSparseVector(String),

    #[error("invalid measurement plan: {0}")]
    InvalidPlan(String),

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("zero node at position {0}")]
    ZeroNode(usize),

    #[error("duplicate nodes at positions {0} and {1}")]
    DuplicateNodes(usize, usize),

    #[error("odd number of measurements ({0}); the Hankel layout needs 2t values")]
    OddMeasurementCount(usize),

    #[error("gcd(n, k) != 1 for n = {n}, k = {k}")]
    StepNotCoprime { n: usize, k: usize },

    #[error("ratio condition violated: (beta_{i}/beta_{j})^{k} is a root of unity")]
    RatioCondition { i: usize, j: usize, k: usize },

    #[error("operation not supported for this family: {0}")]
    UnsupportedFamily(String),

    #[error("locator polynomial vanishes at every node")]
    EmptySupport,

    #[error("measurements are inconsistent with any {t}-sparse vector (relative residual {residual:e})")]
    Inconsistent { t: usize, residual: f64 },

    #[error("missing measurement for star-span generator {0}")]
    MissingMeasurement(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
