use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse coefficient {text:?}: {reason}")]
    Parse { text: String, reason: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("component {component} has a nonzero constant term")]
    ConstantTerm { component: usize },

    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),

    #[error("degree {degree} exceeds truncation {trunc}")]
    BeyondTruncation { degree: u32, trunc: u32 },

    #[error("order {found} is below the required order {required}")]
    OrderTooLow { required: u32, found: u32 },

    #[error("t-order bound must be at least 1")]
    ZeroTOrder,

    #[error("evaluation at t != 0 requires o(H) >= 2; the sum over t-orders is not degree-finite")]
    NonFiniteEvaluation,

    #[error("{computed} t-orders only determine z-degrees up to {exact}, but {requested} was requested")]
    InsufficientTOrder { computed: usize, exact: u32, requested: u32 },

    #[error("t-order {requested} requested but only {available} are available")]
    TOrderExceeded { requested: usize, available: usize },

    #[error("quadratic part must be exactly 1/2 * sum z_i^2")]
    NotNormalized,

    #[error("t = 1 summation did not stabilize at degree {degree} within {torder} t-orders")]
    Unstable { degree: u32, torder: usize },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("Hessian is not nilpotent")]
    NotNilpotent,

    #[error("malformed tree: {0}")]
    MalformedTree(String),

}
