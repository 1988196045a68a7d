use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid automorphism for h = {h}: {reason}")]
    InvalidAutomorphism { h: usize, reason: String },

    #[error("element ({n}, {h}) is outside the group (|N| = {order_n}, |H| = {order_h})")]
    ElementOutOfRange {
        n: usize,
        h: usize,
        order_n: usize,
        order_h: usize,
    },

    #[error("operands live on different groups")]
    GroupMismatch,

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("at least one filter is required")]
    NoFilters,

    /// The polyphase Gram matrix `H*(γ)H(γ)` is (numerically) singular somewhere.
    #[error(
        "samples insufficient: A_H = {a_h:.3e} <= tol * B_H (B_H = {b_h:.3e}); \
         worst character {gamma:?} has lambda_min = {lambda_min:.3e}"
    )]
    SamplesInsufficient {
        gamma: Vec<usize>,
        lambda_min: f64,
        a_h: f64,
        b_h: f64,
    },

    #[error(
        "generator orbit is not a Riesz sequence: Gram lambda_min = {lambda_min:.3e}, \
         lambda_max = {lambda_max:.3e}"
    )]
    DegenerateGenerator { lambda_min: f64, lambda_max: f64 },

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("incompatible crystal specification: {0}")]
    IncompatibleCrystal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that are mathematical verdicts on valid input
    /// rather than malformed or inconsistent input.
    pub fn is_rejection(&self) -> bool {
        matches!(self, Error::SamplesInsufficient { .. })
    }
}
