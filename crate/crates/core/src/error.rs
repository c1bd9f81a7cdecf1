use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("factor q-exponent must be at least 1")]
    ZeroQExponent,

    #[error("negative z-exponent {0} requires a Laurent spec")]
    NegativeZExponent(i64),

    #[error("univariate factor z-exponent must be at least 1")]
    ZeroZExponent,

    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("cannot parse expression `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("rule {rule}: {reason}")]
    InvalidRule { rule: usize, reason: String },

    #[error("rule {rule}: `{expr}` is not eventually increasing in j, instantiation would not terminate")]
    NonTerminating { rule: usize, expr: String },

    #[error("rule {rule}: c({j}) = {value} is below 1")]
    NonPositiveQExponent { rule: usize, j: i64, value: i64 },

    #[error("rule {rule}: c({j}) - b({j}) = {value} must be positive")]
    NonPositiveDifference { rule: usize, j: i64, value: i64 },

    #[error("spec is Laurent; use the Laurent expansion")]
    LaurentSpec,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("hypotheses not satisfied: {0}")]
    HypothesisFailed(String),

    #[error("ell = {ell} is outside the guaranteed stable range ell <= floor({n}/{m}) = {}", n / m)]
    OutsideStableRange { n: u64, ell: u64, m: u64 },

    #[error("limit sequence has order {have}, need at least {need}")]
    LimitTooShort { have: usize, need: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
