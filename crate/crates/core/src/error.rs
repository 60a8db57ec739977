use exact::ExactError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("unsupported kind `{0}`")]
    UnsupportedKind(String),
    #[error("both curves use the same curve variable")]
    SharedCurveVariable,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{0} vanishes identically (one curve lies in a circle about an axis through the other, or is a point)")]
    DegenerateDerivative(&'static str),
    #[error("parameter outside the curve's domain: {0}")]
    Domain(String),
    #[error("degenerate conic: {0}")]
    DegenerateConic(String),
    #[error("ambiguous clustering: {0}")]
    Ambiguous(String),
    #[error("step too large: {0}")]
    StepTooLarge(String),
    #[error("case {id}: {msg}")]
    Case { id: String, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
