use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("operands use different symbol tables")]
    TableMismatch,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid symbol table: {0}")]
    InvalidTable(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("relation right-hand side contains `{0}`")]
    RelationContainsSymbol(String),
    #[error("total degree exceeds the supported maximum of {0}")]
    DegreeOverflow(u32),
    #[error("evaluation hit a pole")]
    Pole,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
