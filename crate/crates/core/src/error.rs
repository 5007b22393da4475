use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index out of range at offset {pos}: {msg}")]
    IndexOutOfRange { pos: usize, msg: String },
    #[error("derivation index {index} outside 1..={m}")]
    DerivationIndex { index: usize, m: usize },
    #[error("variable {0} has no assigned value")]
    Unassigned(String),
    #[error("y-variable {0} is not allowed here")]
    YVariable(String),
    #[error("constant polynomial has no leader")]
    ConstantPolynomial,
    #[error("variable {0} is not among the ideal's variables")]
    VariableOutsideIdeal(String),
    #[error("certificate is rejected: {0}")]
    RejectedCertificate(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("instance file, line {line}: {msg}")]
    InstanceFormat { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
