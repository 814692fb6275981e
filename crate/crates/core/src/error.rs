use thiserror::Error;

/// Errors raised by construction, verification and classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("element {0} does not belong to the group {1}")]
    NotInGroup(String, String),
    #[error("element {0} has infinite order")]
    InfiniteOrder(String),
    #[error("element {0} does not have order 2")]
    NotOrderTwo(String),
    #[error("subgroup is not an elementary 2-group")]
    NotElementaryTwo,
    #[error("element {0} is not in the subgroup")]
    NotInSubgroup(String),
    #[error("bicharacter is degenerate")]
    Degenerate,
    #[error("invalid bicharacter: {0}")]
    InvalidBicharacter(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("recognition failed: {0}")]
    Recognition(String),
}

pub type Result<T> = std::result::Result<T, GradingError>;
