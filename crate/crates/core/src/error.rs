use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("not a Lie polynomial: leading word {0} is not Lyndon")]
    NotLie(String),
    #[error("matrix {0:?} is not in SL2(Z)")]
    NotSl2([i64; 4]),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point {0} is not in the upper half plane")]
    NotInUpperHalfPlane(String),
    #[error("path segments do not chain: {0}")]
    BrokenPath(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
