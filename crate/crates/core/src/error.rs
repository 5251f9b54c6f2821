use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("singular {what}: determinant {det:e}")]
    Singular { what: String, det: f64 },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("alignment error: shift {shift} is {offset:e} away from the grid (limit {limit:e})")]
    Alignment { shift: f64, offset: f64, limit: f64 },
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Io(e.to_string())
    }
}
