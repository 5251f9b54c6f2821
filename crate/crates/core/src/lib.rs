//! Numerical laboratory for tau-pseudo-differential operators on a discretized
//! one-dimensional phase space, with exact operator-ordering algebra.

pub mod bornjordan;
pub mod cmat;
pub mod config;
pub mod error;
pub mod gridfield;
pub mod heisenberg;
pub mod intertwine;
pub mod linalg;
pub mod ordering;
pub mod report;
pub mod scalar;
pub mod shubin;
pub mod sympcore;
pub mod verify;

pub use error::{LabError, Result};
pub use scalar::{Real, C};

/// Double-precision aliases.
pub type Grid = gridfield::Grid1D<f64>;
pub type Function = gridfield::SampledFunction<f64>;
pub type Table = gridfield::PhaseTable<f64>;
pub type Operator = shubin::OperatorMatrix<f64>;
pub type Symbol = shubin::SymbolSpec<f64>;
pub type Symp = sympcore::SympMatrix<f64>;
pub type Cayley = sympcore::CayleyMatrix<f64>;
pub type Mat = linalg::RMat<f64>;
