//! CMV matrices and their applications: exact sparse matrix models for
//! beta-ensembles and the finite defocusing Ablowitz-Ladik hierarchy.

pub mod alflows;
pub mod brackets;
pub mod cmv;
pub mod ensembles;
pub mod error;
pub mod io;
pub mod measure;
pub mod opuc;
pub mod par;
pub mod quadrature;
pub mod spectral;

pub use cmv::{build_cmv, build_jacobi, build_lm, build_xi, CmvMatrix, JacobiMatrix, VerblunskySet, C64};
pub use error::{Error, Result};
pub use measure::{SpectralMeasureCircle, SpectralMeasureLine};
pub use par::Execution;
