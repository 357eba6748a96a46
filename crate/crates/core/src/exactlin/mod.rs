//! Exact scalars (ℚ and cyclotomic fields) and dense/sparse exact linear algebra.

pub mod cyclo;
pub mod field;
pub mod linalg;
pub mod mat;

pub use cyclo::CycloNum;
pub use field::{Rat, Scalar};
pub use mat::{fixed_space, Mat, SympSpace};

#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
    #[error("not a symplectic form: {0}")]
    NotSymplecticForm(String),
}
