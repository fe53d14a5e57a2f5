//! Exact rational arithmetic, homogeneous polynomials and sparse exact
//! linear algebra.

pub mod complex;
pub mod echelon;
pub mod matrix;
pub mod modular;
pub mod monomial;
pub mod multimodular;
pub mod poly;
pub mod scalar;

pub use echelon::{Echelon, EliminationOptions};
pub use matrix::{ExactMatrix, SparseRow};
pub use monomial::{monomial_basis, Monomial, MonomialBasis};
pub use poly::HomogeneousPoly;
pub use scalar::Scalar;
