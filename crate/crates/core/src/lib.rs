//! Heegner points on X1(N): CM evaluation, torsion models, class-field data,
//! Galois action on singular values and distribution-relation checks.

pub mod cmfields;
pub mod error;
pub mod eulerlab;
pub mod galoisact;
pub mod modelgen;
pub mod numkernel;

pub use error::{Error, Result};
