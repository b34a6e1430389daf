//! Exact-arithmetic construction and certification of multipartite states
//! whose entanglement survives the loss of any `m` parties.
//!
//! Two pipelines are provided: symmetric Dicke mixtures decided by the Hankel
//! criterion, and states built from critical arrays decided by explicit PPT
//! witnesses and diagonality.

pub mod arrays;
pub mod certificate;
pub mod certifier;
pub mod dicke;
pub mod error;
pub mod families;
pub mod linalg;
pub mod scalar;
pub mod separability;
pub mod tables;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::{ExactScalar, Limits};
