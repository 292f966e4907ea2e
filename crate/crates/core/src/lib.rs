//! Decoupling of fully symmetric rank-3 tensors under the orthogonal group.

pub mod battery;
pub mod covariants;
pub mod decouple;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod molien;
pub mod orbitlab;
pub mod ortho;
pub mod recover;
pub mod relations;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
