//! Classification of modular invariant partition functions of affine A1.

pub mod classifier;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod galois;
pub mod graphs;
pub mod invariants;
pub mod linalg;
pub mod modular;
pub mod numeric;

pub use error::{Error, Result};
