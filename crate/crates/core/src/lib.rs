//! Exact computations with the configuration Poisson groupoids of flags of
//! SL(r+1): Bruhat factorizations, Bott-Samelson and Lusztig charts, the
//! groupoid of decorated flag configurations and its models, symplectic
//! leaves, and jet-based verification of Poisson identities.

pub mod error;
pub mod groupcore;
pub mod groupoids;
pub mod leaves;
pub mod cells;
pub mod poissonlab;
pub mod rootdata;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
