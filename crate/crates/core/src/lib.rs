//! Exact reduction of finite-order jets of linear connections to normal
//! tensors, together with the invariant-theoretic and dimension-counting
//! consequences.

pub mod checks;
pub mod connections;
pub mod curvature_dim2;
pub mod error;
pub mod invariant_theory;
pub mod json;
pub mod linalg;
pub mod moduli;
pub mod random;
pub mod rat;
pub mod reduction;
pub mod series;
pub mod tensors;

pub use error::{Error, Result};
pub use rat::Rat;
