//! Symbolic and numerical tools for star transforms: dual differential
//! operator symbols, injectivity, symmetry-induced identities, spaces of
//! non-injective branch configurations, and a 2D discretization.

pub mod error;
pub mod fano;
pub mod numeric2d;
pub mod polyring;
pub mod starcore;
pub mod symmetry;

pub use error::{Error, Result};
