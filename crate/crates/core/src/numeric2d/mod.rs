//! Discretized star transforms on a square domain in the plane.
//!
//! Functions are sampled on a cell-centered grid over `(-L, L)^2`. Beam
//! transforms integrate backwards along rays up to the boundary; the dual
//! operator is applied as a cascade of directional derivatives and inverted
//! either exactly (constants and Laplacian powers) or by regularized
//! Fourier division.

mod beam;
mod field;
mod phantom;
mod solver;
mod star;

pub use beam::{beam_transform, beam_transform_naive, directional_derivative, UNIT_TOL};
pub use field::{Domain2D, Field2D, MIN_N};
pub use phantom::{make_phantom, Phantom, BOUNDARY_TRACE, PHANTOM_CUTOFF};
pub use solver::{laplacian_5pt, solve_laplacian_power, tikhonov_divide};
pub use star::{apply_star, dual_derivative_cascade, invert_star, null_residual, InversionMethod};
