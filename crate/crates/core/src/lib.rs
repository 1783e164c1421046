//! Exact Laplace–Beltrami action of SO(N) on trace polynomials.
//!
//! - [`partitions`]: integer partitions indexing the monomials `p_λ`;
//! - [`tracepoly`]: the algebra of trace polynomials and the SO(3)/SO(4)
//!   reductions;
//! - [`laplacian`]: closed-form `Δ p_λ`;
//! - [`flagmatrix`]: flag bases, the block triangular matrices, exact
//!   spectra and characters;
//! - [`numeric`]: floating-point oracle evaluating the ambient formulas on
//!   concrete rotations;
//! - [`cli`]: the command-line frontend.

pub mod cli;
pub mod error;
pub mod flagmatrix;
pub mod partitions;
pub mod laplacian;
pub mod numeric;
pub mod tracepoly;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use tracepoly::{Mode, NPoly, Rational, TracePoly};
