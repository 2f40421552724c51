//! Symbolic-numeric engine for the noncommutative star product of a charged
//! particle in the field of a magnetic monopole.
//!
//! The symbolic layer works in exact Gaussian-rational arithmetic over a
//! function class that is closed under the operations the expansion needs:
//! polynomials in momentum and position with inverse-radius factors, Fourier
//! dual variables, and truncated power series in the deformation parameter.
//! The numeric layer evaluates quaternion-valued geometric phases and the
//! associated projective-representation operators in `f64`, and cross-checks
//! the symbolic expansion against them.
//!
//! Modules:
//! - [`quaternion`]: `f64` quaternion algebra and the position-dependent
//!   imaginary unit.
//! - [`rational`], [`multiindex`], [`radial`], [`symbol`], [`fourier`],
//!   [`hbar`]: the exact symbolic tower.
//! - [`freealg`], [`zassenhaus`]: exponential splitting in the free algebra
//!   and its specialization to the monopole translation algebra.
//! - [`bidiff`], [`star`]: bidifferential operators and the star-product
//!   expansion, associativity checking.
//! - [`kontsevich`]: the generic second-order deformation formula for an
//!   arbitrary Poisson matrix, and its comparison with the expansion.
//! - [`representation`]: numeric geometric phases, weak projective
//!   representation checks, multiplier cross-checks, integral kernels.
//! - [`families`], [`parse`]: named symbol families and a small expression
//!   parser for the command-line surface.

pub mod bidiff;
pub mod error;
pub mod families;
pub mod fourier;
pub mod freealg;
pub mod hbar;
pub mod kontsevich;
pub mod multiindex;
pub mod par;
pub mod parse;
pub mod quaternion;
pub mod radial;
pub mod rational;
pub mod reference;
pub mod representation;
pub mod star;
pub mod symbol;
pub mod zassenhaus;

pub use error::{Error, Result};

/// Version stamp embedded in every serialized report.
pub const SCHEMA_VERSION: u32 = 1;
