//! Numerical laboratory for Nörlund logarithmic means of quadratical partial
//! sums of double Fourier series on the torus `T² = [-π, π)²`.
//!
//! The crate is organised bottom-up:
//!
//! - [`fourier`]: grid functions, Fourier coefficients, Dirichlet kernels and
//!   rectangular / quadratical partial sums.
//! - [`means`]: Nörlund logarithmic, Marcinkiewicz and Riesz logarithmic means,
//!   both spectrally and by kernel convolution.
//! - [`kernels`]: the logarithmic-mean kernel `F_N` in direct and closed
//!   (telescoped, fifteen-term) form, and the rectangle geometry `I_n`, `J_n`
//!   on which it is bounded below by `c/(xy)`.
//! - [`orlicz`]: Young functions, Luxemburg norms and inclusion probes.
//! - [`counterexamples`]: the normalized-bump constructions and the
//!   quantitative divergence experiments built on them.
//!
//! Core numerics are generic over [`Real`] (`f32` / `f64`); the aliases below
//! fix the scalar to `f64`, which is what the experiments use.

// `!(x > 0)` is the NaN-rejecting form of a positivity guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counterexamples;
pub mod error;
pub mod fourier;
pub mod kernels;
pub mod means;
pub mod orlicz;
pub mod reduce;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision grid function.
pub type Grid = fourier::GridFunction2D<f64>;
/// Double-precision Fourier coefficients.
pub type Coeffs = fourier::SpectralCoeffs<f64>;
/// Double-precision kernel evaluation.
pub type KernelEval = kernels::KernelEvaluation<f64>;
/// Double-precision rectangle region.
pub type Region = kernels::RegionSpec<f64>;
/// Double-precision Young function.
pub type Young = orlicz::YoungFunction<f64>;
/// Double-precision simple function.
pub type Simple = orlicz::SimpleFunction<f64>;
