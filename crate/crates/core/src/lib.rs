//! Sampling theory for de Branges spaces generated by perturbed Bessel
//! operators `-d^2/dx^2 + (nu^2 - 1/4)/x^2 + q(x)` on `(0, s]`.
//!
//! The crate builds the regular solution `xi(z, x)`, the spectra of the
//! self-adjoint extensions, the reproducing kernels, and the three
//! reconstruction formulas (exact sampling, oversampling with noisy samples,
//! and aliasing), together with a closed-form Paley-Wiener baseline.

pub mod cli;
pub mod error;
pub mod fit;
pub mod identities;
pub mod kernel;
pub mod paleywiener;
pub mod perturbed;
pub mod profile;
pub mod quadrature;
pub mod sampling;
pub mod setup;
pub mod specfun;
pub mod spectrum;
pub mod unperturbed;

pub use error::{Error, Result};
pub use num_complex::Complex64;
