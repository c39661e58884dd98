//! Generalized polarization tensors (GPTs) of planar conductivity inclusions.
//!
//! The forward side computes contracted GPTs by Nyström discretization of the
//! Neumann-Poincaré boundary integral equation and, independently, from the
//! exterior conformal map through Grunsky-matrix factorizations. The inverse
//! side recovers the conductivity contrast and the conformal-map coefficients
//! from GPT data.

pub mod conformal;
pub mod error;
pub mod forward;
pub mod geometry;
pub mod inversion;
pub mod linalg;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
