#![no_std]

//! # `fourierup-core`
//!
//! Fourier-domain 2x up-sampling for real-valued maps.
//!
//! The crate provides three spectral up-sampling rules (periodic padding,
//! area interpolation, corner interpolation), the amplitude/phase pipelines
//! built on top of them, and executable checkers for the identities those
//! rules satisfy. Everything here is pure computation over immutable grids;
//! IO, image codecs and the command-line front end live in `fourierup-cli`.
//!
//! Transform convention: the forward DFT is unnormalized and the inverse is
//! scaled by `1/(MN)`.

extern crate alloc;

mod error;
mod fft;

/// End-to-end amplitude/phase up-sampling pipelines and the channel mixer.
pub mod fourierup;
/// Dense complex and real grids.
pub mod grid;
/// Amplitude/phase form of a complex spectrum.
pub mod polar;
/// Spectral up-sampling rules and the spatial post-processing they need.
pub mod rules;
/// Reference DFT, the radix-2 fast path, and shift/modulation identities.
pub mod spectral;
/// Executable checkers producing [`verify::VerificationReport`]s.
pub mod verify;

pub use error::{Error, Result};
pub use grid::{ComplexGrid, RealGrid};
pub use num_complex::Complex64;
