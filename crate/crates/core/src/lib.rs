//! Dynamics of the two Bragg side-modes (±q) of a Bose condensate coupled to a
//! single probe light mode.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] turns laboratory condensate parameters into the dimensionless
//!   coupling, detuning and Bogoliubov coefficients.
//! * [`triad`] builds the 3×3 Heisenberg matrix, its spectrum, the instability
//!   threshold and the propagator `S(τ) = exp(iMτ)`.
//! * [`kernel`] is a small normal-ordering engine for ladder-operator products
//!   evaluated on product initial states.
//! * [`observables`] combines the above into occupations, two-mode
//!   number-difference parameters and the probe Mandel Q.
//! * [`oracle`] is an independent truncated Fock-space integrator used to
//!   cross-check the moment pipeline.
//! * [`cli`] holds presets, configuration files and the command implementations
//!   behind the `bragg` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod kernel;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod probe;
pub mod triad;

pub use error::{Error, Result};
pub use num_complex::Complex64;
