//! Exact pointer states for von Neumann projector measurements.
//!
//! An impulsive von Neumann measurement couples a projector observable of a
//! finite-dimensional system to the momentum of a continuous pointer through
//! `exp(-i γ Â p̂ / ħ)`. Because a projector satisfies `Â² = Â`, that
//! exponential collapses to the exact finite expansion `1 - Â + Â Ŝ`, where
//! `Ŝ` translates the pointer by the interaction strength `γ`. This crate
//! implements that closed form for preselected (PS) and pre/postselected
//! (PPS) ensembles and everything needed to check it:
//!
//! - [`system`]: finite-dimensional states, projectors, weak values, and
//!   the Pancharatnam phase of a postselection overlap.
//! - [`pointer`]: pointer wavefunctions on a uniform grid, the translation
//!   operator (index roll or spectral phase), and position/momentum means.
//! - [`measurement`]: the closed-form PS/PPS engine: entangled post-
//!   measurement states, pointer densities and their interference split,
//!   and postselection.
//! - [`oracle`]: a brute-force evolution that exponentiates the coupling
//!   momentum-sample by momentum-sample and never uses idempotency, so the
//!   closed form can be verified against it.
//! - [`analysis`]: interference mass, momentum-shift, and global-phase
//!   diagnostics.
//!
//! The crate is `no_std` (with `alloc`) and fully deterministic: every
//! operation is a pure function over immutable values.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod fft;
pub mod linalg;
pub mod measurement;
pub mod oracle;
pub mod pointer;
pub mod system;

pub use error::{Error, Result};
pub use num_complex::Complex64;
