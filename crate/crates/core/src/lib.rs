//! frame-forge: exact Fourier-side construction and verification of dyadic
//! Parseval frame MRA wavelets.
//!
//! Everything is computed in the frequency domain on piecewise-constant
//! functions with dyadic-rational breakpoints, so frame identities are
//! verified exactly rather than numerically sampled.

pub mod dyadic;
pub mod error;
pub mod catalog;
pub mod filterbank;
pub mod json;
pub mod naimark;
pub mod scaling;
pub mod stepfn;
pub mod unimodular;
pub mod wavelet;

pub use dyadic::{Dyadic, Interval, LineSet, PeriodicSet, DEFAULT_WINDOW_EXP};
pub use error::{FrameError, Result};
pub use stepfn::{mul_periodic, BracketFn, Cval, PeriodicStepFunction, Piece, StepFunction};
