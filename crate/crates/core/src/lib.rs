//! Scattering and bound states of a PT-symmetric double heterojunction with
//! position-dependent effective mass, solved exactly through Gauss
//! hypergeometric functions and cross-checked by direct integration.

// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod error;
mod linalg;
pub mod model;
pub mod oracle;
pub mod roots;
pub mod selftest;
pub mod specfun;

pub use analytic::{BoundState, InnerCoeffs, Method, ScatteringResult, Side, WaveSample};
pub use error::{Error, Result};
pub use model::{DeviceParams, SpectralParams};
