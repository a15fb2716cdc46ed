//! Siegel functions, explicit Shimura reciprocity and ray class invariants
//! of imaginary quadratic fields, evaluated at arbitrary precision.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: MPFR-backed complex numbers and truncation control.
//! * [`matrix`]: integer 2×2 matrices, congruence arithmetic, the η²
//!   multiplier and fundamental-domain reduction.
//! * [`qseries`]: η, Eisenstein series, Δ, j, Siegel functions, ℘ and the
//!   normalized coordinates `(u, v, x, y)`.
//! * [`classfield`]: field data, reduced forms, β matrices, ray class degrees.
//! * [`reciprocity`]: the group `W_{N,θ}` and Galois conjugates of singular values.
//! * [`verify`]: numerical checks, minimal polynomials and class polynomials.
//! * [`cli`]: the `rayclass` command-line front end.

pub mod classfield;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod numerics;
pub mod qseries;
pub mod reciprocity;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{ComplexValue, PrecisionContext};

/// Version string embedded in every JSON payload.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
