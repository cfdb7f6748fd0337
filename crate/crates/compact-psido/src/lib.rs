//! Pseudo-differential calculus on compact Lie groups at finite spectral cutoff.
//!
//! The engine is generic over the real scalar type (see [`Real`]); `f64` is the
//! working precision and the aliases below fix it.

pub mod calculus;
pub mod error;
pub mod field;
pub mod fourier;
pub mod groups;
pub mod multipliers;
pub mod scalar;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use fourier::BandlimitedFunction;
pub use groups::{Backend, CompactGroup, GroupPoint, IrrepId, Label};
pub use scalar::{Real, C, CMat};
pub use symbols::{DifferenceFamily, SymbolField};
