//! Exact analysis of germs of toric Fano fibrations.
//!
//! All arithmetic is over arbitrary-precision rationals; no floating point is
//! used anywhere in the library.

pub mod cli;
pub mod complement;
pub mod error;
pub mod exact_lattice;
pub mod oracle;
pub mod par;
pub mod polyconv;
pub mod reduction;
pub mod serial;
pub mod toric_germ;

pub use error::{Error, Result};
