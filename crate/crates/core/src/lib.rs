//! Numerical laboratory for lattice Green's functions, lace-expansion
//! diagrams, self-avoiding walk series and percolation two-point functions.

pub mod bootstrap;
pub mod diagrams;
pub mod error;
pub mod fft;
pub mod frac;
pub mod green;
pub mod lattice;
pub mod perc;
pub mod quad;
pub mod saw;
pub mod step;
pub mod sum;

pub use error::{Error, Result};
pub use lattice::{FourierGrid, LatticeField, LatticePoint, WeightMode};
pub use step::StepDistribution;

/// Bumped whenever a change alters cached numerical results.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+cache1");
