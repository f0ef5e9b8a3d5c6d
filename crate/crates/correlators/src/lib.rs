//! Closed-form planar correlators on a solved spectral curve, the one-value closed forms and their
//! exact series, and the planar free energy.

mod d1;
mod error;
mod free_energy;
mod omega;

pub use d1::*;
pub use error::CorrelatorError;
pub use free_energy::*;
pub use omega::*;
