//! Genus-zero blobbed topological recursion on the quartic spectral curve.
//!
//! * [`residue`]: trapezoidal contour residues with automatic radius selection.
//! * [`kernel_ki`], [`kernel_ktilde`]: the polar and antidiagonal recursion kernels.
//! * [`omega03_btr`]: `ω₀,₃` assembled from residues at ramification points and at `q = −u_k`.
//! * [`involution_identity_check`]: the `q ↔ −q` identity for `ω₀,₃`.
//! * [`continuity_across_critical`]: two-sided scan of `Ω⁽⁰⁾₃` around a collision of ramification points.

mod continuity;
mod error;
mod involution;
mod kernels;
mod omega03;
mod residue;

pub use continuity::*;
pub use error::*;
pub use involution::*;
pub use kernels::*;
pub use omega03::*;
pub use residue::*;
