//! Identities between graph series and the exact forms: the boundary creation operator, the
//! genus-zero polynomial representations of Ω₂ and Ω₃, the planar n-point recursion and the
//! perturbative-versus-exact comparison harness.

mod compare;
mod creation;
mod error;
mod omega_poly;
mod recursion;

pub use compare::{perturbative_vs_exact, ComparisonReport, Target};
pub use creation::{creation_derivative, insertions, prop_t_check, Dual, PropTReport};
pub use error::IdentityError;
pub use omega_poly::{omega1_from_correlators, omega2_from_correlators, omega3_from_correlators, Correlators};
pub use recursion::npoint_recursion;
