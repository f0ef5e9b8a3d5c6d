//! The spectral curve `R(z) = z − (λ/N) Σ_k ϱ_k/(ε_k + z)` of the quartic model.
//!
//! `(ε_k, ϱ_k)` solve `R(ε_k) = e_k`, `ϱ_k R′(ε_k) = r_k`; they are found by Newton continuation
//! from `(e_k, r_k)` at `λ = 0`. The crate also locates ramification points, critical couplings
//! where two of them collide, preimages of `R`, local Galois involutions and the preimages of the
//! branch cuts.

mod critical;
mod error;
mod model;
mod numerics;
mod preimage;
mod scalar;
mod spectral;

pub use critical::{closest_pair, critical_lambda, family_curve};
pub use error::CurveError;
pub use model::{CurveFamilySpec, ModelSpec};
pub use numerics::Poly;
pub use preimage::{
    cut_geometry, galois_involution, preimages, trace_branch_cuts, winding_number, BranchCutTrace, CutGeometry,
};
pub use scalar::CurveScalar;
pub use spectral::{continue_curve, solve_curve, solve_on_circle, SpectralCurve};

pub use exact_core::Complex64;
