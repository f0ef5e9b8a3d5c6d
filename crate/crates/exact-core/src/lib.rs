//! Exact and extended-precision arithmetic shared by the workspace.
//!
//! * [`Rational`]: arbitrary-precision rationals, always reduced.
//! * [`LambdaSeries`]: power series in the coupling truncated at a fixed order.
//! * [`MultiDual`]: truncated Taylor algebra in up to three nilpotent directions,
//!   giving exact mixed first partials such as the third mixed derivative in three variables.
//! * [`cauchy_coefficients`]: Taylor coefficients by trapezoidal contour quadrature.
//! * [`Spectrum`]: the exact spectral data (values, multiplicities, total size).

mod cauchy;
mod error;
mod multidual;
mod rational;
mod series;
mod spectrum;

pub use cauchy::{cauchy_coefficients, ContourSpec};
pub use error::{CauchyError, ExactError};
pub use multidual::{multidual_eval, MultiDual};
pub use num_complex::Complex64;
pub use rational::{parse_rational, rat, rational_from_f64, rational_to_string, to_f64, Rational};
pub use series::{series_arith, LambdaSeries, SeriesOp};
pub use spectrum::Spectrum;

use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field-like scalar accepted by the generic engines.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

/// Embeds a small integer into any [`Scalar`].
pub fn from_int<T: Scalar>(n: i64) -> T {
    let mut acc = T::zero();
    let one = T::one();
    let mut base = one.clone();
    let mut m = n.unsigned_abs();
    // binary expansion keeps this cheap for large n
    while m > 0 {
        if m & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        m >>= 1;
    }
    if n < 0 {
        -acc
    } else {
        acc
    }
}
