use crate::{CauchyError, Complex64};
use std::f64::consts::PI;

/// Circle used for trapezoidal contour quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    /// Power of two, at least 8.
    pub node_count: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, node_count: usize) -> Result<Self, String> {
        let spec = ContourSpec { center, radius, node_count };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(format!("radius must be positive, got {}", self.radius));
        }
        if self.node_count < 8 || !self.node_count.is_power_of_two() {
            return Err(format!("node_count must be a power of two >= 8, got {}", self.node_count));
        }
        Ok(())
    }

    /// The j-th node, counter-clockwise from angle 0.
    pub fn node(&self, j: usize) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, 2.0 * PI * j as f64 / self.node_count as f64)
    }

    pub fn nodes(&self) -> Vec<Complex64> {
        (0..self.node_count).map(|j| self.node(j)).collect()
    }

    /// Round-off bound `eps·max|f|/radius^v` for the coefficient of order `v`.
    pub fn error_bound(&self, max_abs_f: f64, v: usize) -> f64 {
        f64::EPSILON * max_abs_f / self.radius.powi(v as i32)
    }
}

/// Taylor coefficients about `spec.center`, `c_v ≈ (1/2πi)∮ f(λ)/(λ−c)^{v+1} dλ`, for `v ≤ max_order`.
///
/// `f` is called once per node, in counter-clockwise order, so a caller may continue a
/// solution from node to node. The node index is passed alongside the point.
pub fn cauchy_coefficients<E, F>(
    mut f: F,
    spec: &ContourSpec,
    max_order: usize,
) -> Result<Vec<Complex64>, CauchyError<E>>
where
    E: std::error::Error + 'static,
    F: FnMut(usize, Complex64) -> Result<Complex64, E>,
{
    spec.validate().map_err(CauchyError::BadContour)?;
    let m = spec.node_count;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); max_order + 1];
    for j in 0..m {
        let x = spec.node(j);
        let val = f(j, x).map_err(|source| CauchyError::Node { node: j, source })?;
        if !val.re.is_finite() || !val.im.is_finite() {
            return Err(CauchyError::NonFinite { node: j });
        }
        let w = x - spec.center;
        let winv = Complex64::new(1.0, 0.0) / w;
        let mut p = Complex64::new(1.0, 0.0);
        for c in coeffs.iter_mut() {
            *c += val * p;
            p *= winv;
        }
    }
    for c in coeffs.iter_mut() {
        *c /= m as f64;
    }
    Ok(coeffs)
}
