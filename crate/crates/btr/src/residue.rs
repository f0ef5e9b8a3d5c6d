use crate::BtrError;
use curve::CurveScalar;
use exact_core::{Complex64, ContourSpec, MultiDual};
use rayon::prelude::*;

/// Values a residue can be taken of: complex numbers and Taylor jets of them.
pub trait ResidueValue: CurveScalar {
    /// Largest modulus over all components.
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl ResidueValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl ResidueValue for MultiDual<Complex64> {
    fn magnitude(&self) -> f64 {
        self.components().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
    fn is_finite_value(&self) -> bool {
        self.components().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// `(1/2πi)∮ g` over the circle of `spec`, with `g` given through the offset `w = q − center`:
/// the trapezoidal mean of `f(w)·w`. Nodes are evaluated in parallel and summed in node order.
///
/// For integrands analytic in an annulus `r < |w| < ρ` around the circle the error decays like
/// `(radius/ρ)^node_count`.
pub fn residue_offsets<T, F>(f: F, spec: &ContourSpec) -> Result<T, BtrError>
where
    T: ResidueValue,
    F: Fn(Complex64) -> Result<T, BtrError> + Sync,
{
    spec.validate().map_err(BtrError::BadContour)?;
    let values: Vec<Result<T, BtrError>> = (0..spec.node_count)
        .into_par_iter()
        .map(|j| {
            let w = spec.node(j) - spec.center;
            let val = f(w)? * T::lift(w);
            if val.is_finite_value() {
                Ok(val)
            } else {
                Err(BtrError::Node { node: j, point: spec.node(j) })
            }
        })
        .collect();
    let mut acc = T::zero();
    for v in values {
        acc = acc + v?;
    }
    Ok(acc / T::lift(Complex64::new(spec.node_count as f64, 0.0)))
}

/// `Res_{z→center} f(z) dz` by the trapezoidal rule on the circle of `spec`.
pub fn residue<F>(f: F, spec: &ContourSpec) -> Result<Complex64, BtrError>
where
    F: Fn(Complex64) -> Result<Complex64, BtrError> + Sync,
{
    let c = spec.center;
    residue_offsets(|w| f(c + w), spec)
}

/// `fraction` times the distance from `center` to the nearest point of `avoid`.
pub fn auto_radius(center: Complex64, avoid: &[Complex64], fraction: f64) -> Result<f64, BtrError> {
    let d = avoid.iter().map(|a| (a - center).norm()).fold(f64::INFINITY, f64::min);
    if d.is_finite() && d > 0.0 {
        Ok(fraction * d)
    } else if d.is_infinite() {
        Ok(fraction)
    } else {
        Err(BtrError::BadContour(format!("singularity on the residue center {center}")))
    }
}

/// Residue with shrink-and-retry: the value at `radius` must agree with the value at `0.75·radius`
/// to `tol` (relative), otherwise the radius is halved, at most `attempts` times.
pub fn stable_residue<T, F>(
    f: F,
    center: Complex64,
    radius: f64,
    node_count: usize,
    tol: f64,
    attempts: usize,
) -> Result<T, BtrError>
where
    T: ResidueValue,
    F: Fn(Complex64) -> Result<T, BtrError> + Sync,
{
    let mut r = radius;
    for _ in 0..=attempts {
        let a = ContourSpec::new(center, r, node_count).map_err(BtrError::BadContour)?;
        let b = ContourSpec::new(center, 0.75 * r, node_count).map_err(BtrError::BadContour)?;
        if let (Ok(x), Ok(y)) = (residue_offsets(&f, &a), residue_offsets(&f, &b)) {
            let gap = (x.clone() - y).magnitude();
            if gap <= tol * (1.0 + x.magnitude()) {
                return Ok(x);
            }
        }
        r *= 0.5;
    }
    Err(BtrError::NoStableRadius { center, attempts })
}
