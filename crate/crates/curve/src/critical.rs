use crate::{solve_curve, CurveError, CurveFamilySpec, ModelSpec, SpectralCurve};
use exact_core::Complex64;

/// Ramification points of a family member at real coupling `lambda`.
pub fn family_curve(family: &CurveFamilySpec, lambda: f64) -> Result<SpectralCurve, CurveError> {
    let lam = Complex64::new(lambda, 0.0);
    match family {
        CurveFamilySpec::FixedSpectrum { spectrum, .. } => solve_curve(&ModelSpec::new(spectrum.clone(), lam)?),
        CurveFamilySpec::FixedCurve { epsilon, rho, n, .. } => SpectralCurve::from_parameters(
            epsilon.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            rho.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            *n,
            lam,
        ),
    }
}

/// The closest pair of ramification points and its shape indicator `|ΔRe| − |ΔIm|`.
///
/// The indicator changes sign exactly when the closest pair passes through a collision: a
/// conjugate pair turning real, or two roots with equal imaginary parts turning into two roots
/// with equal real parts.
pub fn closest_pair(beta: &[Complex64]) -> (usize, usize, f64, f64) {
    let mut best = (0, 0, f64::INFINITY, 0.0);
    for i in 0..beta.len() {
        for j in i + 1..beta.len() {
            let dz = beta[i] - beta[j];
            if dz.norm() < best.2 {
                best = (i, j, dz.norm(), dz.re.abs() - dz.im.abs());
            }
        }
    }
    best
}

/// Smallest λ in the family range where two ramification points collide.
///
/// A grid scan of the closest-pair indicator is refined by bisection to `1e−12` in λ. A sign
/// change only counts when the pair distance at the refined point is small compared with the
/// curve scale, which rejects sign changes caused by the closest pair switching partners.
pub fn critical_lambda(family: &CurveFamilySpec, grid: usize) -> Result<f64, CurveError> {
    let (lo, hi) = family.range();
    let indicator = |l: f64| -> Result<(f64, f64, f64), CurveError> {
        let curve = family_curve(family, l)?;
        let (_, _, dist, s) = closest_pair(&curve.beta);
        let scale = curve.epsilon.iter().map(|e| e.norm()).fold(1e-300, f64::max);
        Ok((s, dist, scale))
    };
    let grid = grid.max(2);
    let mut prev_l = lo;
    let mut prev = indicator(lo)?;
    for j in 1..=grid {
        let l = lo + (hi - lo) * j as f64 / grid as f64;
        let cur = indicator(l)?;
        if prev.0 == 0.0 && prev.1 <= 1e-6 * prev.2 {
            return Ok(prev_l);
        }
        if prev.0.signum() != cur.0.signum() {
            let (mut a, mut b) = (prev_l, l);
            let sa = prev.0.signum();
            while b - a > 1e-12 * (1.0 + a.abs()) {
                let m = 0.5 * (a + b);
                if indicator(m)?.0.signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            let m = 0.5 * (a + b);
            let (_, dist, scale) = indicator(m)?;
            if dist <= 1e-4 * scale {
                return Ok(m);
            }
        }
        prev_l = l;
        prev = cur;
    }
    Err(CurveError::NoCritical { lo, hi })
}
