use crate::BtrError;
use correlators::omega3_exact;
use curve::{closest_pair, critical_lambda, family_curve, CurveFamilySpec};
use exact_core::Complex64;

/// Two-sided scan of `Ω⁽⁰⁾₃(u,v,z)` around the critical coupling of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub lambda_crit: f64,
    pub deltas: Vec<f64>,
    pub below: Vec<Complex64>,
    pub above: Vec<Complex64>,
    /// `|Ω₃(λ_c+δ) − Ω₃(λ_c−δ)|` per `δ`.
    pub differences: Vec<f64>,
    /// Log-log slopes of `differences` between consecutive `δ`.
    pub slopes: Vec<f64>,
    /// Largest Vieta residual over all evaluated curves.
    pub vieta_max: f64,
    /// Real parts of the merged (closest) pair at `λ_c + δ`.
    pub merged_real_parts: Vec<[f64; 2]>,
    /// `−(ε₁+ε₂)/2` for two-value families.
    pub expected_real_part: Option<f64>,
}

impl ContinuityReport {
    /// Every slope within `tol` of 1.
    pub fn is_linear(&self, tol: f64) -> bool {
        !self.slopes.is_empty() && self.slopes.iter().all(|s| (s - 1.0).abs() <= tol)
    }

    /// Largest deviation of the merged real parts from the expected value.
    pub fn real_part_error(&self) -> Option<f64> {
        let e = self.expected_real_part?;
        Some(self.merged_real_parts.iter().flatten().map(|x| (x - e).abs()).fold(0.0, f64::max))
    }
}

pub const CONTINUITY_DELTAS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Evaluates `Ω⁽⁰⁾₃` at `λ_c ± δ` for `δ ∈ {10⁻², 10⁻³, 10⁻⁴}`.
pub fn continuity_across_critical(
    family: &CurveFamilySpec,
    u: Complex64,
    v: Complex64,
    z: Complex64,
) -> Result<ContinuityReport, BtrError> {
    let lambda_crit = critical_lambda(family, 400)?;
    let mut report = ContinuityReport {
        lambda_crit,
        deltas: CONTINUITY_DELTAS.to_vec(),
        below: Vec::new(),
        above: Vec::new(),
        differences: Vec::new(),
        slopes: Vec::new(),
        vieta_max: 0.0,
        merged_real_parts: Vec::new(),
        expected_real_part: None,
    };
    for &d in &CONTINUITY_DELTAS {
        let lo = family_curve(family, lambda_crit - d)?;
        let hi = family_curve(family, lambda_crit + d)?;
        report.vieta_max = report.vieta_max.max(lo.vieta_residual()).max(hi.vieta_residual());
        let a = omega3_exact(&lo, u, v, z)?;
        let b = omega3_exact(&hi, u, v, z)?;
        report.below.push(a);
        report.above.push(b);
        report.differences.push((b - a).norm());
        let (i, j, _, _) = closest_pair(&hi.beta);
        report.merged_real_parts.push([hi.beta[i].re, hi.beta[j].re]);
        if hi.d() == 2 {
            report.expected_real_part = Some(-(hi.epsilon[0].re + hi.epsilon[1].re) / 2.0);
        }
    }
    report.slopes = report
        .differences
        .windows(2)
        .zip(report.deltas.windows(2))
        .map(|(df, dl)| (df[0] / df[1]).ln() / (dl[0] / dl[1]).ln())
        .collect();
    Ok(report)
}
