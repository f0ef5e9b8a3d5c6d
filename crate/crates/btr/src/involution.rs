use crate::{auto_radius, omega03_btr_parts, omega03_closed, pair_coefficient, stable_residue, BtrError, BtrOptions};
use curve::{preimages, SpectralCurve};
use exact_core::Complex64;

/// How the left-hand side `ω₀,₃` values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Omega03Route {
    Recursion,
    ClosedForm,
}

/// Both sides of the `q ↔ −q` identity for `ω₀,₃` as `dq`-coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct InvolutionReport {
    /// `W(u₁,u₂,q) − W(u₁,u₂,−q)`; the sign reflects `d(−q) = −dq`.
    pub lhs: Complex64,
    /// `R′(−q) Res_{z→q} f_{u₁}(z) f_{u₂}(z) / (R′(z)(R(−z) − R(−q))²)`.
    pub rhs: Complex64,
    /// `|lhs − rhs| / (1 + |lhs|)`.
    pub residual: f64,
}

fn w(curve: &SpectralCurve, route: Omega03Route, a: Complex64, b: Complex64, c: Complex64, opts: &BtrOptions) -> Result<Complex64, BtrError> {
    match route {
        Omega03Route::Recursion => Ok(omega03_btr_parts(curve, a, b, c, opts)?.total()),
        Omega03Route::ClosedForm => omega03_closed(curve, a, b, c),
    }
}

/// The `s = 2` residue side of the identity.
///
/// Both orderings of `{u₁} ⊎ {u₂}` contribute equally and cancel the `1/s`.
pub fn involution_rhs(curve: &SpectralCurve, u1: Complex64, u2: Complex64, q: Complex64, opts: &BtrOptions) -> Result<Complex64, BtrError> {
    let rq = curve.r(-q);
    let mut avoid = vec![u1, -u1, u2, -u2];
    avoid.extend(curve.beta.iter().copied());
    avoid.extend(curve.epsilon.iter().map(|e| -e));
    avoid.extend(preimages(curve, rq)?.into_iter().map(|p| -p));
    avoid.retain(|p| (p - q).norm() > 1e-12 * (1.0 + q.norm()));
    let radius = auto_radius(q, &avoid, 0.5)?;
    let integrand = |off: Complex64| -> Result<Complex64, BtrError> {
        let z = q + off;
        let d = curve.r(-z) - rq;
        Ok(pair_coefficient(&u1, &z) * pair_coefficient(&u2, &z) / (curve.r1(z) * d * d))
    };
    let res = stable_residue(integrand, q, radius, opts.node_count, opts.tol, opts.attempts)?;
    Ok(curve.r1(-q) * res)
}

/// Checks `ω₀,₃(u₁,u₂,q) + ω₀,₃(u₁,u₂,−q) = −Σ (1/2) Res_{z→q}(…)` with the left side from `route`.
pub fn involution_identity_with(
    curve: &SpectralCurve,
    u1: Complex64,
    u2: Complex64,
    q: Complex64,
    route: Omega03Route,
    opts: &BtrOptions,
) -> Result<InvolutionReport, BtrError> {
    let lhs = w(curve, route, u1, u2, q, opts)? - w(curve, route, u1, u2, -q, opts)?;
    let rhs = involution_rhs(curve, u1, u2, q, opts)?;
    let residual = (lhs - rhs).norm() / (1.0 + lhs.norm());
    Ok(InvolutionReport { lhs, rhs, residual })
}

/// The identity with `ω₀,₃` from the recursion and default quadrature.
pub fn involution_identity_check(curve: &SpectralCurve, u1: Complex64, u2: Complex64, q: Complex64) -> Result<InvolutionReport, BtrError> {
    involution_identity_with(curve, u1, u2, q, Omega03Route::Recursion, &BtrOptions::default())
}
