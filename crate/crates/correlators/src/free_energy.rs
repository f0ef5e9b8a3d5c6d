use crate::{d1_closed_forms, omega01, CorrelatorError};
use curve::SpectralCurve;
use exact_core::{rat, Complex64, LambdaSeries, Rational};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Residues of `ω₀,₁` at its poles: `(pole, t)` for `+ε_k`, then `−ε_k`, then `t_∞` separately.
///
/// `t_{ε_k} = −λ r_k/N`, `t_{−ε_k} = +λ r_k/N`, `t_∞ = 0`.
pub fn temperatures(curve: &SpectralCurve) -> (Vec<(Complex64, Complex64)>, Complex64) {
    let (_, r) = crate::spectral_data(curve);
    let cpl = curve.coupling();
    let mut out: Vec<(Complex64, Complex64)> =
        curve.epsilon.iter().zip(&r).map(|(e, rk)| (*e, -cpl * rk)).collect();
    out.extend(curve.epsilon.iter().zip(&r).map(|(e, rk)| (-e, cpl * rk)));
    (out, c(0.0))
}

/// Contour residue `(1/2πi)∮ f` on the circle `|z − a| = radius` with `nodes` trapezoid nodes.
pub fn contour_residue(
    f: impl Fn(Complex64) -> Result<Complex64, CorrelatorError>,
    a: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<Complex64, CorrelatorError> {
    let mut acc = c(0.0);
    for j in 0..nodes {
        let w = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64);
        acc += f(a + w).map_err(|err| CorrelatorError::Contour { node: j, detail: err.to_string() })? * w;
    }
    Ok(acc / nodes as f64)
}

/// Loop-annihilation primitive
/// `Φ(z) = z²/2 + (λ/N) Σ_k [ϱ_k e_k/(z + ε_k) + r_k log((z + ε_k)/(z − ε_k))]` (principal log).
pub fn loop_annihilation(curve: &SpectralCurve, z: Complex64) -> Result<Complex64, CorrelatorError> {
    let (e, r) = crate::spectral_data(curve);
    let cpl = curve.coupling();
    let mut acc = z * z / 2.0;
    for k in 0..curve.d() {
        let eps = curve.epsilon[k];
        if (z + eps).norm() == 0.0 || (z - eps).norm() == 0.0 {
            return Err(CorrelatorError::Pole { form: "Phi", detail: format!("z = ±epsilon_{k}") });
        }
        acc += cpl * (curve.rho[k] * e[k] / (z + eps) + r[k] * ((z + eps) / (z - eps)).ln());
    }
    Ok(acc)
}

/// Intermediate data of the planar free-energy construction at `d = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyParts {
    pub epsilon: f64,
    /// `L = λϱ/N`.
    pub coupling_rho: f64,
    pub t_eps: f64,
    pub t_minus_eps: f64,
    pub t_inf: f64,
    /// `μ_ε = −λ log R′(ε) − ε²/2 − Le/(2ε) − λ log(2ε)`.
    pub mu_eps: f64,
    /// `μ_{−ε} = eε − ε²/2 + λ log|2ε/L|`, with local variable `ξ_{−ε} = R(z)`.
    pub mu_minus_eps: f64,
    /// `Res_{q→−ε} ω₀,₁(q)·(−e R(q)) = Lε² − L²/4 − L⁴/(16ε⁴)`.
    pub residue_minus_eps: f64,
    /// The same residue in the form `(L/16ε⁴)(16ε⁶ − 4ε⁴L + L³)`.
    pub residue_minus_eps_printed: f64,
    pub t_mu_sum: f64,
    /// `λ[ε² − L²/(4ε²) + λ log(1 + 4ε²/L)]`.
    pub t_mu_printed: f64,
    /// `−(λ/2N) Σ r_k e_k²`.
    pub compensator: f64,
    /// `½[Res + Σ t μ] + R_comp`.
    pub assembly: f64,
    /// `F⁽⁰⁾` from the closed-form primitive.
    pub value: f64,
}

/// Planar free energy of a solved one-value curve with real coupling, with its intermediates.
pub fn free_energy_planar(curve: &SpectralCurve) -> Result<FreeEnergyParts, CorrelatorError> {
    if curve.d() != 1 || curve.lambda.im != 0.0 {
        return Err(CorrelatorError::NeedsOneValueCurve);
    }
    let lambda = curve.lambda.re;
    let (ev, rv) = crate::spectral_data(curve);
    let e = ev[0].re;
    let n = curve.n;
    let eps = curve.epsilon[0].re;
    let l = lambda * curve.rho[0].re / n;
    let closed = d1_closed_forms(e, n, lambda)?;
    let r1 = 1.0 + l / (4.0 * eps * eps);
    let t_eps = -lambda * rv[0].re / n;
    let t_minus_eps = lambda * rv[0].re / n;
    let (mu_eps, mu_minus_eps, t_mu_printed) = if lambda == 0.0 {
        (-eps * eps / 2.0, e * eps - eps * eps / 2.0, 0.0)
    } else {
        (
            -lambda * r1.ln() - eps * eps / 2.0 - l * e / (2.0 * eps) - lambda * (2.0 * eps).ln(),
            e * eps - eps * eps / 2.0 + lambda * (2.0 * eps / l).abs().ln(),
            lambda * (eps * eps - l * l / (4.0 * eps * eps) + lambda * (1.0 + 4.0 * eps * eps / l).abs().ln()),
        )
    };
    let e4 = eps.powi(4);
    let residue = l * eps * eps - l * l / 4.0 - l.powi(4) / (16.0 * e4);
    let printed = l / (16.0 * e4) * (16.0 * eps.powi(6) - 4.0 * e4 * l + l.powi(3));
    let t_mu_sum = t_eps * mu_eps + t_minus_eps * mu_minus_eps;
    let compensator = -lambda / (2.0 * n) * rv[0].re * e * e;
    Ok(FreeEnergyParts {
        epsilon: eps,
        coupling_rho: l,
        t_eps,
        t_minus_eps,
        t_inf: 0.0,
        mu_eps,
        mu_minus_eps,
        residue_minus_eps: residue,
        residue_minus_eps_printed: printed,
        t_mu_sum,
        t_mu_printed,
        compensator,
        assembly: 0.5 * (residue + t_mu_sum) + compensator,
        value: closed.free_energy,
    })
}

/// `Res_{q→−ε_0} ω₀,₁(q)·(−e R(q))` by contour integration.
pub fn residue_minus_eps_contour(curve: &SpectralCurve, radius: f64, nodes: usize) -> Result<Complex64, CorrelatorError> {
    let (ev, _) = crate::spectral_data(curve);
    let e = ev[0];
    contour_residue(|q| Ok(omega01(curve, q)? * (-e * curve.eval_r(q, 0)?[0])), -curve.epsilon[0], radius, nodes)
}

fn gf_parts(lambda: f64) -> Result<(f64, f64), CorrelatorError> {
    if lambda > 1.0 / 12.0 {
        return Err(CorrelatorError::Branch(format!("lambda = {lambda} > 1/12")));
    }
    let x = 1.0 + (1.0 - 12.0 * lambda).sqrt();
    Ok((1.0 / (6.0 * x * x) - 5.0 / (6.0 * x) + 0.375, x.ln()))
}

/// Non-rooted quadrangulation generating function
/// `1/(6(1+s)²) − 5/(6(1+s)) + 3/8 − ½log(1+s)` with `s = √(1 − 12λ)`.
pub fn quadrangulation_gf(lambda: f64) -> Result<f64, CorrelatorError> {
    let (a, lg) = gf_parts(lambda)?;
    Ok(a - 0.5 * lg)
}

/// The same expression with log coefficient `¼`.
pub fn quadrangulation_gf_printed(lambda: f64) -> Result<f64, CorrelatorError> {
    let (a, lg) = gf_parts(lambda)?;
    Ok(a - 0.25 * lg)
}

/// Exact series of a generating function written as `rational + log2_coefficient·log 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GfSeries {
    pub rational: LambdaSeries<Rational>,
    pub log2_coefficient: Rational,
}

fn gf_series(order: usize, log_coeff: Rational) -> Result<GfSeries, CorrelatorError> {
    let one = LambdaSeries::constant(rat(1, 1), order);
    let s = one.sub(&LambdaSeries::lambda(order).scale(&rat(12, 1))).sqrt_with_root(rat(1, 1))?;
    let x = one.add(&s);
    let xinv = one.div(&x)?;
    let rational = xinv
        .mul(&xinv)
        .scale(&rat(1, 6))
        .sub(&xinv.scale(&rat(5, 6)))
        .add(&LambdaSeries::constant(rat(3, 8), order))
        .sub(&x.scale(&rat(1, 2)).log_unit()?.scale(&log_coeff));
    Ok(GfSeries { rational, log2_coefficient: -log_coeff })
}

pub fn quadrangulation_gf_series(order: usize) -> Result<GfSeries, CorrelatorError> {
    gf_series(order, rat(1, 2))
}

pub fn quadrangulation_gf_printed_series(order: usize) -> Result<GfSeries, CorrelatorError> {
    gf_series(order, rat(1, 4))
}
