use crate::{omega3_coincident, CorrelatorError};
use curve::{solve_on_circle, ModelSpec};
use exact_core::{cauchy_coefficients, rat, Complex64, ContourSpec, LambdaSeries, Rational, Spectrum};

/// One-value (`d = 1`) closed forms at a real coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct D1ClosedForms {
    pub epsilon: f64,
    /// The second preimage of `e` under `R`.
    pub epsilon_hat: f64,
    pub rho: f64,
    pub two_point: f64,
    pub four_point: f64,
    pub two_two_point: f64,
    pub free_energy: f64,
}

/// `d = 1` planar functions with all arguments at the single value `e`.
///
/// With `S = √(4e² + 12λ)`: `ε = (4e + S)/6`, `ε̂ = −(2e + 2S)/6`,
/// `G(ε,ε) = −2ε̂/(ε − ε̂)²`, `G(ε,ε,ε,ε) = (8e + 12S)/(2e + S)³ − 2G²`,
/// `G(ε,ε|ε,ε) = 6λ²/(e + S/2)⁶` and the free energy `F = −½log(2e) + f(S/2e)` with
/// `f(s) = 1/(6(1+s)²) − 5/(6(1+s)) + 3/8 − ½log((1+s)/2)`.
pub fn d1_closed_forms(e: f64, n: f64, lambda: f64) -> Result<D1ClosedForms, CorrelatorError> {
    let disc = 4.0 * e * e + 12.0 * lambda;
    if disc < 0.0 {
        return Err(CorrelatorError::OutsideRealPhase(disc));
    }
    if !(e > 0.0 && n > 0.0) {
        return Err(CorrelatorError::Branch("need e > 0 and N > 0".into()));
    }
    let s = disc.sqrt();
    let eps = (4.0 * e + s) / 6.0;
    let eps_hat = -(2.0 * e + 2.0 * s) / 6.0;
    let gap = e + s / 2.0;
    let g = -2.0 * eps_hat / (gap * gap);
    let four = (8.0 * e + 12.0 * s) / (2.0 * e + s).powi(3) - 2.0 * g * g;
    let two_two = 6.0 * lambda * lambda / gap.powi(6);
    let x = 1.0 + s / (2.0 * e);
    let free_energy =
        -0.5 * (2.0 * e).ln() + 1.0 / (6.0 * x * x) - 5.0 / (6.0 * x) + 0.375 - 0.5 * (x / 2.0).ln();
    let rho = if lambda == 0.0 { n } else { n * (2.0 * e * s - 4.0 * e * e + 12.0 * lambda) / (18.0 * lambda) };
    Ok(D1ClosedForms { epsilon: eps, epsilon_hat: eps_hat, rho, two_point: g, four_point: four, two_two_point: two_two, free_energy })
}

/// Exact λ-series of the `d = 1` closed forms at a rational value `e`.
///
/// `free_energy` omits the constant `−½log(2e)`; all other entries are complete.
#[derive(Debug, Clone, PartialEq)]
pub struct D1Series {
    pub epsilon: LambdaSeries<Rational>,
    /// `λϱ/N`.
    pub coupling_rho: LambdaSeries<Rational>,
    pub two_point: LambdaSeries<Rational>,
    pub four_point: LambdaSeries<Rational>,
    pub two_two: LambdaSeries<Rational>,
    /// Regular part of `Ω₂` at the coincident point (Schwarzian term).
    pub omega2_tr: LambdaSeries<Rational>,
    /// `1/(R′(ε)²(2ε)²)`.
    pub omega2_btr: LambdaSeries<Rational>,
    pub omega2: LambdaSeries<Rational>,
    pub free_energy: LambdaSeries<Rational>,
}

fn k(n: i64, order: usize) -> LambdaSeries<Rational> {
    LambdaSeries::constant(rat(n, 1), order)
}

pub fn d1_series(e: &Rational, order: usize) -> Result<D1Series, CorrelatorError> {
    let o = order;
    let c = |x: &Rational| LambdaSeries::constant(x.clone(), o);
    let lam = LambdaSeries::<Rational>::lambda(o);
    let e_s = c(e);
    let two_e = e * rat(2, 1);
    let disc = c(&(e * e * rat(4, 1))).add(&lam.scale(&rat(12, 1)));
    let s = disc.sqrt_with_root(two_e.clone())?;
    let eps = e_s.scale(&rat(4, 1)).add(&s).scale(&rat(1, 6));
    let eps_hat = e_s.scale(&rat(2, 1)).add(&s.scale(&rat(2, 1))).scale(&rat(-1, 6));
    let gap = e_s.add(&s.scale(&rat(1, 2)));
    let gap2 = gap.mul(&gap);
    let g = eps_hat.scale(&rat(-2, 1)).div(&gap2)?;
    let two_e_s = c(&two_e).add(&s);
    let four = e_s
        .scale(&rat(8, 1))
        .add(&s.scale(&rat(12, 1)))
        .div(&two_e_s.powi(3))?
        .sub(&g.mul(&g).scale(&rat(2, 1)));
    let two_two = lam.mul(&lam).scale(&rat(6, 1)).div(&gap2.powi(3))?;
    // L = λϱ/N = (2eS − 4e² + 12λ)/18
    let l = s
        .scale(&two_e)
        .sub(&c(&(e * e * rat(4, 1))))
        .add(&lam.scale(&rat(12, 1)))
        .scale(&rat(1, 18));
    let w = eps.scale(&rat(2, 1));
    let w2 = w.mul(&w);
    let r1 = k(1, o).add(&l.div(&w2)?);
    let r2 = l.scale(&rat(-2, 1)).div(&w2.mul(&w))?;
    let r3 = l.scale(&rat(6, 1)).div(&w2.mul(&w2))?;
    let r1sq = r1.mul(&r1);
    let a = r2.div(&r1)?;
    let schwarz = r3.div(&r1)?.sub(&a.mul(&a).scale(&rat(3, 2)));
    let tr = schwarz.scale(&rat(-1, 6)).div(&r1sq)?;
    let btr = k(1, o).div(&r1sq.mul(&w2))?;
    let omega2 = tr.add(&btr);
    let x = k(1, o).add(&s.scale(&(rat(1, 1) / &two_e)));
    let xinv = k(1, o).div(&x)?;
    let free_energy = xinv
        .mul(&xinv)
        .scale(&rat(1, 6))
        .sub(&xinv.scale(&rat(5, 6)))
        .add(&c(&rat(3, 8)))
        .sub(&x.scale(&rat(1, 2)).log_unit()?.scale(&rat(1, 2)));
    Ok(D1Series { epsilon: eps, coupling_rho: l, two_point: g, four_point: four, two_two, omega2_tr: tr, omega2_btr: btr, omega2, free_energy })
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(rat(1, 1), |a, k| a * rat(k, 1))
}

fn pow(x: &Rational, n: i64) -> Rational {
    let mut p = rat(1, 1);
    for _ in 0..n.unsigned_abs() {
        p *= x;
    }
    if n < 0 {
        rat(1, 1) / p
    } else {
        p
    }
}

/// Factorial-formula series for `(G(ε,ε|ε,ε), G(ε,ε,ε,ε))` at `d = 1`, as λ-series:
/// `36 Σ_m 3^m (5+2m)!/(m!(6+m)!) (−λ)^{m+2}/(2e)^{2m+6}` and
/// `60 Σ_m 3^{m−1} (3+2m)!/(m!(5+m)!) (−λ)^{m+1}/(2e)^{2m+4}`.
pub fn d1_fully_simple_series(order: usize, e: &Rational) -> (LambdaSeries<Rational>, LambdaSeries<Rational>) {
    let two_e = e * rat(2, 1);
    let sign = |p: usize| if p % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
    let two_two = LambdaSeries::from_fn(order, |p| {
        if p < 2 {
            return rat(0, 1);
        }
        let m = (p - 2) as u32;
        rat(36, 1) * pow(&rat(3, 1), m as i64) * factorial(5 + 2 * m) / (factorial(m) * factorial(6 + m))
            * sign(p)
            / pow(&two_e, 2 * m as i64 + 6)
    });
    let four = LambdaSeries::from_fn(order, |p| {
        if p < 1 {
            return rat(0, 1);
        }
        let m = (p - 1) as u32;
        rat(60, 1) * pow(&rat(3, 1), m as i64 - 1) * factorial(3 + 2 * m) / (factorial(m) * factorial(5 + m))
            * sign(p)
            / pow(&two_e, 2 * m as i64 + 4)
    });
    (two_two, four)
}

/// Count columns at `d = 1`, `e = 1/2` from the exact series (signs of `(−λ)^v` removed).
#[derive(Debug, Clone, PartialEq)]
pub struct D1CountColumns {
    pub omega1: Vec<Rational>,
    pub omega2: Vec<Rational>,
    pub omega2_tr: Vec<Rational>,
    pub omega2_btr: Vec<Rational>,
}

pub fn d1_count_columns(order: usize) -> Result<D1CountColumns, CorrelatorError> {
    let s = d1_series(&rat(1, 2), order)?;
    let flip = |x: &LambdaSeries<Rational>| x.rescale_lambda(&rat(-1, 1)).into_coeffs();
    Ok(D1CountColumns {
        omega1: flip(&s.two_point),
        omega2: flip(&s.omega2),
        omega2_tr: flip(&s.omega2_tr),
        omega2_btr: flip(&s.omega2_btr),
    })
}

/// `Ω₃(ε,ε,ε)` count column at `d = 1`, `e = 1/2`, by contour extraction in λ.
///
/// Curves are solved on `|λ| = radius` and the Taylor coefficients are returned with the sign of
/// `(−λ)^v` removed (real parts).
pub fn d1_omega3_counts(order: usize, radius: f64, nodes: usize) -> Result<Vec<f64>, CorrelatorError> {
    let spectrum = Spectrum::new(vec![rat(1, 2)], vec![rat(1, 1)])?;
    let model = ModelSpec::new(spectrum, Complex64::new(0.0, 0.0))?;
    let curves = solve_on_circle(&model, radius, nodes)?;
    let spec = ContourSpec::new(Complex64::new(0.0, 0.0), radius, nodes)
        .map_err(|d| CorrelatorError::Contour { node: 0, detail: d })?;
    let coeffs = cauchy_coefficients(|j, _| omega3_coincident(&curves[j], curves[j].epsilon[0]), &spec, order)
        .map_err(|err| CorrelatorError::Contour { node: 0, detail: err.to_string() })?;
    Ok(coeffs.iter().enumerate().map(|(v, c)| if v % 2 == 0 { c.re } else { -c.re }).collect())
}
