use crate::CorrelatorError;
use curve::{CurveScalar, SpectralCurve};
use num_traits::One;
use exact_core::{Complex64, MultiDual};

type Jet = MultiDual<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pole(form: &'static str, detail: String) -> CorrelatorError {
    CorrelatorError::Pole { form, detail }
}

/// `|a| ≤ tol·(1 + |b|)` with the workspace-wide singularity tolerance.
fn near(a: Complex64, scale: Complex64) -> bool {
    a.norm() <= 1e-13 * (1.0 + scale.norm())
}

/// Spectral values `e_k = R(ε_k)` and multiplicities `r_k = ϱ_k R′(ε_k)` recovered from the curve.
pub fn spectral_data(curve: &SpectralCurve) -> (Vec<Complex64>, Vec<Complex64>) {
    let e = curve.epsilon.iter().map(|&x| curve.r(x)).collect();
    let r = curve.epsilon.iter().zip(&curve.rho).map(|(&x, rho)| rho * curve.r1(x)).collect();
    (e, r)
}

/// `R⁽ᵏ⁾(z)` for `k = 0..=4`.
fn r_derivatives(curve: &SpectralCurve, z: Complex64) -> [Complex64; 5] {
    let cpl = curve.coupling();
    let mut out = [z, c(1.0), c(0.0), c(0.0), c(0.0)];
    for (e, r) in curve.epsilon.iter().zip(&curve.rho) {
        let w = 1.0 / (e + z);
        let t = cpl * r * w;
        out[0] -= t;
        out[1] += t * w;
        out[2] -= 2.0 * t * w * w;
        out[3] += 6.0 * t * w * w * w;
        out[4] -= 24.0 * t * w * w * w * w;
    }
    out
}

/// `ω₀,₁(z) = −R(−z) R′(z)` (coefficient of `dz`).
pub fn omega01(curve: &SpectralCurve, z: Complex64) -> Result<Complex64, CorrelatorError> {
    let [rm, _, _, _] = curve.eval_r(-z, 0)?;
    let [_, r1, _, _] = curve.eval_r(z, 1)?;
    Ok(-rm * r1)
}

/// `Ω⁽⁰⁾₁(z) = −(R(−z) + R(z))/λ − (1/N) Σ_k r_k/(R(ε_k) − R(z))`.
///
/// The first part is expanded as `(1/N) Σ_k ϱ_k (1/(ε_k+z) + 1/(ε_k−z))`, which is regular at
/// `λ = 0`. Its pole at `z = ε_k` cancels against the `k`-th sum term; within `1e−5` of `ε_k` that
/// pair is replaced by its Taylor expansion `−r_k R″/(2R′²) + O(z−ε_k)` to third order.
pub fn omega1_exact(curve: &SpectralCurve, z: Complex64) -> Result<Complex64, CorrelatorError> {
    let (e, r) = spectral_data(curve);
    let [rz, _, _, _] = curve.eval_r(z, 0)?;
    let mut acc = c(0.0);
    for k in 0..curve.d() {
        let (eps, rho) = (curve.epsilon[k], curve.rho[k]);
        if near(eps + z, eps) {
            return Err(pole("Omega1", format!("z = -epsilon_{k}")));
        }
        acc += rho / (eps + z);
        let h = z - eps;
        if h.norm() <= 1e-5 * (1.0 + eps.norm()) {
            let d = r_derivatives(curve, eps);
            if near(d[1], c(1.0)) {
                return Err(CorrelatorError::AtRamification);
            }
            let a = d[2] / (2.0 * d[1]);
            let b = d[3] / (6.0 * d[1]);
            let cc = d[4] / (24.0 * d[1]);
            acc += rho * (-a + (a * a - b) * h + (2.0 * a * b - a * a * a - cc) * h * h);
        } else {
            acc += rho / (eps - z) - r[k] / (e[k] - rz);
        }
    }
    Ok(acc / curve.n)
}

/// `Ω⁽⁰⁾₂(u,z) = (1/(u−z)² + 1/(u+z)²) / (R′(u) R′(z))`.
pub fn omega2_exact(curve: &SpectralCurve, u: Complex64, z: Complex64) -> Result<Complex64, CorrelatorError> {
    if near(u - z, u) || near(u + z, u) {
        return Err(pole("Omega2", format!("u = ±z at u={u}, z={z}")));
    }
    let (ru, rz) = (curve.eval_r(u, 1)?[1], curve.eval_r(z, 1)?[1]);
    Ok((1.0 / ((u - z) * (u - z)) + 1.0 / ((u + z) * (u + z))) / (ru * rz))
}

/// Confluent values at a single point `p`: the regular part of
/// `1/(R′(u)R′(z)(u−z)²) − 1/(R(u)−R(z))²` on the diagonal, and `1/(R′(p)² (2p)²)`.
///
/// The first is `−S(R)(p)/(6R′(p)²)` with the Schwarzian `S(R) = R‴/R′ − (3/2)(R″/R′)²`.
pub fn omega2_confluent_split(curve: &SpectralCurve, p: Complex64) -> Result<(Complex64, Complex64), CorrelatorError> {
    let [_, r1, r2, r3] = curve.eval_r(p, 3)?;
    if near(r1, c(1.0)) {
        return Err(CorrelatorError::AtRamification);
    }
    if near(p, c(1.0)) {
        return Err(pole("Omega2", "blob part at p = 0".into()));
    }
    let schwarz = r3 / r1 - 1.5 * (r2 / r1) * (r2 / r1);
    Ok((-schwarz / (6.0 * r1 * r1), 1.0 / (r1 * r1 * 4.0 * p * p)))
}

/// `Ω⁽⁰⁾₃` split into the antidiagonal part and one term per ramification point.
#[derive(Debug, Clone, PartialEq)]
pub struct Omega3Parts {
    pub direct: Complex64,
    pub beta_terms: Vec<Complex64>,
}

impl Omega3Parts {
    pub fn total(&self) -> Complex64 {
        self.direct + self.beta_terms.iter().sum::<Complex64>()
    }
}

/// Numerator of `R′`, i.e. `R′(x) Π_k (ε_k + x)²`.
fn r1_numerator_at<T: CurveScalar>(curve: &SpectralCurve, x: &T) -> T {
    let cpl = curve.coupling();
    let sq: Vec<T> = curve.epsilon.iter().map(|e| (T::lift(*e) + x.clone()) * (T::lift(*e) + x.clone())).collect();
    let mut acc = sq.iter().fold(T::one(), |a, b| a * b.clone());
    for (k, r) in curve.rho.iter().enumerate() {
        let others = sq.iter().enumerate().filter(|(j, _)| *j != k).fold(T::one(), |a, (_, b)| a * b.clone());
        acc = acc + T::lift(cpl * r) * others;
    }
    acc
}

/// `1/R′(x)`, regular at the poles `x = −ε_k` of `R′`.
fn inv_r1<T: CurveScalar>(curve: &SpectralCurve, x: &T) -> T {
    if curve.coupling() == c(0.0) {
        return T::one();
    }
    let sq = curve.epsilon.iter().fold(T::one(), |a, e| a * (T::lift(*e) + x.clone()) * (T::lift(*e) + x.clone()));
    sq / r1_numerator_at(curve, x)
}

fn checked_args(curve: &SpectralCurve, u: Complex64, v: Complex64, z: Complex64) -> Result<(), CorrelatorError> {
    let pairs = [(u - v, "u = v"), (u + v, "u = -v"), (z + u, "z = -u"), (z + v, "z = -v")];
    for (d, what) in pairs {
        if near(d, u) {
            return Err(pole("Omega3", what.into()));
        }
    }
    for (i, b) in curve.beta.iter().enumerate() {
        for (x, name) in [(u, "u"), (v, "v")] {
            if near(x - b, *b) || near(x + b, *b) {
                return Err(pole("Omega3", format!("{name} = ±beta_{i}")));
            }
        }
        if near(z - b, *b) {
            return Err(pole("Omega3", format!("z = beta_{i}")));
        }
    }
    for x in [u, v, z] {
        for e in &curve.epsilon {
            if near(x + e, *e) {
                return Err(pole("Omega3", format!("argument at -epsilon ({x})")));
            }
        }
    }
    Ok(())
}

/// `Ω⁽⁰⁾₃(u,v,z)`: the third mixed partial of the bracket, computed with Taylor jets, divided by
/// `R′(u)R′(v)R′(z)`. Returned per ramification point.
pub fn omega3_parts(curve: &SpectralCurve, u: Complex64, v: Complex64, z: Complex64) -> Result<Omega3Parts, CorrelatorError> {
    checked_args(curve, u, v, z)?;
    let lam = curve.lambda;
    let ju = Jet::variable(u, 0, 3)?;
    let jv = Jet::variable(v, 1, 3)?;
    let jz = Jet::variable(z, 2, 3)?;
    let one = Jet::one();
    let l = Jet::lift(lam);
    let r1 = |x: &Jet| inv_r1(curve, x);
    for (x, name) in [(u, "u"), (-u, "-u"), (v, "v"), (-v, "-v")] {
        let sq = curve.epsilon.iter().fold(c(1.0), |a, e| a * (e + x) * (e + x));
        if curve.coupling() != c(0.0) && near(r1_numerator_at(curve, &x), c(1.0)) && !near(sq, c(1.0)) {
            return Err(pole("Omega3", format!("R'({name}) = 0")));
        }
    }
    let a1 = l.clone() * (one.clone() / (jv.clone() + ju.clone()) + one.clone() / (jv.clone() - ju.clone()))
        * r1(&ju) * r1(&(-ju.clone())) / (jz.clone() + ju.clone());
    let a2 = l.clone() * (one.clone() / (ju.clone() + jv.clone()) + one.clone() / (ju.clone() - jv.clone()))
        * r1(&jv) * r1(&(-jv.clone())) / (jz.clone() + jv.clone());
    let den = curve.r1(u) * curve.r1(v) * curve.r1(z);
    let full = (1usize << 3) - 1;
    let direct = (a1 + a2).part(full) / den;
    let mut beta_terms = Vec::with_capacity(curve.beta.len());
    if lam == c(0.0) {
        // every term carries a factor λ; at λ = 0 the ramification points sit on the poles
        return Ok(Omega3Parts { direct, beta_terms: vec![c(0.0); curve.beta.len()] });
    }
    for &b in &curve.beta {
        let jb = Jet::lift(b);
        let k = curve.r1(-b) * curve.r2(b);
        if near(k, c(1.0)) {
            return Err(pole("Omega3", format!("R'(-beta) R''(beta) = 0 at beta={b}")));
        }
        let t = l.clone()
            * (one.clone() / (jv.clone() + jb.clone()) + one.clone() / (jv.clone() - jb.clone()))
            * (one.clone() / (ju.clone() + jb.clone()) + one.clone() / (ju.clone() - jb.clone()))
            / (Jet::lift(k) * (jz.clone() - jb.clone()));
        beta_terms.push(t.part(full) / den);
    }
    Ok(Omega3Parts { direct, beta_terms })
}

pub fn omega3_exact(curve: &SpectralCurve, u: Complex64, v: Complex64, z: Complex64) -> Result<Complex64, CorrelatorError> {
    Ok(omega3_parts(curve, u, v, z)?.total())
}

/// `Ω⁽⁰⁾₃` at possibly coincident arguments.
///
/// The function is analytic across the diagonals even though single bracket terms are not, so
/// its value is the mean over `w` on a circle of radius `radius` of
/// `Ω₃(u + w, v + ωw, z + ω²w)` with `ω = e^{2πi/3}`, which keeps all three points distinct.
pub fn omega3_regularized(
    curve: &SpectralCurve,
    u: Complex64,
    v: Complex64,
    z: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<Complex64, CorrelatorError> {
    let om = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut acc = c(0.0);
    for j in 0..nodes {
        let w = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / nodes as f64);
        acc += omega3_exact(curve, u + w, v + om * w, z + om * om * w)?;
    }
    Ok(acc / nodes as f64)
}

/// Distance from `p` to the nearest singular locus of the Ω forms.
pub fn regular_radius(curve: &SpectralCurve, p: Complex64) -> f64 {
    let mut d = (2.0 * p).norm();
    for b in &curve.beta {
        d = d.min((p - b).norm()).min((p + b).norm());
    }
    for e in &curve.epsilon {
        d = d.min((p + e).norm());
    }
    d
}

/// `Ω⁽⁰⁾₃` at `(p, p, p)`.
pub fn omega3_coincident(curve: &SpectralCurve, p: Complex64) -> Result<Complex64, CorrelatorError> {
    omega3_regularized(curve, p, p, p, 0.2 * regular_radius(curve, p), 48)
}

/// Which closed form an [`OmegaForm`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaKind {
    Omega01,
    Omega02,
    Omega03,
    SmallOmega01,
}

/// A closed form bound to a curve.
#[derive(Debug, Clone)]
pub struct OmegaForm<'a> {
    pub kind: OmegaKind,
    pub curve: &'a SpectralCurve,
}

impl OmegaForm<'_> {
    pub fn arity(&self) -> usize {
        match self.kind {
            OmegaKind::Omega01 | OmegaKind::SmallOmega01 => 1,
            OmegaKind::Omega02 => 2,
            OmegaKind::Omega03 => 3,
        }
    }

    pub fn eval(&self, args: &[Complex64]) -> Result<Complex64, CorrelatorError> {
        if args.len() != self.arity() {
            return Err(pole("OmegaForm", format!("expected {} arguments", self.arity())));
        }
        match self.kind {
            OmegaKind::Omega01 => omega1_exact(self.curve, args[0]),
            OmegaKind::SmallOmega01 => omega01(self.curve, args[0]),
            OmegaKind::Omega02 => omega2_exact(self.curve, args[0], args[1]),
            OmegaKind::Omega03 => omega3_exact(self.curve, args[0], args[1], args[2]),
        }
    }
}
