use crate::numerics::{solve_linear, Poly};
use crate::{CurveError, CurveScalar, ModelSpec};
use exact_core::Complex64;

/// A solved (or prescribed) spectral curve `R(z) = z − (λ/N) Σ_k ϱ_k/(ε_k + z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCurve {
    pub epsilon: Vec<Complex64>,
    pub rho: Vec<Complex64>,
    /// Zeros of `R′`. When the curve is real, `beta[i + d]` is the partner of `beta[i]`
    /// (complex conjugate, or the smaller real root of a real pair).
    pub beta: Vec<Complex64>,
    pub lambda: Complex64,
    pub n: f64,
    /// The spectral data the curve was solved for; `None` for prescribed `(ε, ϱ)`.
    pub model: Option<ModelSpec>,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl SpectralCurve {
    /// Curve with prescribed `(ε_k, ϱ_k)`, independent of any spectrum.
    pub fn from_parameters(
        epsilon: Vec<Complex64>,
        rho: Vec<Complex64>,
        n: f64,
        lambda: Complex64,
    ) -> Result<Self, CurveError> {
        if epsilon.is_empty() || epsilon.len() != rho.len() || n <= 0.0 {
            return Err(CurveError::BadModel("need d ≥ 1 matching (ε, ϱ) and N > 0".into()));
        }
        let mut curve = SpectralCurve { epsilon, rho, beta: Vec::new(), lambda, n, model: None };
        curve.beta = curve.compute_ramification()?;
        Ok(curve)
    }

    pub fn d(&self) -> usize {
        self.epsilon.len()
    }

    /// `λ/N`.
    pub fn coupling(&self) -> Complex64 {
        self.lambda / self.n
    }

    fn check_pole(&self, z: Complex64) -> Result<(), CurveError> {
        for (k, e) in self.epsilon.iter().enumerate() {
            if (z + e).norm() <= 1e-300 {
                return Err(CurveError::Pole { z, index: k });
            }
        }
        Ok(())
    }

    /// `[R, R′, R″, R‴]` at `z`, up to `deriv_order`; higher entries are zero.
    pub fn eval_r(&self, z: Complex64, deriv_order: usize) -> Result<[Complex64; 4], CurveError> {
        self.check_pole(z)?;
        let cpl = self.coupling();
        let mut out = [z, c(1.0), c(0.0), c(0.0)];
        for (e, r) in self.epsilon.iter().zip(&self.rho) {
            let w = 1.0 / (e + z);
            out[0] -= cpl * r * w;
            out[1] += cpl * r * w * w;
            out[2] -= 2.0 * cpl * r * w * w * w;
            out[3] += 6.0 * cpl * r * w * w * w * w;
        }
        for o in out.iter_mut().skip(deriv_order + 1) {
            *o = c(0.0);
        }
        Ok(out)
    }

    pub fn r(&self, z: Complex64) -> Complex64 {
        self.r_at(&z)
    }

    pub fn r1(&self, z: Complex64) -> Complex64 {
        self.r1_at(&z)
    }

    pub fn r2(&self, z: Complex64) -> Complex64 {
        self.r2_at(&z)
    }

    /// `R` on any curve scalar (Taylor jets included).
    pub fn r_at<T: CurveScalar>(&self, z: &T) -> T {
        let cpl = self.coupling();
        let mut acc = z.clone();
        for (e, r) in self.epsilon.iter().zip(&self.rho) {
            acc = acc - T::lift(cpl * r) / (T::lift(*e) + z.clone());
        }
        acc
    }

    pub fn r1_at<T: CurveScalar>(&self, z: &T) -> T {
        let cpl = self.coupling();
        let mut acc = T::one();
        for (e, r) in self.epsilon.iter().zip(&self.rho) {
            let w = T::lift(*e) + z.clone();
            acc = acc + T::lift(cpl * r) / (w.clone() * w);
        }
        acc
    }

    pub fn r2_at<T: CurveScalar>(&self, z: &T) -> T {
        let cpl = self.coupling();
        let mut acc = T::zero();
        for (e, r) in self.epsilon.iter().zip(&self.rho) {
            let w = T::lift(*e) + z.clone();
            acc = acc - T::lift(2.0 * cpl * r) / (w.clone() * w.clone() * w);
        }
        acc
    }

    /// Numerator of `R′`: `Π(ε_k+z)² + (λ/N) Σ_k ϱ_k Π_{j≠k}(ε_j+z)²`.
    pub fn r1_numerator(&self) -> Poly {
        let sq: Vec<Poly> = self.epsilon.iter().map(|e| Poly::linear(*e).mul(&Poly::linear(*e))).collect();
        let mut p = sq.iter().fold(Poly::constant(c(1.0)), |a, b| a.mul(b));
        for k in 0..self.d() {
            let mut q = Poly::constant(self.coupling() * self.rho[k]);
            for (j, s) in sq.iter().enumerate() {
                if j != k {
                    q = q.mul(s);
                }
            }
            p = p.add(&q);
        }
        p
    }

    /// Numerator of `R(z) − ζ`: `(z−ζ) Π(ε_k+z) − (λ/N) Σ_k ϱ_k Π_{j≠k}(ε_j+z)`.
    pub fn preimage_numerator(&self, zeta: Complex64) -> Poly {
        let lin: Vec<Poly> = self.epsilon.iter().map(|e| Poly::linear(*e)).collect();
        let mut p = lin.iter().fold(Poly::linear(-zeta), |a, b| a.mul(b));
        for k in 0..self.d() {
            let mut q = Poly::constant(-self.coupling() * self.rho[k]);
            for (j, s) in lin.iter().enumerate() {
                if j != k {
                    q = q.mul(s);
                }
            }
            p = p.add(&q);
        }
        p
    }

    fn compute_ramification(&self) -> Result<Vec<Complex64>, CurveError> {
        let p = self.r1_numerator();
        let (mut roots, _) = p.roots();
        for z in roots.iter_mut() {
            *z = self.polish_ramification(*z);
        }
        let res = roots.iter().map(|&z| p.relative_residual(z)).fold(0.0, f64::max);
        if !(res < 1e-9) {
            return Err(CurveError::RootFinder { residual: res });
        }
        Ok(order_pairs(roots, p.is_real(), self.d()))
    }

    /// Newton on `R′/R″`, kept only while it reduces `|R′|`.
    fn polish_ramification(&self, mut z: Complex64) -> Complex64 {
        let Ok([_, mut f, _, _]) = self.eval_r(z, 1) else { return z };
        for _ in 0..8 {
            let Ok([_, d1, d2, _]) = self.eval_r(z, 2) else { break };
            let step = d1 / d2;
            let zn = z - step;
            let Ok([_, fnew, _, _]) = self.eval_r(zn, 1) else { break };
            if !(fnew.norm() < f.norm()) {
                break;
            }
            z = zn;
            f = fnew;
        }
        z
    }

    /// Largest relative residual of `R(ε_k) = e_k`, `ϱ_k R′(ε_k) = r_k`; `None` without a model.
    pub fn residual(&self) -> Option<f64> {
        let m = self.model.as_ref()?;
        let f = system(&self.epsilon, &self.rho, &m.e(), &m.r(), self.coupling());
        let scale: Vec<f64> = m.e().into_iter().chain(m.r()).collect();
        Some(f.iter().zip(&scale).map(|(x, s)| x.norm() / s.abs()).fold(0.0, f64::max))
    }

    /// `Σ β_i + 2 Σ ε_k`.
    pub fn vieta_residual(&self) -> f64 {
        let sb: Complex64 = self.beta.iter().sum();
        let se: Complex64 = self.epsilon.iter().sum();
        (sb + 2.0 * se).norm()
    }
}

/// Orders roots as `(upper slots by decreasing real part, partners)` for real polynomials.
fn order_pairs(mut roots: Vec<Complex64>, real: bool, d: usize) -> Vec<Complex64> {
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    if real && roots.len() == 2 * d {
        let mut upper: Vec<Complex64> = roots.iter().copied().filter(|z| z.im > tol).collect();
        let mut reals: Vec<Complex64> = roots.iter().copied().filter(|z| z.im.abs() <= tol).collect();
        let lower: Vec<Complex64> = roots.iter().copied().filter(|z| z.im < -tol).collect();
        if upper.len() == lower.len() && reals.len() % 2 == 0 {
            let mut slots: Vec<(Complex64, Complex64)> = Vec::new();
            let mut pool = lower;
            for u in upper.drain(..) {
                let j = (0..pool.len())
                    .min_by(|&a, &b| (pool[a] - u.conj()).norm().total_cmp(&(pool[b] - u.conj()).norm()))
                    .unwrap();
                slots.push((u, pool.swap_remove(j)));
            }
            reals.sort_by(|a, b| b.re.total_cmp(&a.re));
            for p in reals.chunks(2) {
                slots.push((Complex64::new(p[0].re, 0.0), Complex64::new(p[1].re, 0.0)));
            }
            slots.sort_by(|a, b| b.0.re.total_cmp(&a.0.re).then(b.0.im.total_cmp(&a.0.im)));
            let mut out: Vec<Complex64> = slots.iter().map(|s| s.0).collect();
            out.extend(slots.iter().map(|s| s.1));
            return out;
        }
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    roots
}

/// Residual vector of the defining system `(F_k, G_k)`.
fn system(eps: &[Complex64], rho: &[Complex64], e: &[f64], r: &[f64], cpl: Complex64) -> Vec<Complex64> {
    let d = eps.len();
    let mut out = vec![c(0.0); 2 * d];
    for k in 0..d {
        let mut s1 = c(0.0);
        let mut s2 = c(0.0);
        for j in 0..d {
            let w = 1.0 / (eps[j] + eps[k]);
            s1 += rho[j] * w;
            s2 += rho[j] * w * w;
        }
        out[k] = eps[k] - cpl * s1 - e[k];
        out[d + k] = rho[k] * (1.0 + cpl * s2) - r[k];
    }
    out
}

fn jacobian(eps: &[Complex64], rho: &[Complex64], cpl: Complex64) -> Vec<Vec<Complex64>> {
    let d = eps.len();
    let mut jac = vec![vec![c(0.0); 2 * d]; 2 * d];
    for k in 0..d {
        let mut s2 = c(0.0);
        let mut s3 = c(0.0);
        for j in 0..d {
            let w = 1.0 / (eps[j] + eps[k]);
            s2 += rho[j] * w * w;
            s3 += rho[j] * w * w * w;
        }
        for m in 0..d {
            let w = 1.0 / (eps[m] + eps[k]);
            let delta = if m == k { c(1.0) } else { c(0.0) };
            jac[k][m] = delta * (1.0 + cpl * s2) + cpl * rho[m] * w * w;
            jac[k][d + m] = -cpl * w;
            jac[d + k][m] = -2.0 * rho[k] * cpl * (rho[m] * w * w * w + delta * s3);
            jac[d + k][d + m] = delta * (1.0 + cpl * s2) + rho[k] * cpl * w * w;
        }
    }
    jac
}

/// Newton iteration for the defining system at fixed coupling.
fn newton(x: &mut [Complex64], e: &[f64], r: &[f64], cpl: Complex64, max_iter: usize) -> bool {
    let d = e.len();
    for _ in 0..max_iter {
        let (eps, rho) = x.split_at(d);
        let f = system(eps, rho, e, r, cpl);
        let Some(dx) = solve_linear(jacobian(eps, rho, cpl), f.iter().map(|v| -v).collect()) else {
            return false;
        };
        let xn: f64 = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let dn: f64 = dx.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        if !dn.is_finite() {
            return false;
        }
        if dn <= 1e-15 * (1.0 + xn) {
            return true;
        }
    }
    let (eps, rho) = x.split_at(d);
    let f = system(eps, rho, e, r, cpl);
    f.iter().zip(e.iter().chain(r)).all(|(v, s)| v.norm() <= 1e-13 * s.abs())
}

/// Solves the defining system at `model.lambda` by continuation along the segment from 0.
pub fn solve_curve(model: &ModelSpec) -> Result<SpectralCurve, CurveError> {
    let x0: Vec<Complex64> = model.e().into_iter().chain(model.r()).map(c).collect();
    let x = continue_segment(model, x0, c(0.0), model.lambda)?;
    finish(model, x)
}

/// Continues a solved curve to the coupling `lambda` along a straight segment.
pub fn continue_curve(curve: &SpectralCurve, lambda: Complex64) -> Result<SpectralCurve, CurveError> {
    let model = curve
        .model
        .as_ref()
        .ok_or_else(|| CurveError::BadModel("continuation needs spectral data".into()))?
        .with_lambda(lambda);
    let x0: Vec<Complex64> = curve.epsilon.iter().chain(&curve.rho).copied().collect();
    let x = continue_segment(&model, x0, curve.lambda, lambda)?;
    finish(&model, x)
}

/// Curves at `node_count` equally spaced points of the circle `|λ| = radius`, reached by
/// continuation along the positive axis and then around the circle.
pub fn solve_on_circle(model: &ModelSpec, radius: f64, node_count: usize) -> Result<Vec<SpectralCurve>, CurveError> {
    let mut out = Vec::with_capacity(node_count);
    let mut cur = solve_curve(&model.with_lambda(c(radius)))?;
    out.push(cur.clone());
    for j in 1..node_count {
        let lam = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / node_count as f64);
        cur = continue_curve(&cur, lam)?;
        out.push(cur.clone());
    }
    Ok(out)
}

fn finish(model: &ModelSpec, x: Vec<Complex64>) -> Result<SpectralCurve, CurveError> {
    let d = model.d();
    let mut curve = SpectralCurve::from_parameters(x[..d].to_vec(), x[d..].to_vec(), model.n(), model.lambda)?;
    curve.model = Some(model.clone());
    Ok(curve)
}

fn continue_segment(
    model: &ModelSpec,
    mut x: Vec<Complex64>,
    from: Complex64,
    to: Complex64,
) -> Result<Vec<Complex64>, CurveError> {
    let (e, r, n) = (model.e(), model.r(), model.n());
    let mut t = 0.0f64;
    let mut h = 0.125f64;
    let mut prev: Option<(f64, Vec<Complex64>)> = None;
    let at = |t: f64| from + (to - from) * t;
    if (to - from).norm() == 0.0 {
        if newton(&mut x, &e, &r, at(0.0) / n, 40) {
            return Ok(x);
        }
        return Err(CurveError::ContinuationFailed { lambda: to, last_good: from });
    }
    while t < 1.0 {
        let tn = (t + h).min(1.0);
        // secant predictor
        let mut guess = x.clone();
        if let Some((tp, xp)) = &prev {
            let s = (tn - t) / (t - tp);
            for (g, (a, b)) in guess.iter_mut().zip(x.iter().zip(xp)) {
                *g = a + (a - b) * s;
            }
        }
        if newton(&mut guess, &e, &r, at(tn) / n, 30) {
            prev = Some((t, std::mem::replace(&mut x, guess)));
            t = tn;
            h = (h * 1.5).min(0.25);
        } else {
            h *= 0.5;
            if h < 1e-9 {
                return Err(CurveError::ContinuationFailed { lambda: at(tn), last_good: at(t) });
            }
        }
    }
    Ok(x)
}
