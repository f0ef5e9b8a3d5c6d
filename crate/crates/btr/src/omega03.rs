use crate::{auto_radius, kernel_ki_with, kernel_ktilde_at, stable_residue, BtrError, KernelContext};
use correlators::omega3_exact;
use curve::{preimages, CurveScalar, SpectralCurve};
use exact_core::{Complex64, MultiDual};

type Jet = MultiDual<Complex64>;

/// Quadrature settings for the residues of the recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BtrOptions {
    pub node_count: usize,
    /// Relative agreement required between two concentric circles.
    pub tol: f64,
    /// Radius halvings before giving up.
    pub attempts: usize,
}

impl Default for BtrOptions {
    fn default() -> Self {
        BtrOptions { node_count: 128, tol: 1e-10, attempts: 6 }
    }
}

/// `ω₀,₂(a,q)/(da dq) = 1/(a−q)² + 1/(a+q)²`.
pub fn pair_coefficient<T: CurveScalar>(a: &T, q: &T) -> T {
    let m = a.clone() - q.clone();
    let p = a.clone() + q.clone();
    T::one() / (m.clone() * m) + T::one() / (p.clone() * p)
}

/// `ω₀,₃/(du dv dz)` split into the residue sum at the ramification points and the two
/// antidiagonal derivative terms; the form is `polar − antidiagonal_u − antidiagonal_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Omega03Btr {
    pub polar_terms: Vec<Complex64>,
    pub antidiagonal_u: Complex64,
    pub antidiagonal_v: Complex64,
}

impl Omega03Btr {
    pub fn polar(&self) -> Complex64 {
        self.polar_terms.iter().sum()
    }

    pub fn total(&self) -> Complex64 {
        self.polar() - self.antidiagonal_u - self.antidiagonal_v
    }
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm() + b.norm())
}

fn check_regular(curve: &SpectralCurve, pts: &[(&str, Complex64)]) -> Result<(), BtrError> {
    for (name, p) in pts {
        if curve.beta.iter().any(|b| close(*p, *b) || close(*p, -b)) {
            return Err(BtrError::Irregular(format!("{name}={p} is ±beta")));
        }
        if curve.epsilon.iter().any(|e| close(*p, -e) || close(*p, *e)) {
            return Err(BtrError::Irregular(format!("{name}={p} is ±epsilon")));
        }
    }
    for (a, (na, pa)) in pts.iter().enumerate() {
        for (nb, pb) in &pts[a + 1..] {
            if close(*pa, -pb) {
                return Err(BtrError::Irregular(format!("{na}={pa} and {nb}={pb} are antidiagonal")));
            }
        }
    }
    Ok(())
}

/// `Σ_i Res_{q→β_i} K_i(z,q)[f_u(q)f_v(σ_i q) + f_v(q)f_u(σ_i q)]`, one entry per `β_i`.
pub fn polar_terms(
    curve: &SpectralCurve,
    u: Complex64,
    v: Complex64,
    z: Complex64,
    opts: &BtrOptions,
) -> Result<Vec<Complex64>, BtrError> {
    let extra = KernelContext::pullback_inventory(curve, &[z, u, -u, v, -v])?;
    let mut out = Vec::with_capacity(curve.beta.len());
    for i in 0..curve.beta.len() {
        let ctx = KernelContext::new(curve, i, &extra, opts.node_count)?;
        let beta = ctx.quadrature.center;
        let integrand = |w: Complex64| -> Result<Complex64, BtrError> {
            let q = beta + w;
            let s = ctx.sigma(q)?;
            let k = kernel_ki_with(curve, z, q, s)?;
            Ok(k * (pair_coefficient(&u, &q) * pair_coefficient(&v, &s)
                + pair_coefficient(&v, &q) * pair_coefficient(&u, &s)))
        };
        out.push(stable_residue(integrand, beta, ctx.quadrature.radius, opts.node_count, opts.tol, opts.attempts)?);
    }
    Ok(out)
}

/// `∂_u Res_{q→−u} K̃(z,q,u)·2(1/(q−u) − 1/(q+u))·f_w(q)`.
///
/// `1/(q−u) − 1/(q+u)` is the primitive in `u` of `ω₀,₂(u,q)/(du dq)` vanishing at `u = 0`; the
/// factor 2 counts both orderings of the decomposition. The circle moves with `u`, so the
/// derivative is exact in the jet algebra.
pub fn antidiagonal_term(
    curve: &SpectralCurve,
    u: Complex64,
    w: Complex64,
    z: Complex64,
    opts: &BtrOptions,
) -> Result<Complex64, BtrError> {
    let center = -u;
    let mut avoid = vec![z, u, w, -w];
    avoid.extend(curve.beta.iter().copied());
    avoid.extend(preimages(curve, curve.r(u))?.into_iter().map(|p| -p));
    avoid.retain(|p| (p - center).norm() > 1e-12 * (1.0 + center.norm()));
    let radius = auto_radius(center, &avoid, 0.5)?;
    let ju = Jet::variable(u, 0, 1)?;
    let jz = Jet::lift(z);
    let jw = Jet::lift(w);
    let two = Jet::lift(Complex64::new(2.0, 0.0));
    let integrand = |off: Complex64| -> Result<Jet, BtrError> {
        let q = -ju.clone() + Jet::lift(off);
        let prim = Jet::lift(Complex64::new(1.0, 0.0)) / (q.clone() - ju.clone()) - Jet::lift(off).try_recip()?;
        Ok(kernel_ktilde_at(curve, &jz, &q, &ju) * two.clone() * prim * pair_coefficient(&jw, &q))
    };
    let res: Jet = stable_residue(integrand, center, radius, opts.node_count, opts.tol, opts.attempts)?;
    Ok(res.part(1))
}

/// `ω₀,₃(u,v,z)/(du dv dz)` from the blobbed recursion, with all parts.
pub fn omega03_btr_parts(
    curve: &SpectralCurve,
    u: Complex64,
    v: Complex64,
    z: Complex64,
    opts: &BtrOptions,
) -> Result<Omega03Btr, BtrError> {
    check_regular(curve, &[("u", u), ("v", v), ("z", z)])?;
    if close(u, v) {
        return Err(BtrError::Irregular(format!("u=v={u}")));
    }
    Ok(Omega03Btr {
        polar_terms: polar_terms(curve, u, v, z, opts)?,
        antidiagonal_u: antidiagonal_term(curve, u, v, z, opts)?,
        antidiagonal_v: antidiagonal_term(curve, v, u, z, opts)?,
    })
}

/// `ω₀,₃(u,v,z)/(du dv dz)` from the blobbed recursion with default quadrature.
pub fn omega03_btr(curve: &SpectralCurve, u: Complex64, v: Complex64, z: Complex64) -> Result<Complex64, BtrError> {
    Ok(omega03_btr_parts(curve, u, v, z, &BtrOptions::default())?.total())
}

/// `λ⁻¹ Ω⁽⁰⁾₃(u,v,z) R′(u)R′(v)R′(z)`, the same coefficient from the closed form.
pub fn omega03_closed(curve: &SpectralCurve, u: Complex64, v: Complex64, z: Complex64) -> Result<Complex64, BtrError> {
    if curve.lambda.norm() == 0.0 {
        return Err(BtrError::Irregular("closed form needs lambda != 0".into()));
    }
    let om = omega3_exact(curve, u, v, z)?;
    Ok(om * curve.r1(u) * curve.r1(v) * curve.r1(z) / curve.lambda)
}
