use crate::{auto_radius, BtrError};
use curve::{galois_involution, preimages, CurveScalar, SpectralCurve};
use exact_core::{Complex64, ContourSpec};

fn singular(x: Complex64, scale: f64) -> bool {
    !(x.re.is_finite() && x.im.is_finite()) || x.norm() <= 1e-14 * (1.0 + scale)
}

/// Residue setup at one ramification point `β_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelContext {
    pub curve: SpectralCurve,
    pub i: usize,
    /// Circle around `β_i` excluding every inventoried singularity.
    pub quadrature: ContourSpec,
}

/// Fraction of the distance to the nearest other ramification point inside which `σ_i` is
/// selected unambiguously.
const INVOLUTION_BASIN: f64 = 0.3;

impl KernelContext {
    /// Sizes the circle around `β_i` to half the distance to the nearest point of
    /// `extra ∪ {−ε_k}` and to a fixed fraction of the distance to the other `β_j`.
    pub fn new(curve: &SpectralCurve, i: usize, extra: &[Complex64], node_count: usize) -> Result<Self, BtrError> {
        let beta = *curve.beta.get(i).ok_or_else(|| BtrError::Irregular(format!("branch index {i}")))?;
        let others: Vec<Complex64> =
            curve.beta.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| *b).collect();
        let mut avoid: Vec<Complex64> = curve.epsilon.iter().map(|e| -e).collect();
        avoid.extend_from_slice(extra);
        let r = auto_radius(beta, &avoid, 0.5)?.min(auto_radius(beta, &others, INVOLUTION_BASIN)?);
        let quadrature = ContourSpec::new(beta, r, node_count).map_err(BtrError::BadContour)?;
        Ok(KernelContext { curve: curve.clone(), i, quadrature })
    }

    /// Points whose images under `σ_i` are singular for an integrand with poles at `points`:
    /// all preimages of `R(p)`.
    pub fn pullback_inventory(curve: &SpectralCurve, points: &[Complex64]) -> Result<Vec<Complex64>, BtrError> {
        let mut out = Vec::new();
        for p in points {
            out.push(*p);
            out.extend(preimages(curve, curve.r(*p))?);
        }
        Ok(out)
    }

    pub fn sigma(&self, q: Complex64) -> Result<Complex64, BtrError> {
        Ok(galois_involution(&self.curve, self.i, q)?)
    }

    pub fn kernel(&self, z: Complex64, q: Complex64) -> Result<Complex64, BtrError> {
        kernel_ki(&self.curve, self.i, z, q)
    }
}

/// `K_i(z,q) = ½(1/(z−q) − 1/(z−σ_i(q))) / (R′(σ_i(q))(R(−σ_i(q)) − R(−q)))`.
pub fn kernel_ki(curve: &SpectralCurve, i: usize, z: Complex64, q: Complex64) -> Result<Complex64, BtrError> {
    let s = galois_involution(curve, i, q)?;
    kernel_ki_with(curve, z, q, s)
}

/// `K_i` with the involution image `s = σ_i(q)` supplied by the caller.
pub fn kernel_ki_with(curve: &SpectralCurve, z: Complex64, q: Complex64, s: Complex64) -> Result<Complex64, BtrError> {
    if singular(z - q, z.norm()) || singular(z - s, z.norm()) {
        return Err(BtrError::KernelSingular(format!("z={z} meets q={q} or sigma(q)={s}")));
    }
    let den = curve.r1(s) * (curve.r(-s) - curve.r(-q));
    if singular(den, 1.0) {
        return Err(BtrError::KernelSingular(format!("K_i denominator vanishes at q={q}")));
    }
    Ok(0.5 * (1.0 / (z - q) - 1.0 / (z - s)) / den)
}

/// `K̃(z,q,u) = ½(1/(z−q) − 1/(z+u)) / (R′(q)(R(u) − R(−q)))`.
pub fn kernel_ktilde(curve: &SpectralCurve, z: Complex64, q: Complex64, u: Complex64) -> Result<Complex64, BtrError> {
    if singular(z - q, z.norm()) || singular(z + u, z.norm()) {
        return Err(BtrError::KernelSingular(format!("z={z} meets q={q} or -u={}", -u)));
    }
    let den = curve.r1(q) * (curve.r(u) - curve.r(-q));
    if singular(den, 1.0) {
        return Err(BtrError::KernelSingular(format!("R'(q)(R(u) - R(-q)) vanishes at q={q}, u={u}")));
    }
    Ok(kernel_ktilde_at(curve, &z, &q, &u))
}

/// Unchecked `K̃` on any curve scalar, for differentiating through `u`.
pub fn kernel_ktilde_at<T: CurveScalar>(curve: &SpectralCurve, z: &T, q: &T, u: &T) -> T {
    let one = T::one();
    let half = T::lift(Complex64::new(0.5, 0.0));
    let bracket = one.clone() / (z.clone() - q.clone()) - one / (z.clone() + u.clone());
    half * bracket / (curve.r1_at(q) * (curve.r_at(u) - curve.r_at(&-q.clone())))
}
