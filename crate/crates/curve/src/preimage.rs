use crate::{CurveError, SpectralCurve};
use exact_core::Complex64;

impl SpectralCurve {
    /// Newton on `R(z) = ζ`, kept only while the residual decreases.
    fn polish_preimage(&self, mut z: Complex64, zeta: Complex64) -> Complex64 {
        let Ok([r0, _, _, _]) = self.eval_r(z, 0) else { return z };
        let mut f = r0 - zeta;
        for _ in 0..8 {
            let Ok([_, d1, _, _]) = self.eval_r(z, 1) else { break };
            let zn = z - f / d1;
            let Ok([rn, _, _, _]) = self.eval_r(zn, 0) else { break };
            if !((rn - zeta).norm() < f.norm()) {
                break;
            }
            z = zn;
            f = rn - zeta;
        }
        z
    }
}

/// All solutions of `R(z) = ζ` (up to `d+1`). Spurious roots of the cleared polynomial sitting
/// on the poles `−ε_k` are dropped.
pub fn preimages(curve: &SpectralCurve, zeta: Complex64) -> Result<Vec<Complex64>, CurveError> {
    let p = curve.preimage_numerator(zeta);
    let (roots, res) = p.roots();
    if !(res < 1e-8) {
        return Err(CurveError::RootFinder { residual: res });
    }
    let mut out = Vec::with_capacity(roots.len());
    for z in roots {
        if curve.epsilon.iter().any(|e| (z + e).norm() <= 1e-10 * (1.0 + e.norm())) {
            continue;
        }
        let z = curve.polish_preimage(z, zeta);
        let Ok([rz, _, _, _]) = curve.eval_r(z, 0) else { continue };
        if (rz - zeta).norm() <= 1e-7 * (1.0 + zeta.norm()) {
            out.push(z);
        }
    }
    Ok(out)
}

/// The local Galois involution at ramification point `i`: the other preimage of `R(q)` that
/// tends to `β_i` as `q → β_i`.
pub fn galois_involution(curve: &SpectralCurve, i: usize, q: Complex64) -> Result<Complex64, CurveError> {
    let beta = *curve.beta.get(i).ok_or(CurveError::BadBranch { index: i, count: curve.beta.len() })?;
    if (q - beta).norm() <= 1e-14 * (1.0 + beta.norm()) {
        return Ok(beta);
    }
    let zeta = curve.r(q);
    let mut pre = preimages(curve, zeta)?;
    // drop q itself
    let self_idx = (0..pre.len())
        .min_by(|&a, &b| (pre[a] - q).norm().total_cmp(&(pre[b] - q).norm()))
        .ok_or(CurveError::AmbiguousInvolution { q })?;
    pre.swap_remove(self_idx);
    let guess = 2.0 * beta - q;
    pre.sort_by(|a, b| (a - guess).norm().total_cmp(&(b - guess).norm()));
    let first = *pre.first().ok_or(CurveError::AmbiguousInvolution { q })?;
    if let Some(second) = pre.get(1) {
        let (d1, d2) = ((first - guess).norm(), (second - guess).norm());
        if d2 - d1 <= 1e-9 * (1.0 + d2) {
            return Err(CurveError::AmbiguousInvolution { q });
        }
    }
    Ok(curve.polish_preimage(first, zeta))
}

/// Preimages of one branch cut `[R(β_i), R(β_{i+d})]`, tracked sheet by sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCutTrace {
    pub index: usize,
    pub beta: Complex64,
    pub partner: Complex64,
    pub zeta: Vec<Complex64>,
    /// `sheets[s][j]` is the preimage of `zeta[j]` on sheet `s`.
    pub sheets: Vec<Vec<Complex64>>,
    /// The two sheets that meet at `β_i`; together they bound the deformed disk.
    pub loop_sheets: (usize, usize),
    /// Samples where nearest-neighbour tracking was not a bijection.
    pub flagged: Vec<usize>,
}

impl BranchCutTrace {
    /// Closed polygon `β_i → sheet a → partner → sheet b reversed`.
    pub fn loop_polygon(&self) -> Vec<Complex64> {
        let (a, b) = self.loop_sheets;
        let mut out = vec![self.beta];
        out.extend(&self.sheets[a]);
        out.push(self.partner);
        out.extend(self.sheets[b].iter().rev());
        out
    }
}

/// Samples each cut at `samples` interior points clustered towards the endpoints and returns
/// all preimages per sample.
pub fn trace_branch_cuts(curve: &SpectralCurve, samples: usize) -> Result<Vec<BranchCutTrace>, CurveError> {
    let d = curve.d();
    let samples = samples.max(2);
    let mut out = Vec::with_capacity(d);
    for i in 0..d.min(curve.beta.len() / 2) {
        let (beta, partner) = (curve.beta[i], curve.beta[i + d]);
        let (z0, z1) = (curve.r(beta), curve.r(partner));
        let mut zeta = Vec::with_capacity(samples);
        let mut sheets: Vec<Vec<Complex64>> = Vec::new();
        let mut flagged = Vec::new();
        let mut loop_sheets = (0, 1);
        for j in 0..samples {
            let theta = std::f64::consts::PI * (j as f64 + 1.0) / (samples as f64 + 1.0);
            let t = 0.5 * (1.0 - theta.cos());
            let zt = z0 + (z1 - z0) * t;
            let mut pre = preimages(curve, zt)?;
            zeta.push(zt);
            if j == 0 {
                pre.sort_by(|a, b| (a - beta).norm().total_cmp(&(b - beta).norm()));
                sheets = pre.iter().map(|&z| vec![z]).collect();
                loop_sheets = (0, 1.min(pre.len().saturating_sub(1)));
                continue;
            }
            let mut taken = vec![false; pre.len()];
            let mut bijective = pre.len() == sheets.len();
            for s in sheets.iter_mut() {
                let last = *s.last().unwrap();
                let k = (0..pre.len())
                    .filter(|&k| !taken[k])
                    .min_by(|&a, &b| (pre[a] - last).norm().total_cmp(&(pre[b] - last).norm()));
                let nearest = (0..pre.len()).min_by(|&a, &b| (pre[a] - last).norm().total_cmp(&(pre[b] - last).norm()));
                match k {
                    Some(k) => {
                        if Some(k) != nearest {
                            bijective = false;
                        }
                        taken[k] = true;
                        s.push(pre[k]);
                    }
                    None => {
                        bijective = false;
                        s.push(last);
                    }
                }
            }
            if !bijective {
                flagged.push(j);
            }
        }
        out.push(BranchCutTrace { index: i, beta, partner, zeta, sheets, loop_sheets, flagged });
    }
    Ok(out)
}

/// Winding number of a closed polygon around `p`.
pub fn winding_number(p: Complex64, polygon: &[Complex64]) -> i32 {
    let mut total = 0.0;
    for k in 0..polygon.len() {
        let a = polygon[k] - p;
        let b = polygon[(k + 1) % polygon.len()] - p;
        total += (b / a).arg();
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i32
}

/// Which poles `−ε_k` each cut loop encloses and which other loops it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct CutGeometry {
    pub loops: Vec<Vec<Complex64>>,
    pub encloses: Vec<Vec<usize>>,
    pub contains: Vec<Vec<usize>>,
    pub flagged_samples: usize,
}

impl CutGeometry {
    /// Number of ordered pairs (outer, inner) of nested loops.
    pub fn nesting_count(&self) -> usize {
        self.contains.iter().map(|c| c.len()).sum()
    }
}

pub fn cut_geometry(curve: &SpectralCurve, samples: usize) -> Result<CutGeometry, CurveError> {
    let traces = trace_branch_cuts(curve, samples)?;
    let loops: Vec<Vec<Complex64>> = traces.iter().map(|t| t.loop_polygon()).collect();
    let encloses = loops
        .iter()
        .map(|l| (0..curve.d()).filter(|&k| winding_number(-curve.epsilon[k], l) != 0).collect())
        .collect();
    let contains = (0..loops.len())
        .map(|i| {
            (0..loops.len())
                .filter(|&j| {
                    if i == j {
                        return false;
                    }
                    let centroid: Complex64 = loops[j].iter().sum::<Complex64>() / loops[j].len() as f64;
                    winding_number(centroid, &loops[i]) != 0
                })
                .collect()
        })
        .collect();
    let flagged_samples = traces.iter().map(|t| t.flagged.len()).sum();
    Ok(CutGeometry { loops, encloses, contains, flagged_samples })
}
