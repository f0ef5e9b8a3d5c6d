use crate::IdentityError;
use exact_core::{rat, LambdaSeries, Rational, Spectrum};
use graphs::{correlator_series, BoundarySpec};

/// Genus-zero correlator series over one spectrum, with loop sums `Σ_k` over all matrix indices.
pub struct Correlators<'a> {
    pub spectrum: &'a Spectrum,
    pub order: usize,
}

impl<'a> Correlators<'a> {
    pub fn new(spectrum: &'a Spectrum, order: usize) -> Self {
        Correlators { spectrum, order }
    }

    pub fn get(&self, cycles: &[Vec<Rational>]) -> Result<LambdaSeries<Rational>, IdentityError> {
        let b = BoundarySpec::new(cycles.to_vec())?;
        Ok(correlator_series(&b, 0, self.order, self.spectrum)?)
    }

    /// `(1/N) Σ_{k=1}^N f(E_k)`.
    pub fn sum_k(
        &self,
        f: impl Fn(&Rational) -> Result<LambdaSeries<Rational>, IdentityError>,
    ) -> Result<LambdaSeries<Rational>, IdentityError> {
        let mut acc = LambdaSeries::zero(self.order);
        for (e, r) in self.spectrum.e.iter().zip(&self.spectrum.r) {
            acc = acc.add(&f(e)?.scale(&(r / &self.spectrum.n)));
        }
        Ok(acc)
    }

    /// Evaluates a product of correlators written as label patterns.
    ///
    /// Each factor is a boundary like `"akbk|cl"`: cycles separated by `|`, one character per leg.
    /// Letters `a`, `b`, `c` stand for the fixed values in `fixed`; `j`, `k`, `l` are summed with
    /// `(1/N) Σ` each, jointly across all factors.
    pub fn pattern(&self, factors: &[&str], fixed: &[Rational]) -> Result<LambdaSeries<Rational>, IdentityError> {
        let sums: Vec<char> = ['j', 'k', 'l'].into_iter().filter(|s| factors.iter().any(|f| f.contains(*s))).collect();
        let d = self.spectrum.d();
        let mut idx = vec![0usize; sums.len()];
        let mut acc = LambdaSeries::zero(self.order);
        loop {
            let mut weight = rat(1, 1);
            for &i in &idx {
                weight *= &self.spectrum.r[i] / &self.spectrum.n;
            }
            let value = |ch: char| -> Result<Rational, IdentityError> {
                match ch {
                    'a' | 'b' | 'c' => fixed
                        .get((ch as u8 - b'a') as usize)
                        .cloned()
                        .ok_or_else(|| IdentityError::BadIndex(format!("no value for {ch}"))),
                    _ => {
                        let p = sums.iter().position(|&s| s == ch).ok_or_else(|| IdentityError::BadIndex(ch.to_string()))?;
                        Ok(self.spectrum.e[idx[p]].clone())
                    }
                }
            };
            let mut prod = LambdaSeries::constant(weight, self.order);
            for f in factors {
                let cycles = f
                    .split('|')
                    .map(|c| c.chars().map(value).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                prod = prod.mul(&self.get(&cycles)?);
            }
            acc = acc.add(&prod);
            // next multi-index
            let mut p = 0;
            while p < idx.len() {
                idx[p] += 1;
                if idx[p] < d {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == idx.len() {
                break;
            }
        }
        Ok(acc)
    }

    fn combination(&self, terms: &[(i64, &[&str])], fixed: &[Rational]) -> Result<LambdaSeries<Rational>, IdentityError> {
        let mut acc = LambdaSeries::zero(self.order);
        for (c, factors) in terms {
            acc = acc.add(&self.pattern(factors, fixed)?.scale(&rat(*c, 1)));
        }
        Ok(acc)
    }
}

fn slot_value(spectrum: &Spectrum, q: usize) -> Result<Rational, IdentityError> {
    spectrum.e.get(q).cloned().ok_or_else(|| IdentityError::BadIndex(format!("slot {q} out of range")))
}

/// Distinct matrix indices drawn from the given slots must exist.
fn check_multiplicity(spectrum: &Spectrum, slots: &[usize]) -> Result<(), IdentityError> {
    for &s in slots {
        let used = slots.iter().filter(|&&t| t == s).count() as i64;
        if spectrum.r.get(s).map_or(true, |r| *r < rat(used, 1)) {
            return Err(IdentityError::BadIndex(format!("slot {s} has fewer than {used} indices")));
        }
    }
    Ok(())
}

/// `Ω⁽⁰⁾_q = (1/N) Σ_k G⁽⁰⁾_{|qk|}` for an index `q` in slot `q`.
pub fn omega1_from_correlators(spectrum: &Spectrum, q: usize, order: usize) -> Result<LambdaSeries<Rational>, IdentityError> {
    let a = slot_value(spectrum, q)?;
    Correlators::new(spectrum, order).pattern(&["ak"], &[a])
}

const OMEGA2_TERMS: &[(i64, &[&str])] = &[
    (1, &["ab", "ab"]),
    (1, &["ak|bl"]),
    (1, &["akab"]),
    (1, &["bkba"]),
    (1, &["akbk"]),
];

/// Genus-zero `Ω⁽⁰⁾_{q₁,q₂}` assembled from graph series, for distinct indices in slots `q1`, `q2`.
///
/// The term `1/(E_{q₁} − E_{q₂})²` is included when the two values differ and omitted when both
/// indices share a value, so the coincident result is the regular part.
pub fn omega2_from_correlators(
    spectrum: &Spectrum,
    q1: usize,
    q2: usize,
    order: usize,
) -> Result<LambdaSeries<Rational>, IdentityError> {
    check_multiplicity(spectrum, &[q1, q2])?;
    let (a, b) = (slot_value(spectrum, q1)?, slot_value(spectrum, q2)?);
    let mut s = Correlators::new(spectrum, order).combination(OMEGA2_TERMS, &[a.clone(), b.clone()])?;
    if a != b {
        let d = &a - &b;
        s = s.add(&LambdaSeries::constant(rat(1, 1) / (&d * &d), order));
    }
    Ok(s)
}

const OMEGA3_TERMS: &[(i64, &[&str])] = &[
    (1, &["aj|bk|cl"]),
    (1, &["akbk|cl"]),
    (1, &["bkck|al"]),
    (1, &["ckak|bl"]),
    (1, &["akab|cl"]),
    (1, &["akac|bl"]),
    (1, &["bkbc|al"]),
    (1, &["bkba|cl"]),
    (1, &["ckca|bl"]),
    (1, &["ckcb|al"]),
    (1, &["akbkck"]),
    (1, &["akckbk"]),
    (1, &["akabac"]),
    (1, &["akacab"]),
    (1, &["bkbcba"]),
    (1, &["bkbabc"]),
    (1, &["ckcacb"]),
    (1, &["ckcbca"]),
    (1, &["akabcb"]),
    (1, &["akacbc"]),
    (1, &["bkbcac"]),
    (1, &["bkbaca"]),
    (1, &["ckcaba"]),
    (1, &["ckcbab"]),
    (1, &["kakbcb"]),
    (1, &["kakcbc"]),
    (1, &["kbkcac"]),
    (1, &["kbkaca"]),
    (1, &["kckaba"]),
    (1, &["kckbab"]),
    (2, &["ab", "ck|ab"]),
    (2, &["ab", "abac"]),
    (2, &["ab", "babc"]),
    (2, &["bc", "ak|bc"]),
    (2, &["bc", "bcba"]),
    (2, &["bc", "cbca"]),
    (2, &["ca", "bk|ca"]),
    (2, &["ca", "cacb"]),
    (2, &["ca", "acab"]),
];

/// Genus-zero `Ω⁽⁰⁾_{q₁,q₂,q₃}` assembled from graph series, for pairwise distinct indices.
pub fn omega3_from_correlators(
    spectrum: &Spectrum,
    q1: usize,
    q2: usize,
    q3: usize,
    order: usize,
) -> Result<LambdaSeries<Rational>, IdentityError> {
    check_multiplicity(spectrum, &[q1, q2, q3])?;
    let fixed = [slot_value(spectrum, q1)?, slot_value(spectrum, q2)?, slot_value(spectrum, q3)?];
    Correlators::new(spectrum, order).combination(OMEGA3_TERMS, &fixed)
}
