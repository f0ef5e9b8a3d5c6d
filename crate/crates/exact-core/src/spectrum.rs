use crate::{ExactError, Rational};
use num_traits::{Signed, Zero};

/// Exact spectral data: distinct-or-coincident values `e_k` with multiplicities `r_k`
/// and matrix size `n = Σ r_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub e: Vec<Rational>,
    pub r: Vec<Rational>,
    pub n: Rational,
}

impl Spectrum {
    /// Builds a spectrum with `n = Σ r_k`. Values must be positive, multiplicities positive.
    pub fn new(e: Vec<Rational>, r: Vec<Rational>) -> Result<Self, ExactError> {
        if e.is_empty() || e.len() != r.len() {
            return Err(ExactError::BadSpectrum("e and r must be nonempty with equal length".into()));
        }
        if e.iter().any(|x| !x.is_positive()) {
            return Err(ExactError::BadSpectrum("values must be positive".into()));
        }
        if r.iter().any(|x| !x.is_positive()) {
            return Err(ExactError::BadSpectrum("multiplicities must be positive".into()));
        }
        let n = r.iter().fold(Rational::zero(), |a, b| a + b);
        Ok(Spectrum { e, r, n })
    }

    /// Number of spectral slots.
    pub fn d(&self) -> usize {
        self.e.len()
    }

    /// Splits one unit of multiplicity off slot `k` into a fresh slot with the same value.
    /// Returns the new spectrum and the index of the new slot. Used for `−N ∂/∂E_q`.
    pub fn split_slot(&self, k: usize) -> Result<(Spectrum, usize), ExactError> {
        let one = Rational::from_integer(1.into());
        if k >= self.d() || self.r[k] < one {
            return Err(ExactError::BadSpectrum(format!("slot {k} has multiplicity below one")));
        }
        let mut e = self.e.clone();
        let mut r = self.r.clone();
        r[k] = &r[k] - &one;
        e.push(self.e[k].clone());
        r.push(one);
        if r[k].is_zero() {
            e.remove(k);
            r.remove(k);
        }
        let idx = e.len() - 1;
        Ok((Spectrum { e, r, n: self.n.clone() }, idx))
    }
}
