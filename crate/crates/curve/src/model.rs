use crate::CurveError;
use exact_core::{to_f64, Complex64, Spectrum};

/// Spectral data with a coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub spectrum: Spectrum,
    pub lambda: Complex64,
}

impl ModelSpec {
    /// Requires strictly increasing values.
    pub fn new(spectrum: Spectrum, lambda: Complex64) -> Result<Self, CurveError> {
        if spectrum.e.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CurveError::BadModel("values must be strictly increasing".into()));
        }
        Ok(ModelSpec { spectrum, lambda })
    }

    pub fn d(&self) -> usize {
        self.spectrum.d()
    }

    pub fn e(&self) -> Vec<f64> {
        self.spectrum.e.iter().map(to_f64).collect()
    }

    pub fn r(&self) -> Vec<f64> {
        self.spectrum.r.iter().map(to_f64).collect()
    }

    pub fn n(&self) -> f64 {
        to_f64(&self.spectrum.n)
    }

    pub fn with_lambda(&self, lambda: Complex64) -> Self {
        ModelSpec { spectrum: self.spectrum.clone(), lambda }
    }
}

/// A one-parameter family of curves in λ.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveFamilySpec {
    /// `(e_k, r_k)` fixed; `(ε_k, ϱ_k)` follow λ through the defining system.
    FixedSpectrum { spectrum: Spectrum, lambda_min: f64, lambda_max: f64 },
    /// `(ε_k, ϱ_k)` held fixed while λ varies.
    FixedCurve { epsilon: Vec<f64>, rho: Vec<f64>, n: f64, lambda_min: f64, lambda_max: f64 },
}

impl CurveFamilySpec {
    pub fn range(&self) -> (f64, f64) {
        match self {
            CurveFamilySpec::FixedSpectrum { lambda_min, lambda_max, .. }
            | CurveFamilySpec::FixedCurve { lambda_min, lambda_max, .. } => (*lambda_min, *lambda_max),
        }
    }
}
