use crate::CliError;
use curve::{CurveFamilySpec, ModelSpec};
use exact_core::{parse_rational, Complex64, Rational, Spectrum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Environment variable overriding `output.dir`.
pub const OUTPUT_DIR_ENV: &str = "QKM_OUTPUT_DIR";

/// A rational given either as an integer or as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatValue {
    Int(i64),
    Text(String),
}

impl RatValue {
    pub fn rational(&self) -> Result<Rational, CliError> {
        match self {
            RatValue::Int(i) => Ok(Rational::from_integer((*i).into())),
            RatValue::Text(s) => Ok(parse_rational(s)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// Spectral values `e_k`.
    pub e: Vec<RatValue>,
    /// Multiplicities `r_k`; `N = Σ r_k`.
    pub r: Vec<RatValue>,
    #[serde(default)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyMode {
    /// `(e_k, r_k)` fixed, `(ε_k, ϱ_k)` solved per λ.
    FixedE,
    /// `(ε_k, ϱ_k)` fixed.
    FixedEpsilon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub mode: FamilyMode,
    #[serde(default)]
    pub epsilon: Vec<f64>,
    #[serde(default)]
    pub rho: Vec<f64>,
    #[serde(default = "one")]
    pub n: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Samples per branch cut for `sweep cuts`.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn one() -> f64 {
    1.0
}
fn default_grid() -> usize {
    21
}
fn default_samples() -> usize {
    80
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderConfig {
    #[serde(default = "default_order")]
    pub max: usize,
}

fn default_order() -> usize {
    2
}

impl Default for OrderConfig {
    fn default() -> Self {
        OrderConfig { max: default_order() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourConfig {
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
}

fn default_radius() -> f64 {
    0.01
}
fn default_nodes() -> usize {
    64
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig { radius: default_radius(), nodes: default_nodes() }
    }
}

/// Sign conventions between related series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConventionConfig {
    /// Emit the quadrangulation generating function at `−λ`, the sign under which it equals F⁽⁰⁾.
    #[serde(default = "yes")]
    pub gf_flip_lambda: bool,
}

fn yes() -> bool {
    true
}

impl Default for ConventionConfig {
    fn default() -> Self {
        ConventionConfig { gf_flip_lambda: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

/// The whole run description, loaded from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub family: Option<FamilyConfig>,
    #[serde(default)]
    pub orders: OrderConfig,
    #[serde(default)]
    pub contour: ContourConfig,
    #[serde(default)]
    pub conventions: ConventionConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

/// Command-line overrides applied after loading.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub order: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.apply(overrides)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(l) = o.lambda {
            self.model.lambda = l;
        }
        if let Some(k) = o.order {
            self.orders.max = k;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.validate()
    }

    /// Enforces the model invariants and the numeric ranges.
    pub fn validate(&self) -> Result<(), CliError> {
        self.model_spec()?;
        if !self.model.lambda.is_finite() {
            return Err(CliError::Config("model.lambda must be finite".into()));
        }
        if !(self.contour.radius > 0.0) || self.contour.nodes < 8 || !self.contour.nodes.is_power_of_two() {
            return Err(CliError::Config("contour needs radius > 0 and a power-of-two node count >= 8".into()));
        }
        if let Some(f) = &self.family {
            if !(f.lambda_min < f.lambda_max) || f.grid < 2 {
                return Err(CliError::Config("family needs lambda_min < lambda_max and grid >= 2".into()));
            }
            if f.mode == FamilyMode::FixedEpsilon && (f.epsilon.is_empty() || f.epsilon.len() != f.rho.len() || f.n <= 0.0) {
                return Err(CliError::Config("fixed-epsilon family needs matching epsilon and rho and n > 0".into()));
            }
        }
        Ok(())
    }

    pub fn spectrum(&self) -> Result<Spectrum, CliError> {
        let e = self.model.e.iter().map(|x| x.rational()).collect::<Result<Vec<_>, _>>()?;
        let r = self.model.r.iter().map(|x| x.rational()).collect::<Result<Vec<_>, _>>()?;
        Ok(Spectrum::new(e, r)?)
    }

    pub fn model_spec(&self) -> Result<ModelSpec, CliError> {
        Ok(ModelSpec::new(self.spectrum()?, Complex64::new(self.model.lambda, 0.0))?)
    }

    pub fn family_spec(&self) -> Result<CurveFamilySpec, CliError> {
        let f = self.family.as_ref().ok_or_else(|| CliError::Config("this command needs a [family] table".into()))?;
        Ok(match f.mode {
            FamilyMode::FixedE => CurveFamilySpec::FixedSpectrum {
                spectrum: self.spectrum()?,
                lambda_min: f.lambda_min,
                lambda_max: f.lambda_max,
            },
            FamilyMode::FixedEpsilon => CurveFamilySpec::FixedCurve {
                epsilon: f.epsilon.clone(),
                rho: f.rho.clone(),
                n: f.n,
                lambda_min: f.lambda_min,
                lambda_max: f.lambda_max,
            },
        })
    }

    /// Uniform λ grid of the family, endpoints included.
    pub fn lambda_grid(&self) -> Result<Vec<f64>, CliError> {
        let f = self.family.as_ref().ok_or_else(|| CliError::Config("this command needs a [family] table".into()))?;
        Ok((0..f.grid).map(|j| f.lambda_min + (f.lambda_max - f.lambda_min) * j as f64 / (f.grid - 1) as f64).collect())
    }

    /// SHA-256 of the canonical JSON form of the effective configuration.
    pub fn hash(&self) -> String {
        let canon = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canon.as_bytes()))
    }

    /// Output directory: the environment override, then `output.dir`.
    pub fn output_dir(&self) -> Option<PathBuf> {
        std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).or_else(|| self.output.dir.clone())
    }
}
