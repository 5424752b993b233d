use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::ModelKind;
use crate::model::{Palette, SampleSpace};
use crate::sdp::SdpParams;
use crate::statistics::{balanced_sizes, threshold, FormulaId, ThresholdReport};

pub const ENV_OUTPUT: &str = "KPARTITE_OUTPUT";
pub const ENV_THREADS: &str = "KPARTITE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    #[default]
    Mle,
    Sdp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaletteKind {
    Real,
    Roots,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PaletteSpec {
    /// Defaults to roots of unity for the Hermitian models, reals otherwise.
    pub kind: Option<PaletteKind>,
    /// Real colors; defaults to `0, 1, …, k−1`.
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceChoice {
    Omega,
    FixedCounts,
    MinFraction,
    ThetaA,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpaceSpec {
    /// Group sizes of the planted assignment, non-increasing; defaults to
    /// the most balanced split.
    pub truth_sizes: Option<Vec<usize>>,
    /// Space the MLE searches. Defaults: fixed counts for the vector model,
    /// Ω for the partition model, Θ_A for the unit-modulus models.
    pub estimator_space: Option<SpaceChoice>,
    /// `c` for the min-fraction space; required when that space is chosen.
    pub min_fraction: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaMode {
    /// Grid values are multiples of the critical σ².
    #[default]
    Relative,
    /// Grid values are σ itself.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SigmaSpec {
    pub mode: SigmaMode,
    /// Explicit grid; otherwise `lo`, `hi`, `steps`.
    pub values: Option<Vec<f64>>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub steps: Option<usize>,
    pub spacing: Spacing,
}

/// A Monte Carlo experiment, read from TOML.
///
/// ```toml
/// model = "vector-t"        # vector-t | partition-r | gue-u | conjugated-goe-v
/// estimator = "mle"         # mle | sdp
/// n = 12
/// k = 2
/// seed = 7
/// trials = 200
/// threads = 0               # 0 uses every core
/// output = "out/vector"     # directory for trials.csv and summary.csv
///
/// [sigma]
/// mode = "relative"         # relative: multiples of the critical σ²
/// lo = 0.25
/// hi = 4.0
/// steps = 7
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    #[serde(default)]
    pub estimator: Estimator,
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Record wall-clock time per trial; off keeps CSV output reproducible.
    #[serde(default)]
    pub record_timing: bool,
    /// Fit a logistic curve to the recovery rates after a sweep.
    #[serde(default)]
    pub fit_logistic: bool,
    #[serde(default)]
    pub palette: PaletteSpec,
    #[serde(default)]
    pub space: SpaceSpec,
    pub sigma: SigmaSpec,
    #[serde(default)]
    pub solver: SdpParams,
}

fn default_trials() -> usize {
    100
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Applies `KPARTITE_OUTPUT` and `KPARTITE_THREADS` when set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(out) = std::env::var(ENV_OUTPUT) {
            if !out.is_empty() {
                self.output = Some(PathBuf::from(out));
            }
        }
        if let Ok(t) = std::env::var(ENV_THREADS) {
            self.threads = t
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{ENV_THREADS} must be a non-negative integer")))?;
        }
        Ok(())
    }

    /// Validates the configuration and resolves every derived quantity.
    pub fn plan(&self) -> Result<Plan> {
        let (n, k) = (self.n, self.k);
        if k < 2 || n < k {
            return Err(Error::Config(format!("need 2 ≤ k ≤ n, got n={n}, k={k}")));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let hermitian = self.model.is_hermitian();
        if self.estimator == Estimator::Sdp && !hermitian {
            return Err(Error::Config("the sdp estimator needs gue-u or conjugated-goe-v".into()));
        }

        let kind = self.palette.kind.unwrap_or(if hermitian { PaletteKind::Roots } else { PaletteKind::Real });
        let palette = match kind {
            PaletteKind::Roots => {
                if self.palette.values.is_some() {
                    return Err(Error::Config("root-of-unity palettes take no values".into()));
                }
                Palette::roots(k)?
            }
            PaletteKind::Real => {
                let values = self.palette.values.clone().unwrap_or_else(|| (0..k).map(|c| c as f64).collect());
                if values.len() != k {
                    return Err(Error::Config(format!("palette has {} values, k={k}", values.len())));
                }
                Palette::real(values)?
            }
        };
        if hermitian != palette.is_roots() && self.model != ModelKind::PartitionR {
            return Err(Error::Config(format!("palette kind does not fit model {}", self.model)));
        }
        let palette = Arc::new(palette);

        let truth_sizes = match &self.space.truth_sizes {
            Some(s) => s.clone(),
            None => balanced_sizes(n, k)?,
        };
        let truth_space = SampleSpace::fixed_counts(truth_sizes.clone(), palette.clone())
            .map_err(|e| Error::Config(format!("truth_sizes: {e}")))?;
        if truth_space.n() != n {
            return Err(Error::Config("truth_sizes must sum to n".into()));
        }

        let choice = self.space.estimator_space.unwrap_or(match self.model {
            ModelKind::VectorT => SpaceChoice::FixedCounts,
            ModelKind::PartitionR => SpaceChoice::Omega,
            ModelKind::GueU | ModelKind::ConjugatedGoeV => SpaceChoice::ThetaA,
        });
        let estimator_space = match choice {
            SpaceChoice::Omega => SampleSpace::omega(n, palette.clone())?,
            SpaceChoice::FixedCounts => truth_space.clone(),
            SpaceChoice::MinFraction => {
                let c = self
                    .space
                    .min_fraction
                    .ok_or_else(|| Error::Config("min-fraction space needs space.min_fraction".into()))?;
                SampleSpace::min_fraction(n, c, palette.clone())?
            }
            SpaceChoice::ThetaA => {
                if !palette.is_roots() {
                    return Err(Error::Config("theta-a needs a root-of-unity palette".into()));
                }
                if truth_sizes.iter().any(|&s| s * k != n) {
                    return Err(Error::Config("theta-a needs k | n and equal truth sizes".into()));
                }
                SampleSpace::theta_a(n, k)?
            }
        };

        let formula = FormulaId::for_model(self.model, self.estimator == Estimator::Sdp);
        let threshold = threshold(formula, n, &palette, Some(&truth_sizes))?;
        let sigmas = self.sigma_grid(threshold.sigma_sq_critical)?;
        Ok(Plan {
            config: self.clone(),
            palette,
            truth_sizes,
            estimator_space,
            threshold,
            sigmas,
        })
    }

    fn sigma_grid(&self, sigma_sq_critical: f64) -> Result<Vec<f64>> {
        let s = &self.sigma;
        let raw = match (&s.values, s.lo, s.hi, s.steps) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(lo), Some(hi), Some(steps)) => {
                if steps == 0 || lo > hi {
                    return Err(Error::Config("sigma grid needs steps ≥ 1 and lo ≤ hi".into()));
                }
                if steps == 1 {
                    vec![lo]
                } else {
                    let last = (steps - 1) as f64;
                    match s.spacing {
                        Spacing::Linear => (0..steps).map(|i| lo + (hi - lo) * i as f64 / last).collect(),
                        Spacing::Geometric => {
                            if lo <= 0.0 {
                                return Err(Error::Config("geometric sigma grid needs lo > 0".into()));
                            }
                            (0..steps).map(|i| lo * (hi / lo).powf(i as f64 / last)).collect()
                        }
                    }
                }
            }
            _ => return Err(Error::Config("sigma needs either values or lo, hi and steps".into())),
        };
        if raw.is_empty() {
            return Err(Error::Config("sigma grid is empty".into()));
        }
        if raw.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Config("sigma grid values must be finite and ≥ 0".into()));
        }
        Ok(match s.mode {
            SigmaMode::Absolute => raw,
            SigmaMode::Relative => raw.iter().map(|m| (m * sigma_sq_critical).sqrt()).collect(),
        })
    }
}

/// A validated configuration with its derived quantities.
#[derive(Debug, Clone)]
pub struct Plan {
    pub config: ExperimentConfig,
    pub palette: Arc<Palette>,
    pub truth_sizes: Vec<usize>,
    pub estimator_space: SampleSpace,
    pub threshold: ThresholdReport,
    /// Absolute σ values, in grid order.
    pub sigmas: Vec<f64>,
}
