use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// Benchmark instance family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Sparse polynomial regression over an l1 ball.
    Polyreg,
    /// Synthetic low-rank matrix completion over a nuclear-norm ball.
    Matcomp,
    /// Squared distance to a random matrix over the Birkhoff polytope.
    Birkhoff,
    /// `||x||^2` over the probability simplex in exact rational arithmetic.
    Rational,
    /// Euclidean projection of a Gaussian point onto the probability simplex.
    SimplexProjection,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Polyreg,
        Preset::Matcomp,
        Preset::Birkhoff,
        Preset::Rational,
        Preset::SimplexProjection,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Polyreg => "polyreg",
            Preset::Matcomp => "matcomp",
            Preset::Birkhoff => "birkhoff",
            Preset::Rational => "rational",
            Preset::SimplexProjection => "simplex-projection",
        }
    }

    pub fn default_max_iterations(self) -> usize {
        match self {
            Preset::Polyreg => 300,
            Preset::Matcomp => 500,
            Preset::Birkhoff => 5000,
            Preset::Rational => 1000,
            Preset::SimplexProjection => 1000,
        }
    }

    pub fn default_variants(self) -> Vec<Variant> {
        match self {
            Preset::Rational => vec![Variant::Fw],
            Preset::Polyreg | Preset::Matcomp => {
                vec![
                    Variant::Fw,
                    Variant::Lfw,
                    Variant::Afw,
                    Variant::Lafw,
                    Variant::Bcg,
                    Variant::PgdReference,
                ]
            }
            Preset::Birkhoff | Preset::SimplexProjection => {
                vec![Variant::Fw, Variant::Lfw, Variant::Afw, Variant::Lafw, Variant::Bcg]
            }
        }
    }

    /// Whether CSV rows carry a `test_error` column.
    pub fn has_test_error(self) -> bool {
        matches!(self, Preset::Polyreg | Preset::Matcomp)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL.into_iter().find(|p| p.as_str() == s).ok_or_else(|| {
            let known: Vec<_> = Preset::ALL.iter().map(|p| p.as_str()).collect();
            HarnessError::Config(format!("unknown preset '{s}' (known: {})", known.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Fw,
    Lfw,
    Afw,
    Lafw,
    Bcg,
    Sfw,
    PgdReference,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Fw,
        Variant::Lfw,
        Variant::Afw,
        Variant::Lafw,
        Variant::Bcg,
        Variant::Sfw,
        Variant::PgdReference,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Fw => "fw",
            Variant::Lfw => "lfw",
            Variant::Afw => "afw",
            Variant::Lafw => "lafw",
            Variant::Bcg => "bcg",
            Variant::Sfw => "sfw",
            Variant::PgdReference => "pgd-reference",
        }
    }

    /// Variants that maintain a convex decomposition of the iterate.
    pub fn tracks_active_set(self) -> bool {
        !matches!(self, Variant::Sfw | Variant::PgdReference)
    }

    pub fn is_lazy(self) -> bool {
        matches!(self, Variant::Lfw | Variant::Lafw | Variant::Bcg)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL.into_iter().find(|v| v.as_str() == s).ok_or_else(|| {
            let known: Vec<_> = Variant::ALL.iter().map(|v| v.as_str()).collect();
            HarnessError::Config(format!("unknown variant '{s}' (known: {})", known.join(", ")))
        })
    }
}

/// Parses a comma-separated variant list.
pub fn parse_variants(list: &str) -> Result<Vec<Variant>, HarnessError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Variant::from_str)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepChoice {
    Adaptive,
    Agnostic,
    Short,
    LineSearch,
}

impl FromStr for StepChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adaptive" => Ok(StepChoice::Adaptive),
            "agnostic" => Ok(StepChoice::Agnostic),
            "short" => Ok(StepChoice::Short),
            "line-search" => Ok(StepChoice::LineSearch),
            other => Err(HarnessError::Config(format!(
                "unknown step rule '{other}' (known: adaptive, agnostic, short, line-search)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatchGrowth {
    /// `b_t = base`.
    Constant,
    /// `b_t = base * (t + 1)^2`.
    Quadratic,
}

/// Batch-size schedule of the stochastic variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatchSchedule {
    pub growth: BatchGrowth,
    pub base: usize,
    pub cap: usize,
}

impl Default for BatchSchedule {
    fn default() -> Self {
        Self {
            growth: BatchGrowth::Quadratic,
            base: 1,
            cap: 10_000,
        }
    }
}

impl BatchSchedule {
    pub fn size(&self, t: usize) -> usize {
        let b = match self.growth {
            BatchGrowth::Constant => self.base,
            BatchGrowth::Quadratic => self.base.saturating_mul((t + 1).saturating_mul(t + 1)),
        };
        b.min(self.cap)
    }
}

/// Everything a `run` needs. Every field has a default, so a JSON config
/// file only lists what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Preset,
    /// Empty selects the preset's default list.
    pub variants: Vec<Variant>,
    /// `None` selects the preset default.
    pub max_iterations: Option<usize>,
    pub epsilon: f64,
    /// `None` selects adaptive steps (agnostic for `sfw`, exact short steps
    /// for the rational preset).
    pub step: Option<StepChoice>,
    /// Smoothness constant for short steps; presets supply one when omitted.
    pub lipschitz: Option<f64>,
    /// `None` for an unbounded vertex cache.
    pub cache_capacity: Option<usize>,
    pub k_lazy: f64,
    pub gap_check_interval: Option<usize>,
    pub seed: u64,
    /// Instance size: dimension for `rational` and `simplex-projection`,
    /// matrix side for `birkhoff`, input features for `polyreg`, rows for
    /// `matcomp` (columns are `4n/5`).
    pub n: Option<usize>,
    pub batch: BatchSchedule,
    /// Constant momentum weight `rho_t` for `sfw`; 1 disables momentum.
    pub momentum: f64,
    pub output: Option<PathBuf>,
    /// Defaults to the CSV path with a `.json` extension.
    pub summary: Option<PathBuf>,
    pub parallel: bool,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: Preset::SimplexProjection,
            variants: Vec::new(),
            max_iterations: None,
            epsilon: 1e-7,
            step: None,
            lipschitz: None,
            cache_capacity: Some(500),
            k_lazy: 2.0,
            gap_check_interval: None,
            seed: 0,
            n: None,
            batch: BatchSchedule::default(),
            momentum: 1.0,
            output: None,
            summary: None,
            parallel: true,
            verbosity: 0,
        }
    }
}

impl RunConfig {
    pub fn new(preset: Preset) -> Self {
        Self {
            preset,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolved_variants(&self) -> Vec<Variant> {
        if self.variants.is_empty() {
            self.preset.default_variants()
        } else {
            self.variants.clone()
        }
    }

    pub fn resolved_max_iterations(&self) -> usize {
        self.max_iterations
            .unwrap_or_else(|| self.preset.default_max_iterations())
    }

    pub fn summary_path(&self) -> Option<PathBuf> {
        self.summary
            .clone()
            .or_else(|| self.output.as_ref().map(|p| p.with_extension("json")))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.k_lazy >= 1.0 && self.k_lazy.is_finite()) {
            return bad(format!("k_lazy must be at least 1, got {}", self.k_lazy));
        }
        if self.cache_capacity == Some(0) {
            return bad("cache capacity must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.momentum) || self.momentum == 0.0 {
            return bad(format!("momentum must lie in (0, 1], got {}", self.momentum));
        }
        if self.batch.base == 0 || self.batch.cap == 0 {
            return bad("batch sizes must be positive".into());
        }
        if let Some(l) = self.lipschitz {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("lipschitz constant must be positive, got {l}"));
            }
        }
        if self.n == Some(0) {
            return bad("instance size must be positive".into());
        }
        let variants = self.resolved_variants();
        for (i, v) in variants.iter().enumerate() {
            if variants[..i].contains(v) {
                return bad(format!("variant '{v}' listed twice"));
            }
            let available = match (self.preset, v) {
                (Preset::Rational, Variant::Sfw | Variant::PgdReference) => false,
                (Preset::Birkhoff | Preset::SimplexProjection, Variant::PgdReference) => false,
                _ => true,
            };
            if !available {
                return bad(format!("variant '{v}' is not available for preset '{}'", self.preset));
            }
        }
        Ok(())
    }
}
