use std::path::{Path, PathBuf};

use gbesov::hermite::MultiIndex;
use gbesov::verify::random_family;
use gbesov::{ExponentFunction, HermiteExpansion, OuterExponent, TimeGrid};
use serde::{Deserialize, Serialize};

/// One JSON document driving any subcommand; sections a command does not
/// use are ignored by it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "one")]
    pub dimension: usize,
    #[serde(default)]
    pub expansion: ExpansionSpec,
    #[serde(default)]
    pub p: Option<ExponentFunction>,
    #[serde(default)]
    pub q: Option<OuterExponent>,
    #[serde(default)]
    pub operator: Option<OperatorSpec>,
    #[serde(default)]
    pub besov: Option<BesovSpec>,
    #[serde(default)]
    pub points: Option<PointGrid>,
    #[serde(default)]
    pub time_grid: Option<TimeGrid>,
    /// Gauss-Hermite points per axis for inner norms.
    #[serde(default)]
    pub gauss_points: Option<usize>,
    #[serde(default)]
    pub verify: Option<VerifySpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub refine: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExpansionSpec {
    Terms {
        terms: Vec<TermSpec>,
    },
    Hermite {
        index: Vec<u32>,
    },
    /// Standard normal coefficients on all `|ν| ≤ max_order`, seeded.
    Random {
        max_order: u32,
    },
}

impl Default for ExpansionSpec {
    fn default() -> Self {
        ExpansionSpec::Terms { terms: Vec::new() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub index: Vec<u32>,
    pub coefficient: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Spectral,
    Integral,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperatorSpec {
    Ou {
        t: f64,
    },
    Poisson {
        t: f64,
    },
    BesselPotential {
        beta: f64,
        #[serde(default)]
        method: Method,
    },
    BesselDerivative {
        beta: f64,
        #[serde(default)]
        method: Method,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesovSpec {
    pub alpha: f64,
    #[serde(default)]
    pub k: Option<u32>,
}

/// Uniform axis grid, used on every axis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointGrid {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

impl PointGrid {
    pub fn axis(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lower];
        }
        let h = (self.upper - self.lower) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.lower + h * i as f64).collect()
    }

    /// Tensor grid in `dim` dimensions, last axis fastest.
    pub fn tensor(&self, dim: usize) -> Vec<Vec<f64>> {
        let axis = self.axis();
        let mut out = vec![Vec::new()];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(*x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TheoremSpec {
    JbetaInfty { alpha: f64, beta: f64 },
    Jbeta { alpha: f64, beta: f64 },
    Dbeta { alpha: f64, beta: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default = "yes")]
    pub default_suite: bool,
    /// Restrict the default suite to checks with these name prefixes.
    #[serde(default)]
    pub only: Vec<String>,
    #[serde(default)]
    pub slack: Option<f64>,
    #[serde(default)]
    pub theorems: Vec<TheoremSpec>,
}

fn yes() -> bool {
    true
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            default_suite: true,
            only: Vec::new(),
            slack: None,
            theorems: Vec::new(),
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| {
        ConfigError(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    if cfg.dimension == 0 {
        return Err(ConfigError("dimension must be at least 1".into()));
    }
    Ok(cfg)
}

impl RunConfig {
    pub fn expansion(&self, seed: u64) -> gbesov::Result<HermiteExpansion> {
        let d = self.dimension;
        match &self.expansion {
            ExpansionSpec::Terms { terms } => HermiteExpansion::from_terms(
                d,
                terms
                    .iter()
                    .map(|t| (MultiIndex::new(t.index.clone()), t.coefficient)),
            ),
            ExpansionSpec::Hermite { index } => {
                HermiteExpansion::from_terms(d, [(MultiIndex::new(index.clone()), 1.0)])
            }
            ExpansionSpec::Random { max_order } => {
                Ok(random_family(d, 1, *max_order, seed).remove(0).f)
            }
        }
    }

    pub fn p(&self) -> ExponentFunction {
        self.p.clone().unwrap_or(ExponentFunction::constant(2.0))
    }

    pub fn q(&self) -> OuterExponent {
        self.q.clone().unwrap_or(OuterExponent::constant(2.0))
    }
}

pub const SCHEMA: &str = r#"{
  "dimension": "integer >= 1 (default 1)",
  "expansion": {
    "kind": "terms | hermite | random",
    "terms": "[{\"index\": [n1, ...], \"coefficient\": c}] for kind = terms",
    "index": "[n1, ...] for kind = hermite",
    "max_order": "integer for kind = random (seeded standard normal coefficients)"
  },
  "p": "inner exponent: {\"kind\": \"constant\", \"value\"} | {\"kind\": \"rational-decay\", \"limit\", \"amplitude\", \"offset\", \"power\"} | {\"kind\": \"table\", \"knots\": [[r, p], ...]} (default constant 2)",
  "q": "outer exponent: same forms as p, or \"infinity\" (default constant 2)",
  "operator": {
    "kind": "ou | poisson | bessel-potential | bessel-derivative",
    "t": "time, for ou and poisson",
    "beta": "order, for bessel-*",
    "method": "spectral | integral (default spectral)"
  },
  "besov": {"alpha": "smoothness > 0", "k": "optional derivative order > alpha"},
  "points": {"lower": "axis start", "upper": "axis end", "count": "points per axis"},
  "time_grid": {"t_min": "> 0", "t_max": "> t_min", "count": ">= 2 (log-spaced)"},
  "gauss_points": "Gauss-Hermite points per axis for inner norms",
  "verify": {
    "default_suite": "bool (default true)",
    "only": "[check-name prefixes]",
    "slack": "refinement and extension slack (default 0.05)",
    "theorems": "[{\"kind\": \"jbeta-infty | jbeta | dbeta\", \"alpha\", \"beta\"}]"
  },
  "seed": "u64 (default 0; --seed overrides)",
  "refine": "grid refinement factor (default 1; --refine overrides)",
  "out_dir": "output directory (default .; --out overrides)"
}"#;
