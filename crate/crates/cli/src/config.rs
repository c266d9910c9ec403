use std::fmt;
use std::path::{Path, PathBuf};

use sdg_core::assembly::{large_penalty, parity_alpha, reduced_penalty, SchemeParams};
use sdg_core::mesh::Scheme;
use sdg_core::problems::{bessel_problem, radial_problem, star_problem, ManufacturedProblem, DEFAULT_RADIUS};
use sdg_core::quadrature::QuadratureConfig;
use sdg_core::solve_post::SolveOptions;
use serde::Deserialize;

/// What a run computes at every grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Solve,
    Project,
    Dofs,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Solve => "solve",
            Mode::Project => "project",
            Mode::Dofs => "dofs",
        })
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub mode: Option<Mode>,
    pub problem: ProblemConfig,
    #[serde(default = "default_degrees")]
    pub degrees: Vec<usize>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    #[serde(default = "default_betas")]
    pub beta: Vec<[f64; 2]>,
    #[serde(default = "default_schemes")]
    pub scheme: Vec<SchemeConfig>,
    #[serde(default)]
    pub quadrature: Option<QuadratureOverride>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Tabulated `[N, |T_h^i|, |E_h^i|]` triples for the DoF mode; when absent
    /// the counts come from classifying the problem's mesh.
    #[serde(default)]
    pub counts: Option<Vec<[usize; 3]>>,
}

fn default_degrees() -> Vec<usize> {
    vec![1]
}

fn default_betas() -> Vec<[f64; 2]> {
    vec![[1.0, 10.0]]
}

fn default_schemes() -> Vec<SchemeConfig> {
    vec![SchemeConfig::default()]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProblemConfig {
    Radial {
        #[serde(default = "default_radius")]
        r0: f64,
        #[serde(default = "default_nu")]
        nu: f64,
    },
    Star {
        #[serde(default = "default_lobe")]
        b: f64,
        #[serde(default = "default_level")]
        r0: f64,
    },
    Bessel {
        #[serde(default = "default_radius")]
        r0: f64,
    },
}

fn default_radius() -> f64 {
    DEFAULT_RADIUS
}

fn default_nu() -> f64 {
    5.0
}

fn default_lobe() -> f64 {
    0.3
}

fn default_level() -> f64 {
    std::f64::consts::FRAC_PI_3
}

impl ProblemConfig {
    pub fn build(&self, beta: (f64, f64)) -> sdg_core::Result<ManufacturedProblem> {
        match *self {
            ProblemConfig::Radial { r0, nu } => radial_problem(r0, nu, beta),
            ProblemConfig::Star { b, r0 } => star_problem(b, r0, beta),
            ProblemConfig::Bessel { r0 } => bessel_problem(r0, beta),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum NumberOrRule {
    Value(f64),
    Rule(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// `"large"` (4 max beta), `"reduced"` (max beta) or a number.
    #[serde(default = "default_sigma0")]
    pub sigma0: NumberOrRule,
    /// `"auto"` (parity rule) or a number.
    #[serde(default = "default_alpha")]
    pub alpha: NumberOrRule,
    #[serde(default = "default_edge_set")]
    pub edge_set: String,
}

fn default_epsilon() -> f64 {
    -1.0
}

fn default_sigma0() -> NumberOrRule {
    NumberOrRule::Rule("large".into())
}

fn default_alpha() -> NumberOrRule {
    NumberOrRule::Rule("auto".into())
}

fn default_edge_set() -> String {
    "sdg".into()
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            label: None,
            epsilon: default_epsilon(),
            sigma0: default_sigma0(),
            alpha: default_alpha(),
            edge_set: default_edge_set(),
        }
    }
}

impl SchemeConfig {
    pub fn edge_set(&self) -> Result<Scheme, ConfigError> {
        match self.edge_set.as_str() {
            "sdg" => Ok(Scheme::Sdg),
            "dg" => Ok(Scheme::Dg),
            other => invalid(format!("edge_set must be \"sdg\" or \"dg\", got {other:?}")),
        }
    }

    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let sym = match self.epsilon {
            e if e < 0.0 => "S",
            e if e > 0.0 => "N",
            _ => "I",
        };
        format!("{sym}-{}", self.edge_set.to_uppercase())
    }

    pub fn params(&self, beta: (f64, f64), m: usize) -> Result<SchemeParams, ConfigError> {
        let sigma0 = match &self.sigma0 {
            NumberOrRule::Value(v) => *v,
            NumberOrRule::Rule(r) if r == "large" => large_penalty(beta),
            NumberOrRule::Rule(r) if r == "reduced" => reduced_penalty(beta),
            NumberOrRule::Rule(r) => return invalid(format!("sigma0 must be \"large\", \"reduced\" or a number, got {r:?}")),
        };
        let alpha = match &self.alpha {
            NumberOrRule::Value(v) => *v,
            NumberOrRule::Rule(r) if r == "auto" => parity_alpha(self.epsilon, m),
            NumberOrRule::Rule(r) => return invalid(format!("alpha must be \"auto\" or a number, got {r:?}")),
        };
        SchemeParams::new(self.epsilon, sigma0, alpha, self.edge_set()?).map_err(|e| ConfigError(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverride {
    pub volume: usize,
    pub constraint: usize,
}

impl From<QuadratureOverride> for QuadratureConfig {
    fn from(q: QuadratureOverride) -> Self {
        QuadratureConfig { volume: q.volume, constraint: q.constraint }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "yes")]
    pub iterative_fallback: bool,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub max_iterations: Option<usize>,
    /// Gauss points per direction for the error integrals.
    #[serde(default)]
    pub error_order: Option<usize>,
}

fn yes() -> bool {
    true
}

fn default_tolerance() -> f64 {
    1e-12
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { iterative_fallback: true, tolerance: default_tolerance(), max_iterations: None, error_order: None }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolveOptions {
        SolveOptions {
            iterative_fallback: self.iterative_fallback,
            iterative_tolerance: self.tolerance,
            max_iterations: self.max_iterations,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub plot: bool,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| ConfigError(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n.is_empty() {
            return invalid("N list is empty");
        }
        if self.n.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("N list must be strictly increasing");
        }
        if self.n[0] == 0 {
            return invalid("N must be positive");
        }
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return invalid("degrees must be a non-empty list of positive integers");
        }
        if self.beta.is_empty() {
            return invalid("beta list is empty");
        }
        for b in &self.beta {
            if !(b[0] > 0.0 && b[1] > 0.0 && b[0].is_finite() && b[1].is_finite()) {
                return invalid(format!("beta must be positive, got {b:?}"));
            }
        }
        if self.scheme.is_empty() {
            return invalid("at least one scheme is required");
        }
        for s in &self.scheme {
            for b in &self.beta {
                for &m in &self.degrees {
                    s.params((b[0], b[1]), m)?;
                }
            }
        }
        if let Some(q) = self.quadrature {
            if q.volume == 0 || q.constraint == 0 {
                return invalid("quadrature orders must be positive");
            }
        }
        if let Some(counts) = &self.counts {
            let listed: Vec<usize> = counts.iter().map(|c| c[0]).collect();
            if listed != self.n {
                return invalid("counts must list the N values in the same order as N");
            }
        }
        Ok(())
    }

    /// Output directory: `--out` beats the config, which beats `out/<name>`.
    pub fn output_dir(&self, cli: Option<&Path>) -> PathBuf {
        cli.map(Path::to_path_buf)
            .or_else(|| self.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("out").join(&self.name))
    }
}
