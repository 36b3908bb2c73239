//! Versioned JSON configuration: system definitions, run configurations,
//! measure specs and suite batteries.
//!
//! All documents carry `schema_version: 1`. The `schema` text printed by
//! the CLI documents every field; loaders here validate shapes and turn
//! specs into live objects.

use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::bitset::PointSet;
use crate::cover::{SolverKind, Theta, WeightMode};
use crate::error::SystemError;
use crate::harness::{CheckKind, Instance};
use crate::measure::DiscreteMeasure;
use crate::system::{generators, NdsSystem};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON in {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("unsupported schema_version {got}, this build reads version {expected}")]
    SchemaVersion { got: u32, expected: u32 },
    #[error("metric generator {generator} produces {produced} points but `points` is {declared}")]
    PointsMismatch { generator: &'static str, produced: usize, declared: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MetricSpec {
    Explicit { matrix: Vec<Vec<f64>> },
    Circle,
    Hamming { bits: usize },
    UltrametricTree { arity: usize, depth: usize },
}

#[derive(Debug, Clone, Deserialize)]
pub struct MapsSpec {
    pub period: Vec<Vec<usize>>,
    #[serde(default)]
    pub prefix: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialSpec {
    Zero,
    Constant { value: f64 },
    Indicator { set: Vec<usize>, #[serde(default = "one")] value: f64 },
    Explicit { values: Vec<f64> },
}

fn one() -> f64 {
    1.0
}

/// A system definition document.
#[derive(Debug, Clone, Deserialize)]
pub struct SystemSpec {
    pub schema_version: u32,
    pub points: usize,
    pub metric: MetricSpec,
    pub maps: MapsSpec,
    pub potential: PotentialSpec,
}

impl SystemSpec {
    pub fn build(&self) -> Result<NdsSystem, ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::SchemaVersion {
                got: self.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        let metric = match &self.metric {
            MetricSpec::Explicit { matrix } => matrix.clone(),
            MetricSpec::Circle => generators::circle_metric(self.points),
            MetricSpec::Hamming { bits } => {
                let m = generators::hamming_metric(*bits);
                if m.len() != self.points {
                    return Err(ConfigError::PointsMismatch {
                        generator: "hamming",
                        produced: m.len(),
                        declared: self.points,
                    });
                }
                m
            }
            MetricSpec::UltrametricTree { arity, depth } => {
                let m = generators::ultrametric_tree(*arity, *depth);
                if m.len() != self.points {
                    return Err(ConfigError::PointsMismatch {
                        generator: "ultrametric_tree",
                        produced: m.len(),
                        declared: self.points,
                    });
                }
                m
            }
        };
        if metric.len() != self.points {
            return Err(ConfigError::PointsMismatch {
                generator: "explicit",
                produced: metric.len(),
                declared: self.points,
            });
        }
        let potential = build_potential(&self.potential, self.points)?;
        Ok(NdsSystem::new(metric, self.maps.prefix.clone(), self.maps.period.clone(), potential)?)
    }
}

pub fn build_potential(spec: &PotentialSpec, points: usize) -> Result<Vec<f64>, ConfigError> {
    Ok(match spec {
        PotentialSpec::Zero => vec![0.0; points],
        PotentialSpec::Constant { value } => vec![*value; points],
        PotentialSpec::Indicator { set, value } => {
            let mut v = vec![0.0; points];
            for &i in set {
                if i >= points {
                    return Err(ConfigError::Invalid(format!(
                        "indicator point {i} out of range 0..{points}"
                    )));
                }
                v[i] = *value;
            }
            v
        }
        PotentialSpec::Explicit { values } => {
            if values.len() != points {
                return Err(ConfigError::Invalid(format!(
                    "potential has {} values, expected {points}",
                    values.len()
                )));
            }
            values.clone()
        }
    })
}

/// Either an inline system spec or a path to one, resolved relative to
/// the referencing config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Path(String),
    Inline(SystemSpec),
}

impl SystemRef {
    pub fn load(&self, base_dir: &Path) -> Result<NdsSystem, ConfigError> {
        match self {
            SystemRef::Inline(spec) => spec.build(),
            SystemRef::Path(p) => {
                let path = base_dir.join(p);
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| ConfigError::Io { path: path.clone(), source })?;
                let spec: SystemSpec = serde_json::from_str(&text)
                    .map_err(|source| ConfigError::Parse { path, source })?;
                spec.build()
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ZSpec {
    Keyword(String),
    Indices(Vec<usize>),
}

impl Default for ZSpec {
    fn default() -> Self {
        ZSpec::Keyword("all".to_string())
    }
}

impl ZSpec {
    pub fn build(&self, points: usize) -> Result<PointSet, ConfigError> {
        match self {
            ZSpec::Keyword(k) if k == "all" => Ok(PointSet::full(points)),
            ZSpec::Keyword(k) => {
                Err(ConfigError::Invalid(format!("unknown z keyword {k:?}; use \"all\" or indices")))
            }
            ZSpec::Indices(idx) => {
                if idx.is_empty() {
                    return Err(ConfigError::Invalid("z must be nonempty".to_string()));
                }
                for &i in idx {
                    if i >= points {
                        return Err(ConfigError::Invalid(format!(
                            "z index {i} out of range 0..{points}"
                        )));
                    }
                }
                Ok(PointSet::from_indices(points, idx))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SolverSpec {
    Exact,
    Greedy,
    Auto,
}

impl From<SolverSpec> for SolverKind {
    fn from(s: SolverSpec) -> SolverKind {
        match s {
            SolverSpec::Exact => SolverKind::Exact,
            SolverSpec::Greedy => SolverKind::Greedy,
            SolverSpec::Auto => SolverKind::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Sup,
    Center,
}

impl From<ModeSpec> for WeightMode {
    fn from(m: ModeSpec) -> WeightMode {
        match m {
            ModeSpec::Sup => WeightMode::SupValue,
            ModeSpec::Center => WeightMode::CenterValue,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureSpec {
    Dirac { point: usize },
    Uniform,
    Geometric,
    Explicit { weights: Vec<f64> },
}

impl MeasureSpec {
    /// Builds the measure relative to the configured subset.
    pub fn build(&self, points: usize, z: &PointSet) -> Result<DiscreteMeasure, ConfigError> {
        Ok(match self {
            MeasureSpec::Dirac { point } => {
                if !z.contains(*point) {
                    return Err(ConfigError::Invalid(format!(
                        "dirac point {point} lies outside z"
                    )));
                }
                DiscreteMeasure::dirac(points, *point)?
            }
            MeasureSpec::Uniform => DiscreteMeasure::uniform_on(points, z)?,
            MeasureSpec::Geometric => DiscreteMeasure::geometric_on(points, z)?,
            MeasureSpec::Explicit { weights } => {
                if weights.len() != points {
                    return Err(ConfigError::Invalid(format!(
                        "measure has {} weights, expected {points}",
                        weights.len()
                    )));
                }
                let mu = DiscreteMeasure::new(weights.clone())?;
                if !mu.is_full_on(z) {
                    return Err(ConfigError::Invalid(
                        "explicit measure support must lie inside z".to_string(),
                    ));
                }
                mu
            }
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct RandomBatterySpec {
    pub seed: u64,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_max_points")]
    pub max_points: usize,
    #[serde(default = "default_max_period")]
    pub max_period: usize,
}

fn default_count() -> usize {
    5
}
fn default_max_points() -> usize {
    10
}
fn default_max_period() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    BuiltIn {
        builtin: String,
    },
    Random {
        random: RandomBatterySpec,
    },
    Inline {
        #[serde(default)]
        name: Option<String>,
        system: SystemRef,
        #[serde(default)]
        z: ZSpec,
        #[serde(default)]
        epsilon: Option<f64>,
    },
}

/// A reasonable working radius for a system without one configured: a
/// little over half the median positive distance.
pub fn default_epsilon(sys: &NdsSystem) -> f64 {
    let mut distances: Vec<f64> = Vec::new();
    for i in 0..sys.points() {
        for j in (i + 1)..sys.points() {
            if sys.distance(i, j) > 0.0 {
                distances.push(sys.distance(i, j));
            }
        }
    }
    if distances.is_empty() {
        return 0.5;
    }
    distances.sort_by(|a, b| a.partial_cmp(b).unwrap());
    0.6 * distances[distances.len() / 2]
}

impl InstanceSpec {
    pub fn build(&self, base_dir: &Path) -> Result<Vec<Instance>, ConfigError> {
        match self {
            InstanceSpec::BuiltIn { builtin } => {
                let all = crate::harness::built_in_battery();
                if builtin == "all" {
                    Ok(all)
                } else {
                    all.into_iter()
                        .find(|i| &i.name == builtin)
                        .map(|i| vec![i])
                        .ok_or_else(|| {
                            ConfigError::Invalid(format!("unknown builtin instance {builtin:?}"))
                        })
                }
            }
            InstanceSpec::Random { random } => Ok(crate::harness::random_battery(
                random.seed,
                random.count,
                random.max_points,
                random.max_period,
            )),
            InstanceSpec::Inline { name, system, z, epsilon } => {
                let sys = system.load(base_dir)?;
                let zset = z.build(sys.points())?;
                let eps = epsilon.unwrap_or_else(|| default_epsilon(&sys));
                if eps <= 0.0 {
                    return Err(ConfigError::Invalid("epsilon must be positive".to_string()));
                }
                let name = name.clone().unwrap_or_else(|| "inline".to_string());
                Ok(vec![Instance::new(name, sys, zset, eps)])
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct SuiteSpec {
    #[serde(default)]
    pub instances: Vec<InstanceSpec>,
    /// Names as in [`CheckKind`]; omitted means every check.
    #[serde(default)]
    pub checks: Option<Vec<CheckKind>>,
    #[serde(default)]
    pub theta: Option<Theta>,
}

/// The top-level run configuration consumed by the CLI commands.
#[derive(Debug, Clone, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub system: Option<SystemRef>,
    #[serde(default)]
    pub z: ZSpec,
    #[serde(default)]
    pub potential_override: Option<PotentialSpec>,
    #[serde(default = "default_theta_grid")]
    pub theta_grid: Vec<Theta>,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_n_window")]
    pub n_window: [usize; 2],
    #[serde(default)]
    pub theta_zero_cap: Option<usize>,
    #[serde(default = "default_solver")]
    pub solver: SolverSpec,
    #[serde(default = "default_mode")]
    pub mode: ModeSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub measure: Option<MeasureSpec>,
    #[serde(default = "default_random_measures")]
    pub random_measures: usize,
    #[serde(default)]
    pub suite: Option<SuiteSpec>,
}

fn default_theta_grid() -> Vec<Theta> {
    Theta::grid(11)
}
fn default_epsilons() -> Vec<f64> {
    vec![0.25]
}
fn default_n_window() -> [usize; 2] {
    [3, 6]
}
fn default_solver() -> SolverSpec {
    SolverSpec::Auto
}
fn default_mode() -> ModeSpec {
    ModeSpec::Sup
}
fn default_tol() -> f64 {
    crate::cover::DEFAULT_TOL
}
fn default_random_measures() -> usize {
    3
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<(RunConfig, PathBuf), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::SchemaVersion {
                got: cfg.schema_version,
                expected: SCHEMA_VERSION,
            });
        }
        cfg.validate()?;
        let base = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        Ok((cfg, base))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.theta_grid.is_empty() {
            return Err(ConfigError::Invalid("theta_grid must be nonempty".to_string()));
        }
        if !self.theta_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(ConfigError::Invalid(
                "theta_grid must be strictly increasing".to_string(),
            ));
        }
        if self.epsilons.is_empty() {
            return Err(ConfigError::Invalid("epsilons must be nonempty".to_string()));
        }
        if !self.epsilons.windows(2).all(|w| w[0] > w[1]) {
            return Err(ConfigError::Invalid(
                "epsilons must be strictly decreasing".to_string(),
            ));
        }
        if self.epsilons.iter().any(|&e| !(e > 0.0)) {
            return Err(ConfigError::Invalid("epsilons must be positive".to_string()));
        }
        if self.n_window[0] == 0 || self.n_window[0] > self.n_window[1] {
            return Err(ConfigError::Invalid(format!(
                "n_window [{}, {}] must satisfy 1 <= lo <= hi",
                self.n_window[0], self.n_window[1]
            )));
        }
        if !(self.tol >= 0.0) {
            return Err(ConfigError::Invalid("tol must be non-negative".to_string()));
        }
        Ok(())
    }

    /// Loads the configured system with the potential override applied.
    pub fn build_system(&self, base_dir: &Path) -> Result<NdsSystem, ConfigError> {
        let sys_ref = self.system.as_ref().ok_or_else(|| {
            ConfigError::Invalid("this command needs a `system` entry".to_string())
        })?;
        let sys = sys_ref.load(base_dir)?;
        match &self.potential_override {
            None => Ok(sys),
            Some(spec) => {
                let phi = build_potential(spec, sys.points())?;
                Ok(sys.with_potential(phi)?)
            }
        }
    }
}

/// The documented configuration schema, printed by `thetapress schema`.
pub const SCHEMA_TEXT: &str = r#"{
  "schema_version": 1,
  "$comment": "thetapress configuration schema. A run config drives the pressure/classical/measure/verify commands; a system definition describes one finite nonautonomous system. All files are JSON.",
  "system_definition": {
    "schema_version": 1,
    "points": "integer >= 1, the number of points",
    "metric": {
      "type": "one of: explicit | circle | hamming | ultrametric_tree",
      "matrix": "(explicit) points x points symmetric matrix, zero diagonal, triangle inequality",
      "bits": "(hamming) points must equal 2^bits; distances are hamming(i,j)/bits",
      "arity": "(ultrametric_tree) branching factor; points must equal arity^depth",
      "depth": "(ultrametric_tree) tree depth; d(i,j) = 2^-(common prefix length)"
    },
    "maps": {
      "period": "list of function tables (each a points-long array of point indices), applied cyclically",
      "prefix": "optional list of tables applied once before the periodic block"
    },
    "potential": {
      "type": "one of: zero | constant | indicator | explicit",
      "value": "(constant) the constant; (indicator) the indicator height, default 1",
      "set": "(indicator) point indices carrying the value",
      "values": "(explicit) points-long array of reals"
    }
  },
  "run_config": {
    "schema_version": 1,
    "system": "inline system definition, or a path relative to the config file",
    "z": "\"all\" or an array of point indices (default \"all\")",
    "potential_override": "optional potential spec replacing the system's potential",
    "theta_grid": "strictly increasing rationals in [0,1], as strings (\"0.3\", \"3/10\") or numbers; default 11 values 0..1",
    "epsilons": "strictly decreasing positive radii; default [0.25]",
    "n_window": "[N_lo, N_hi] scale window; default [3, 6]",
    "theta_zero_cap": "optional length cap for the theta = 0 window; default 4*N_hi, raised automatically so the whole grid uses nested windows",
    "solver": "exact | greedy | auto (default auto: exact up to 24-point universes and 5000 candidates)",
    "mode": "sup | center: weigh candidates by the sup of the Birkhoff sum over the ball, or by its value at the center (default sup)",
    "tol": "bisection tolerance on critical exponents (default 1e-6)",
    "seed": "64-bit seed driving every random choice (default 0)",
    "measure": "(measure command) {type: dirac|uniform|geometric|explicit, point?, weights?}",
    "random_measures": "(measure command) how many seeded random measures join the variational check (default 3)",
    "suite": {
      "instances": "list of {builtin: \"all\"|name} | {random: {seed, count, max_points, max_period}} | {name?, system, z?, epsilon?}; default: the built-in battery",
      "checks": "optional list of check names (snake_case of: Closure, ThetaMonotonicity, AdditiveConstant, Lipschitz, PotentialMonotonicity, UnionRule, Scaling, PowerRule, PowerRuleIdentity, TimeShift, Commuting, ConjugacyRelabel, FactorCollapse, ExactGreedy, CenterMode, ComparisonBound, CapacityEquivalence, Variational, StringBallGap); default: all",
      "theta": "main theta for the structural checks (default 0.5)"
    }
  },
  "outputs": {
    "pressure": "alpha_ladder.csv (theta,epsilon,N,alpha_N,solver_status,candidates,cover_cardinality), profiles.csv (theta,lower,upper), pressure_vs_theta.svg",
    "classical": "classical.csv (kind,n,epsilon,value,log_value_over_n,witness_size)",
    "measure": "measure.csv (measure,theta,epsilon,N,alpha_N,lower,upper)",
    "verify": "verify_report.json plus a human-readable table on stdout; exit 1 iff a hard assertion fails"
  }
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_system_roundtrip() {
        let text = r#"{
            "schema_version": 1,
            "points": 4,
            "metric": {"type": "circle"},
            "maps": {"period": [[0, 2, 0, 2]]},
            "potential": {"type": "indicator", "set": [1], "value": 0.5}
        }"#;
        let spec: SystemSpec = serde_json::from_str(text).unwrap();
        let sys = spec.build().unwrap();
        assert_eq!(sys.points(), 4);
        assert_eq!(sys.potential(), &[0.0, 0.5, 0.0, 0.0]);
        assert_eq!(sys.distance(0, 2), 0.5);
    }

    #[test]
    fn hamming_points_mismatch_rejected() {
        let text = r#"{
            "schema_version": 1,
            "points": 6,
            "metric": {"type": "hamming", "bits": 3},
            "maps": {"period": [[0,0,0,0,0,0]]},
            "potential": {"type": "zero"}
        }"#;
        let spec: SystemSpec = serde_json::from_str(text).unwrap();
        assert!(matches!(spec.build(), Err(ConfigError::PointsMismatch { .. })));
    }

    #[test]
    fn run_config_defaults() {
        let text = r#"{"schema_version": 1}"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.theta_grid.len(), 11);
        assert_eq!(cfg.n_window, [3, 6]);
        assert_eq!(cfg.solver, SolverSpec::Auto);
    }

    #[test]
    fn theta_grid_accepts_numbers_and_strings() {
        let text = r#"{"schema_version": 1, "theta_grid": [0, "1/4", 0.5, "0.75", 1]}"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.theta_grid[1], Theta::new(1, 4));
        assert_eq!(cfg.theta_grid[2], Theta::new(1, 2));
        assert_eq!(cfg.theta_grid[3], Theta::new(3, 4));
    }

    #[test]
    fn bad_window_rejected() {
        let text = r#"{"schema_version": 1, "n_window": [5, 3]}"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn schema_text_is_valid_json() {
        let v: serde_json::Value = serde_json::from_str(SCHEMA_TEXT).unwrap();
        assert_eq!(v["schema_version"], 1);
    }
}
