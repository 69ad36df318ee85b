//! Campaign configuration, orchestration and reporting.
//!
//! A campaign is a pure function of its configuration and base seed: the
//! emitted CSV files are byte-identical across reruns and thread counts.
//! Every run also writes a JSON manifest listing the produced files with
//! content hashes alongside an echo of the configuration.

mod reference;
mod run;

pub use reference::{reproduce, ReferenceCell, ReferenceOutcome, REFERENCE_CELLS};
pub use run::{run_campaign, RunReport};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::PenaltyVectors;
use crate::scheme::SchemeParams;

/// What a campaign executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Bias and expected-weight analysis tables.
    Analyze,
    /// Round-count sweep over the oracle accuracy grid.
    Sweep,
    /// Rank-gap confidence trace.
    Trace,
    /// Grid-scheme recovery CDF.
    Passgrids,
    /// PIN-scheme recovery statistics.
    Mod10,
    /// Regression run against stored reference round counts.
    Reproduce,
}

impl Task {
    pub fn label(self) -> &'static str {
        match self {
            Task::Analyze => "analyze",
            Task::Sweep => "sweep",
            Task::Trace => "trace",
            Task::Passgrids => "passgrids",
            Task::Mod10 => "mod10",
            Task::Reproduce => "reproduce",
        }
    }
}

/// Scheme selection: a named preset or explicit parameters. With neither
/// given, the "bc" preset applies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub kind: Option<crate::scheme::SchemeKind>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub l: Option<usize>,
    #[serde(default)]
    pub d: Option<u32>,
    #[serde(default)]
    pub eta: Option<f64>,
}

fn default_rate_grid() -> Vec<f64> {
    vec![1.0]
}

/// Oracle accuracy grids. Sweeps and traces read `tpr`/`tnr`; the
/// symmetric-oracle tasks read `accuracy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default = "default_rate_grid")]
    pub tpr: Vec<f64>,
    #[serde(default = "default_rate_grid")]
    pub tnr: Vec<f64>,
    #[serde(default = "default_rate_grid")]
    pub accuracy: Vec<f64>,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            tpr: default_rate_grid(),
            tnr: default_rate_grid(),
            accuracy: default_rate_grid(),
        }
    }
}

fn default_task() -> Task {
    Task::Sweep
}

fn default_iterations() -> u64 {
    500
}

fn default_max_rounds() -> u64 {
    200_000
}

fn default_trace_rounds() -> u64 {
    600
}

fn default_trace_runs() -> u64 {
    1
}

fn default_trials() -> u64 {
    1000
}

fn default_max_observations() -> u64 {
    5000
}

fn default_pin_length() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSection {
    #[serde(default = "default_task")]
    pub task: Task,
    /// Attack runs per grid cell.
    #[serde(default = "default_iterations")]
    pub iterations: u64,
    /// Round cap per run; reaching it censors the run.
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u64,
    /// Counted rounds recorded by the trace task.
    #[serde(default = "default_trace_rounds")]
    pub trace_rounds: u64,
    /// Traces averaged by the trace task.
    #[serde(default = "default_trace_runs")]
    pub trace_runs: u64,
    /// Trials for the grid- and PIN-scheme tasks.
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Observation cap per grid-scheme trial.
    #[serde(default = "default_max_observations")]
    pub max_observations: u64,
    #[serde(default = "default_pin_length")]
    pub pin_length: usize,
    /// Hard pruning instead of points for the grid scheme.
    #[serde(default)]
    pub elimination: bool,
    /// No-modulus penalty vector, length `d`; defaults to all -1.
    #[serde(default)]
    pub penalty_u: Option<Vec<i64>>,
    /// Modulus penalty vector, length `d`; defaults to all 0.
    #[serde(default)]
    pub penalty_v: Option<Vec<i64>>,
    /// Reference-cell subset for the reproduce task; empty means all.
    #[serde(default)]
    pub cells: Vec<String>,
}

impl Default for AttackSection {
    fn default() -> Self {
        Self {
            task: default_task(),
            iterations: default_iterations(),
            max_rounds: default_max_rounds(),
            trace_rounds: default_trace_rounds(),
            trace_runs: default_trace_runs(),
            trials: default_trials(),
            max_observations: default_max_observations(),
            pin_length: default_pin_length(),
            elimination: false,
            penalty_u: None,
            penalty_v: None,
            cells: Vec::new(),
        }
    }
}

fn default_out_dir() -> String {
    "out".to_string()
}

fn default_base_seed() -> u64 {
    42
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out_dir")]
    pub dir: String,
    #[serde(default = "default_base_seed")]
    pub base_seed: u64,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
            base_seed: default_base_seed(),
        }
    }
}

/// Full campaign description, loadable from a TOML file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub attack: AttackSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: String,
        source: Box<toml::de::Error>,
    },
    #[error("invalid configuration:\n{}", .0.iter().map(|i| format!("  - {i}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<String>),
}

impl CampaignConfig {
    /// Reads and validates a TOML campaign file. Validation reports every
    /// violated constraint, not just the first.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let config: CampaignConfig =
            toml::from_str(&text).map_err(|source| ConfigError::Parse {
                path: path.display().to_string(),
                source: Box::new(source),
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every constraint and resolves the scheme parameters.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut issues = Vec::new();
        if let Err(e) = self.resolve_params() {
            issues.extend(e);
        }
        let rate_list = |name: &str, rates: &[f64], issues: &mut Vec<String>| {
            if rates.is_empty() {
                issues.push(format!("oracle.{name} must not be empty"));
            }
            for &r in rates {
                if !(0.0..=1.0).contains(&r) {
                    issues.push(format!(
                        "oracle.{name} entry {r} is not a probability in [0, 1]"
                    ));
                }
            }
        };
        match self.attack.task {
            Task::Sweep | Task::Trace => {
                rate_list("tpr", &self.oracle.tpr, &mut issues);
                rate_list("tnr", &self.oracle.tnr, &mut issues);
            }
            Task::Passgrids | Task::Mod10 => {
                rate_list("accuracy", &self.oracle.accuracy, &mut issues);
            }
            Task::Analyze | Task::Reproduce => {}
        }
        if self.attack.iterations < 1 {
            issues.push("attack.iterations must be at least 1".to_string());
        }
        if self.attack.max_rounds < 1 {
            issues.push("attack.max_rounds must be at least 1".to_string());
        }
        if self.attack.trials < 1 {
            issues.push("attack.trials must be at least 1".to_string());
        }
        if self.attack.pin_length < 1 {
            issues.push("attack.pin_length must be at least 1".to_string());
        }
        if self.attack.trace_runs < 1 {
            issues.push("attack.trace_runs must be at least 1".to_string());
        }
        if let Ok(params) = self.resolve_params() {
            if let Err(e) = self.resolve_penalties(&params) {
                issues.push(e);
            }
        }
        if self.attack.task == Task::Reproduce {
            for name in &self.attack.cells {
                if !REFERENCE_CELLS.iter().any(|c| c.name == name) {
                    issues.push(format!("unknown reference cell '{name}'"));
                }
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(issues))
        }
    }

    /// Scheme parameters from the preset or the explicit fields.
    pub fn resolve_params(&self) -> Result<SchemeParams, Vec<String>> {
        let s = &self.scheme;
        let explicit = [
            s.kind.is_some(),
            s.n.is_some(),
            s.k.is_some(),
            s.l.is_some(),
            s.d.is_some(),
        ];
        if explicit.iter().any(|&x| x) {
            if !explicit.iter().all(|&x| x) {
                return Err(vec![
                    "scheme: explicit parameters need all of kind, n, k, l, d".to_string(),
                ]);
            }
            return SchemeParams::new(
                s.kind.unwrap(),
                s.n.unwrap(),
                s.k.unwrap(),
                s.l.unwrap(),
                s.d.unwrap(),
                s.eta.unwrap_or(0.0),
            )
            .map_err(|e| vec![format!("scheme: {e}")]);
        }
        let name = s.preset.as_deref().unwrap_or("bc");
        SchemeParams::preset(name).map_err(|e| vec![format!("scheme: {e}")])
    }

    pub fn resolve_penalties(&self, params: &SchemeParams) -> Result<PenaltyVectors, String> {
        let d = params.d() as usize;
        let u = self.attack.penalty_u.clone().unwrap_or_else(|| vec![-1; d]);
        let v = self.attack.penalty_v.clone().unwrap_or_else(|| vec![0; d]);
        if u.len() != d || v.len() != d {
            return Err(format!(
                "attack: penalty vectors must have length d={d}, got {} and {}",
                u.len(),
                v.len()
            ));
        }
        PenaltyVectors::new(u, v).map_err(|e| format!("attack: {e}"))
    }
}
