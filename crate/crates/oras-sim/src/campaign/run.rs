//! Campaign execution: dispatch, CSV emission and the JSON run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{CampaignConfig, ConfigError, Task};
use crate::attack::{run_trace, sweep, SweepCell};
use crate::bias::{
    aggregate_expected_weight, conditional_expected_weight, response_bias_table, WeightEvent,
};
use crate::mod10::mod10_run;
use crate::oracle::FaultyOracleConfig;
use crate::passgrids::{pg_run, PgMode, PgPenalties};
use crate::rng::StreamSeed;
use crate::scheme::{rounds_per_session, SchemeKind, SchemeParams, Secret};

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Files produced by one campaign run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub manifest_path: PathBuf,
    /// For the reproduce task: whether every cell passed its tolerance.
    pub gate_passed: Option<bool>,
}

struct Emitter {
    dir: PathBuf,
    files: Vec<(String, String, u64)>,
    paths: Vec<PathBuf>,
}

impl Emitter {
    fn new(dir: &Path) -> Result<Self, CampaignError> {
        std::fs::create_dir_all(dir).map_err(|source| CampaignError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            paths: Vec::new(),
        })
    }

    /// Writes through a temp file and renames, so an interrupted run never
    /// leaves a half-written report behind.
    fn emit(&mut self, name: &str, content: &str) -> Result<(), CampaignError> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!("{name}.tmp"));
        let io_err = |p: &Path, source| CampaignError::Io {
            path: p.display().to_string(),
            source,
        };
        std::fs::write(&tmp, content).map_err(|e| io_err(&tmp, e))?;
        std::fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))?;
        let digest = Sha256::digest(content.as_bytes());
        self.files.push((
            name.to_string(),
            format!("{digest:x}"),
            content.len() as u64,
        ));
        self.paths.push(path);
        Ok(())
    }
}

fn fmt_opt(value: Option<f64>, decimals: usize) -> String {
    value.map_or(String::new(), |v| format!("{v:.decimals$}"))
}

fn attack_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from("scheme,tpr,tnr,iterations,mean_rounds,std_rounds,censored\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.scheme,
            c.tpr,
            c.tnr,
            c.iterations,
            fmt_opt(c.mean_rounds, 3),
            fmt_opt(c.std_rounds, 3),
            c.censored
        );
    }
    out
}

fn analyze_csv(params: &SchemeParams) -> String {
    let table = response_bias_table(params);
    let e_weight = |g: u32, event| conditional_expected_weight(g, params.d(), event).ok();
    let mut out = String::from("scheme,g,response,p_mod,p_no_mod,e_weight_mod,e_weight_no_mod\n");
    for block in &table.per_g {
        let e_mod = e_weight(block.g, WeightEvent::Modulus);
        let e_no = e_weight(block.g, WeightEvent::NoModulus);
        for row in &block.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{:.6},{},{}",
                params.kind(),
                block.g,
                row.response,
                row.p_mod,
                row.p_no_mod,
                fmt_opt(e_mod, 6),
                fmt_opt(e_no, 6)
            );
        }
    }
    let agg_mod = aggregate_expected_weight(params, WeightEvent::Modulus);
    let agg_no = aggregate_expected_weight(params, WeightEvent::NoModulus);
    for row in &table.aggregate {
        let _ = writeln!(
            out,
            "{},all,{},{:.6},{:.6},{agg_mod:.6},{agg_no:.6}",
            params.kind(),
            row.response,
            row.p_mod,
            row.p_no_mod
        );
    }
    out
}

fn session_target(kind: SchemeKind) -> f64 {
    match kind {
        SchemeKind::BehavioCog | SchemeKind::FoxTail => 1e-6,
        SchemeKind::HopperBlum => 1e-4,
    }
}

/// Executes a validated campaign, writing its data files and manifest into
/// `out_dir`. Identical config and seed produce byte-identical CSV files.
pub fn run_campaign(config: &CampaignConfig, out_dir: &Path) -> Result<RunReport, CampaignError> {
    config.validate()?;
    let started = Instant::now();
    let mut emitter = Emitter::new(out_dir)?;
    let base_seed = config.output.base_seed;
    let mut gate_passed = None;

    let summary = match config.attack.task {
        Task::Analyze => {
            let params = config.resolve_params().expect("validated");
            emitter.emit("analyze.csv", &analyze_csv(&params))?;
            json!({ "scheme": params.kind().label() })
        }
        Task::Sweep => {
            let params = config.resolve_params().expect("validated");
            let penalties = config.resolve_penalties(&params).expect("validated");
            let cells = sweep(
                &params,
                &config.oracle.tpr,
                &config.oracle.tnr,
                config.attack.iterations,
                &penalties,
                config.attack.max_rounds,
                base_seed,
            )
            .expect("validated rates");
            emitter.emit("attack.csv", &attack_csv(&cells))?;
            let target = session_target(params.kind());
            let per_session = rounds_per_session(&params, target).expect("valid target");
            let cell_summaries: Vec<_> = cells
                .iter()
                .map(|c| {
                    json!({
                        "tpr": c.tpr,
                        "tnr": c.tnr,
                        "mean_rounds": c.mean_rounds,
                        "std_rounds": c.std_rounds,
                        "censored": c.censored,
                        "mean_sessions": c.mean_rounds.map(|m| m / f64::from(per_session)),
                    })
                })
                .collect();
            json!({
                "scheme": params.kind().label(),
                "rounds_per_session": per_session,
                "session_target": target,
                "cells": cell_summaries,
            })
        }
        Task::Trace => {
            let params = config.resolve_params().expect("validated");
            let penalties = config.resolve_penalties(&params).expect("validated");
            let oracle = FaultyOracleConfig::new(config.oracle.tpr[0], config.oracle.tnr[0])
                .expect("validated rates");
            let runs = config.attack.trace_runs;
            let horizon = config.attack.trace_rounds;
            let mut sums = vec![[0.0f64; 3]; horizon as usize];
            for run in 0..runs {
                let mut rng = StreamSeed::new(base_seed, run).rng();
                let secret = Secret::random(&params, &mut rng);
                let trace = run_trace(&params, &secret, &oracle, &penalties, horizon, &mut rng);
                for (i, row) in trace.rows.iter().enumerate() {
                    sums[i][0] += row.diff_km1_k as f64;
                    sums[i][1] += row.diff_k_kp1 as f64;
                    sums[i][2] += row.diff_kp1_kp2 as f64;
                }
            }
            let mut out = String::from("round,diff_km1_k,diff_k_kp1,diff_kp1_kp2\n");
            for (i, s) in sums.iter().enumerate() {
                let n = runs as f64;
                let _ = writeln!(
                    out,
                    "{},{:.3},{:.3},{:.3}",
                    i + 1,
                    s[0] / n,
                    s[1] / n,
                    s[2] / n
                );
            }
            emitter.emit("trace.csv", &out)?;
            json!({
                "scheme": params.kind().label(),
                "tpr": oracle.tpr(),
                "tnr": oracle.tnr(),
                "rounds": horizon,
                "runs": runs,
            })
        }
        Task::Passgrids => {
            let mode = if config.attack.elimination {
                PgMode::Elimination
            } else {
                PgMode::Points
            };
            let mut out = String::from("accuracy,observation_count,cdf_fraction\n");
            let mut medians = Vec::new();
            for (cell, &accuracy) in config.oracle.accuracy.iter().enumerate() {
                let oracle = FaultyOracleConfig::symmetric(accuracy).expect("validated");
                let result = pg_run(
                    &oracle,
                    config.attack.trials,
                    config.attack.max_observations,
                    mode,
                    PgPenalties::default(),
                    base_seed,
                    cell,
                );
                for (obs, frac) in result.cdf() {
                    let _ = writeln!(out, "{accuracy},{obs},{frac:.6}");
                }
                medians.push(json!({ "accuracy": accuracy, "median": result.median() }));
            }
            emitter.emit("passgrids.csv", &out)?;
            json!({ "mode": mode, "trials": config.attack.trials, "medians": medians })
        }
        Task::Mod10 => {
            let mut mean_out = String::from("accuracy,mean_rounds,censored\n");
            let mut cdf_out = String::from("accuracy,rounds,fraction\n");
            let mut summaries = Vec::new();
            for (cell, &accuracy) in config.oracle.accuracy.iter().enumerate() {
                let oracle = FaultyOracleConfig::symmetric(accuracy).expect("validated");
                let result = mod10_run(
                    config.attack.pin_length,
                    &oracle,
                    config.attack.trials,
                    config.attack.max_rounds.min(100_000),
                    base_seed,
                    cell,
                );
                let _ = writeln!(
                    mean_out,
                    "{accuracy},{},{}",
                    fmt_opt(result.mean_rounds, 3),
                    result.censored
                );
                for (rounds, frac) in result.cdf() {
                    let _ = writeln!(cdf_out, "{accuracy},{rounds},{frac:.6}");
                }
                summaries.push(json!({
                    "accuracy": accuracy,
                    "mean_rounds": result.mean_rounds,
                    "std_rounds": result.std_rounds,
                    "censored": result.censored,
                }));
            }
            emitter.emit("mod10_mean.csv", &mean_out)?;
            emitter.emit("mod10_cdf.csv", &cdf_out)?;
            json!({
                "pin_length": config.attack.pin_length,
                "trials": config.attack.trials,
                "cells": summaries,
            })
        }
        Task::Reproduce => {
            let outcomes = super::reference::reproduce(
                &config.attack.cells,
                config.attack.iterations,
                config.attack.trials,
                config.attack.max_rounds,
                base_seed,
            );
            let mut out = String::from(
                "case,scheme,tpr,tnr,iterations,mean_rounds,expected,deviation_pct,tolerance_pct,verdict\n",
            );
            for o in &outcomes {
                let (scheme, tpr, tnr) = match o.cell.kind {
                    super::reference::CellKind::Sweep { scheme, tpr, tnr } => {
                        (scheme.label().to_string(), tpr, tnr)
                    }
                    super::reference::CellKind::Mod10 { accuracy } => {
                        ("mod10".to_string(), accuracy, accuracy)
                    }
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    o.cell.name,
                    scheme,
                    tpr,
                    tnr,
                    o.iterations,
                    fmt_opt(o.measured, 3),
                    o.cell.expected,
                    fmt_opt(o.deviation.map(|d| d * 100.0), 2),
                    o.cell.tolerance * 100.0,
                    if o.pass { "pass" } else { "fail" }
                );
            }
            emitter.emit("reproduce.csv", &out)?;
            let all_pass = outcomes.iter().all(|o| o.pass);
            gate_passed = Some(all_pass);
            json!({
                "cells": outcomes.len(),
                "passed": outcomes.iter().filter(|o| o.pass).count(),
                "gate": if all_pass { "pass" } else { "fail" },
            })
        }
    };

    let manifest = json!({
        "task": config.attack.task.label(),
        "base_seed": base_seed,
        "config": config,
        "files": emitter
            .files
            .iter()
            .map(|(name, sha256, bytes)| json!({
                "name": name,
                "sha256": sha256,
                "bytes": bytes,
            }))
            .collect::<Vec<_>>(),
        "summary": summary,
        "wall_ms": started.elapsed().as_millis() as u64,
    });
    let manifest_text =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    let manifest_path = out_dir.join("manifest.json");
    let tmp = out_dir.join("manifest.json.tmp");
    std::fs::write(&tmp, &manifest_text).map_err(|source| CampaignError::Io {
        path: tmp.display().to_string(),
        source,
    })?;
    std::fs::rename(&tmp, &manifest_path).map_err(|source| CampaignError::Io {
        path: manifest_path.display().to_string(),
        source,
    })?;

    Ok(RunReport {
        out_dir: out_dir.to_path_buf(),
        files: emitter.paths,
        manifest_path,
        gate_passed,
    })
}
