//! Thin command-line front end over the campaign runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oras_sim::campaign::{run_campaign, CampaignConfig, Task};

#[derive(Parser)]
#[command(
    name = "oras-sim",
    version,
    about = "Modulus side-channel simulation toolkit"
)]
struct Cli {
    /// Campaign config file (TOML); CLI flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for all random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for CSV reports and the manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 or absent: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SchemeArg {
    /// Scheme preset: bc, ft or hb.
    #[arg(long)]
    scheme: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the exact modulus-bias and expected-weight table as CSV.
    Analyze {
        #[command(flatten)]
        scheme: SchemeArg,
    },
    /// Sweep attack round counts over a TPR/TNR grid.
    Attack {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Comma-separated TPR grid.
        #[arg(long, value_delimiter = ',')]
        tpr: Option<Vec<f64>>,
        /// Comma-separated TNR grid.
        #[arg(long, value_delimiter = ',')]
        tnr: Option<Vec<f64>>,
        /// Attack runs per grid cell.
        #[arg(long)]
        iterations: Option<u64>,
        /// Round cap before a run is censored.
        #[arg(long)]
        max_rounds: Option<u64>,
    },
    /// Record the rank-gap confidence trace of attack runs.
    Trace {
        #[command(flatten)]
        scheme: SchemeArg,
        #[arg(long)]
        tpr: Option<f64>,
        #[arg(long)]
        tnr: Option<f64>,
        /// Counted rounds to record.
        #[arg(long)]
        rounds: Option<u64>,
        /// Runs to average the trace over.
        #[arg(long)]
        runs: Option<u64>,
    },
    /// Recovery CDF for the grid-based multiply-add scheme.
    Passgrids {
        /// Comma-separated symmetric oracle accuracies.
        #[arg(long, value_delimiter = ',')]
        accuracy: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<u64>,
        /// Observation cap per trial.
        #[arg(long)]
        max_obs: Option<u64>,
        /// Hard candidate pruning instead of points.
        #[arg(long)]
        elimination: bool,
    },
    /// Recovery statistics for the one-time-pad PIN scheme.
    Mod10 {
        #[arg(long, value_delimiter = ',')]
        accuracy: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        pin_length: Option<usize>,
    },
    /// Rerun stored reference cells and gate on their tolerances.
    Reproduce {
        /// Comma-separated cell names; omit for all.
        #[arg(long, value_delimiter = ',')]
        cells: Option<Vec<String>>,
        #[arg(long)]
        iterations: Option<u64>,
        /// Trials for the PIN-scheme cells.
        #[arg(long)]
        trials: Option<u64>,
    },
}

fn apply(cli: &Cli, config: &mut CampaignConfig) {
    if let Some(seed) = cli.seed {
        config.output.base_seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output.dir = out.display().to_string();
    }
    let set_scheme = |config: &mut CampaignConfig, scheme: &SchemeArg| {
        if let Some(name) = &scheme.scheme {
            config.scheme = Default::default();
            config.scheme.preset = Some(name.clone());
        }
    };
    match &cli.command {
        Command::Analyze { scheme } => {
            config.attack.task = Task::Analyze;
            set_scheme(config, scheme);
        }
        Command::Attack {
            scheme,
            tpr,
            tnr,
            iterations,
            max_rounds,
        } => {
            config.attack.task = Task::Sweep;
            set_scheme(config, scheme);
            if let Some(tpr) = tpr {
                config.oracle.tpr = tpr.clone();
            }
            if let Some(tnr) = tnr {
                config.oracle.tnr = tnr.clone();
            }
            if let Some(i) = iterations {
                config.attack.iterations = *i;
            }
            if let Some(m) = max_rounds {
                config.attack.max_rounds = *m;
            }
        }
        Command::Trace {
            scheme,
            tpr,
            tnr,
            rounds,
            runs,
        } => {
            config.attack.task = Task::Trace;
            set_scheme(config, scheme);
            if let Some(tpr) = tpr {
                config.oracle.tpr = vec![*tpr];
            }
            if let Some(tnr) = tnr {
                config.oracle.tnr = vec![*tnr];
            }
            if let Some(r) = rounds {
                config.attack.trace_rounds = *r;
            }
            if let Some(r) = runs {
                config.attack.trace_runs = *r;
            }
        }
        Command::Passgrids {
            accuracy,
            trials,
            max_obs,
            elimination,
        } => {
            config.attack.task = Task::Passgrids;
            if let Some(acc) = accuracy {
                config.oracle.accuracy = acc.clone();
            }
            if let Some(t) = trials {
                config.attack.trials = *t;
            }
            if let Some(m) = max_obs {
                config.attack.max_observations = *m;
            }
            if *elimination {
                config.attack.elimination = true;
            }
        }
        Command::Mod10 {
            accuracy,
            trials,
            pin_length,
        } => {
            config.attack.task = Task::Mod10;
            if let Some(acc) = accuracy {
                config.oracle.accuracy = acc.clone();
            }
            if let Some(t) = trials {
                config.attack.trials = *t;
            }
            if let Some(p) = pin_length {
                config.attack.pin_length = *p;
            }
        }
        Command::Reproduce {
            cells,
            iterations,
            trials,
        } => {
            config.attack.task = Task::Reproduce;
            if let Some(cells) = cells {
                config.attack.cells = cells.clone();
            }
            if let Some(i) = iterations {
                config.attack.iterations = *i;
            }
            if let Some(t) = trials {
                config.attack.trials = *t;
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
            {
                eprintln!("error: cannot configure {threads} threads: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let mut config = match &cli.config {
        Some(path) => match CampaignConfig::load(path) {
            Ok(config) => config,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => CampaignConfig::default(),
    };
    apply(&cli, &mut config);
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let out_dir = PathBuf::from(&config.output.dir);
    match run_campaign(&config, &out_dir) {
        Ok(report) => {
            for file in &report.files {
                println!("wrote {}", file.display());
            }
            println!("wrote {}", report.manifest_path.display());
            match report.gate_passed {
                Some(false) => {
                    eprintln!("regression gate failed; see reproduce.csv");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
