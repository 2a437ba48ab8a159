use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use lgp_cli::commands::{self, TrainOptions};
use lgp_cli::config::{base_strategy, Part, RunConfig, Workspace};
use lgp_cli::looping::{run_loop, LoopOptions};
use lgp_core::evalkit::Schedule;
use lgp_core::features::FeatureConfig;
use lgp_core::par::{self, Exec};

#[derive(Debug, Parser)]
#[command(name = "lgp", version, about = "Premise selection, guided saturation and portfolio construction")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Global {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the dataset split and randomized portfolio search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Directory that `include('...')` paths are resolved against.
    #[arg(long, global = true)]
    include_root: Option<PathBuf>,
    /// Given-clause budget per proof attempt.
    #[arg(long, global = true)]
    budget_gc: Option<usize>,
    /// Soft time limit per proof attempt in seconds.
    #[arg(long, global = true)]
    time_s: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the feature vector of every formula (or clause) of a problem file.
    Featurize {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Featurize the clausal form instead of the formulas.
        #[arg(long)]
        clauses: bool,
    },
    /// Train a clause model from `+1`/`-1` labeled vectors.
    Train {
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        trees: usize,
        #[arg(long, default_value_t = 0.1)]
        learning_rate: f64,
        #[arg(long, default_value_t = 32)]
        leaves: usize,
        #[arg(long)]
        level_wise: bool,
    },
    /// Rank premises for the theorems of one split part.
    Select {
        #[arg(long)]
        selector: String,
        #[arg(long, value_enum, default_value_t = Part::Devel)]
        part: Part,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Saturate one problem file.
    Prove {
        problem: PathBuf,
        /// Where the derivation goes; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Clause model guiding the search.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Also write the training vectors of a successful run.
        #[arg(long)]
        training: Option<PathBuf>,
    },
    /// Alternate proving and learning.
    Loop {
        /// Overrides `loop.rounds` of the config.
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a rankings file against the recorded proofs.
    Eval {
        rankings: PathBuf,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Row label in the report.
        #[arg(long, default_value = "rankings")]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a schedule from an evaluation matrix.
    Portfolio {
        matrix: PathBuf,
        #[arg(long)]
        budget: f64,
        #[arg(long, default_value_t = 1.0)]
        slot: f64,
        /// Select among covers of random half-splits for a small generalization gap.
        #[arg(long)]
        robust: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn stage(&self) -> &'static str {
        match self {
            Command::Featurize { .. } => "featurize",
            Command::Train { .. } => "train",
            Command::Select { .. } => "select",
            Command::Prove { .. } => "prove",
            Command::Loop { .. } => "loop",
            Command::Eval { .. } => "eval",
            Command::Portfolio { .. } => "portfolio",
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stage = cli.command.stage();
    let jobs = cli.global.jobs;
    match par::with_jobs(jobs, move || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(ToString::to_string).collect();
            eprintln!("error\tstage={stage}\tmessage={:?}", chain.join(": "));
            ExitCode::FAILURE
        }
    }
}

fn exec(g: &Global) -> Exec {
    if g.jobs == 1 {
        Exec::Sequential
    } else {
        Exec::auto()
    }
}

fn config(g: &Global) -> Result<Option<RunConfig>> {
    g.config.as_deref().map(RunConfig::load).transpose()
}

fn workspace(g: &Global) -> Result<Workspace> {
    let cfg = config(g)?.context("this command needs --config")?;
    Workspace::load(cfg, g.include_root.as_deref(), g.seed)
}

fn features(g: &Global) -> Result<FeatureConfig> {
    match config(g)? {
        Some(c) => c.feature_config(),
        None => Ok(FeatureConfig::default()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => commands::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Featurize { input, out, clauses } => {
            let rows = commands::featurize(&input, clauses, g.include_root.as_deref(), &features(g)?)?;
            commands::write(&out, &commands::vectors_text(&rows))?;
            println!("vectors\t{}", rows.len());
        }
        Command::Train { data, out, trees, learning_rate, leaves, level_wise } => {
            let opts = TrainOptions { trees, learning_rate, leaves, level_wise };
            let model = commands::train(&data, &opts, exec(g))?;
            commands::write(&out, &model.to_text())?;
            println!("trees\t{}", model.trees.len());
        }
        Command::Select { selector, part, n, out } => {
            let ws = workspace(g)?;
            let r = commands::select(&ws, &selector, part, n, exec(g))?;
            commands::write(&out, &commands::rankings_text(&r))?;
            println!("rankings\t{}", r.len());
        }
        Command::Prove { problem, out, model, training } => {
            let cfg = config(g)?;
            let features = match &cfg {
                Some(c) => c.feature_config()?,
                None => FeatureConfig::default(),
            };
            let strategy = base_strategy(None, g.budget_gc.unwrap_or(2000), g.time_s, &features);
            let o = commands::prove(&problem, g.include_root.as_deref(), strategy, model.as_deref(), training.is_some())?;
            if let Some(proof) = &o.proof {
                emit(out.as_deref(), proof)?;
            }
            if let (Some(path), Some(rows)) = (&training, &o.training) {
                commands::write(path, &commands::vectors_text(rows))?;
            }
            if out.is_some() || o.proof.is_none() {
                println!("status\t{}\tpicks\t{}", o.status.as_str(), o.picks);
            }
        }
        Command::Loop { rounds, out } => {
            let ws = workspace(g)?;
            let rounds = rounds.unwrap_or(ws.cfg.looping.rounds);
            let opts = LoopOptions { rounds, out, budget_gc: g.budget_gc, time_s: g.time_s, exec: exec(g) };
            for r in run_loop(&ws, &opts)? {
                println!("round\t{}\tsolved\t{}\tnew\t{}\tcumulative\t{}", r.round, r.solved, r.new, r.cumulative);
            }
        }
        Command::Eval { rankings, n, name, out } => {
            let ws = workspace(g)?;
            let report = commands::eval(&ws, &rankings, n, &name)?;
            emit(out.as_deref(), &report.to_tsv())?;
        }
        Command::Portfolio { matrix, budget, slot, robust, out } => {
            let s: Schedule = commands::portfolio(&matrix, budget, slot, robust, g.seed.unwrap_or(0), exec(g))?;
            emit(out.as_deref(), &s.to_text())?;
        }
    }
    Ok(())
}
