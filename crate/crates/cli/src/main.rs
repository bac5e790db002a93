//! `reportsent`: ingest, label, score, analyze and synth commands.
//!
//! Exit codes: 0 success, 1 configuration error, 2 data error, 3 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reportsent::econometrics::{SeType, TTestMode};
use reportsent::pipeline::{cmd_analyze, cmd_ingest, cmd_label, cmd_score, cmd_synth, RunConfig, Scorer};
use reportsent::report::StarPreset;
use reportsent::synthkit::{Noise, SynthSpec};
use reportsent::{Error, ErrorKind, Result};

#[derive(Parser, Debug)]
#[command(
    name = "reportsent",
    version,
    about = "Analyst-report sentiment and next-day stock performance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalFlags,
}

#[derive(Args, Debug)]
struct GlobalFlags {
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the configuration)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    scorer: Option<ScorerArg>,
    #[arg(long, global = true, value_enum)]
    stars: Option<StarsArg>,
    #[arg(long, global = true, value_enum)]
    se: Option<SeArg>,
    #[arg(long, global = true, value_enum)]
    ttest: Option<TTestArg>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate inputs and write the cleaned corpus, metrics and an ingest report
    Ingest,
    /// Label the training-range reports from their 3-day excess returns
    Label,
    /// Write the score file in use and the majority-count classes
    Score,
    /// Run the pooled, industry and mean-difference analyses on the test range
    Analyze,
    /// Generate a synthetic dataset with planted effects
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    n_stocks: usize,
    /// Test-range trading days with reports
    #[arg(long, default_value_t = 250)]
    n_days: usize,
    #[arg(long, default_value_t = 40)]
    n_train_days: usize,
    #[arg(long, default_value_t = 40)]
    reports_per_day: usize,
    /// Multiplier applied to every default noise scale
    #[arg(long, default_value_t = 1.0)]
    noise_scale: f64,
    /// Plant no sentiment effects
    #[arg(long)]
    null: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScorerArg {
    Lexicon,
    External,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StarsArg {
    Table3,
    Table4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeArg {
    Classical,
    Robust,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TTestArg {
    Welch,
    Pooled,
}

fn load_config(flags: &GlobalFlags) -> Result<RunConfig> {
    let mut cfg = match &flags.config {
        Some(p) => RunConfig::load(p)?,
        None => {
            let mut c = RunConfig::default();
            c.resolve_paths(Path::new("."));
            c
        }
    };
    if let Some(o) = &flags.out {
        cfg.out = o.clone();
    }
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    if let Some(s) = flags.scorer {
        cfg.scorer = match s {
            ScorerArg::Lexicon => Scorer::Lexicon,
            ScorerArg::External => Scorer::External,
        };
    }
    if let Some(s) = flags.stars {
        cfg.stars = match s {
            StarsArg::Table3 => StarPreset::Table3,
            StarsArg::Table4 => StarPreset::Table4,
        };
    }
    if let Some(s) = flags.se {
        cfg.se = match s {
            SeArg::Classical => SeType::Classical,
            SeArg::Robust => SeType::Robust,
        };
    }
    if let Some(t) = flags.ttest {
        cfg.ttest = match t {
            TTestArg::Welch => TTestMode::Welch,
            TTestArg::Pooled => TTestMode::Pooled,
        };
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(args) => {
            let out = cli
                .global
                .out
                .clone()
                .ok_or_else(|| Error::Config("synth needs --out <dir>".into()))?;
            let mut spec = SynthSpec {
                seed: cli.global.seed.unwrap_or(0),
                n_stocks: args.n_stocks,
                n_days: args.n_days,
                n_train_days: args.n_train_days,
                reports_per_day: args.reports_per_day,
                noise: Noise::default().scaled(args.noise_scale),
                ..SynthSpec::default()
            };
            if args.null {
                spec.plants = spec.plants.without_sentiment();
            }
            let truth = cmd_synth(&spec, &out)?;
            println!(
                "synth: {} reports, train {}..{}, test {}..{} -> {}",
                truth.n_reports,
                truth.train_range.0,
                truth.train_range.1,
                truth.test_range.0,
                truth.test_range.1,
                out.display()
            );
        }
        Command::Ingest => {
            let cfg = load_config(&cli.global)?;
            let r = cmd_ingest(&cfg)?;
            println!(
                "ingest: {} reports ({} rejected), {} bars ({} rejected), {} metric rows -> {}",
                r.corpus.accepted,
                r.corpus.rejected,
                r.market.bars,
                r.market.bar_rejects.len(),
                r.metric_rows,
                cfg.out.display()
            );
            for e in r.corpus.rejects.iter().take(20) {
                eprintln!("corpus reject {e}");
            }
        }
        Command::Label => {
            let cfg = load_config(&cli.global)?;
            let r = cmd_label(&cfg)?;
            let dropped: usize = r.drops.values().sum();
            println!(
                "label: {} labeled (positive {}, neutral {}, negative {}), {} dropped -> {}",
                r.pool_size,
                r.positive,
                r.neutral,
                r.negative,
                dropped,
                cfg.out.display()
            );
        }
        Command::Score => {
            let cfg = load_config(&cli.global)?;
            let r = cmd_score(&cfg)?;
            println!(
                "score: {} scored ({} rejected); majority classes positive {}, neutral {}, negative {} -> {}",
                r.scored,
                r.rejected,
                r.majority_positive,
                r.majority_neutral,
                r.majority_negative,
                cfg.out.display()
            );
        }
        Command::Analyze => {
            let cfg = load_config(&cli.global)?;
            let a = cmd_analyze(&cfg)?;
            let dropped: usize = a.report.drops.values().sum();
            println!(
                "analyze: {} panel rows ({} dropped), {} sectors skipped -> {}",
                a.report.panel_rows,
                dropped,
                a.report.skipped_sectors.len(),
                cfg.out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e.kind() {
                ErrorKind::Config => "configuration error",
                ErrorKind::Data => "data error",
                ErrorKind::Numerical => "numerical failure",
            };
            eprintln!("reportsent: {kind}: {e}");
            ExitCode::from(e.kind().exit_code() as u8)
        }
    }
}
