use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wordprobe_cli::commands::{self, Ctx};
use wordprobe_cli::config::LoadedConfig;

#[derive(Parser)]
#[command(
    name = "wordprobe",
    version,
    about = "Compare word-vector representations by similarity structure and linear decodability"
)]
struct Cli {
    /// Run configuration file (TOML)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads (default: all logical cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Override the seed recorded in the config
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
    /// Override the configured output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a run configuration and the files it references
    Validate,
    /// Train embeddings from counts or similarity judgments
    Train {
        #[command(subcommand)]
        model: TrainCommand,
    },
    /// Correlate the similarity structure of every representation pair
    Rsa,
    /// Probe every representation against every norm
    Probe,
    /// Probe ensembles alongside their members and report paired differences
    Ensemble,
    /// Re-render svg figures from the json artifacts of an earlier run
    Report,
}

#[derive(Subcommand)]
enum TrainCommand {
    /// Positive-PMI reweighting of co-occurrence counts, then truncated svd
    PpmiSvd {
        /// Counts csv with header "cue,response,count"
        #[arg(long, value_name = "FILE")]
        counts: PathBuf,
        /// Embedding dimensionality
        #[arg(short, long)]
        k: usize,
        /// Output embedding file (header-text format)
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Truncated svd of aggregated pairwise similarity judgments
    SimSvd {
        /// Ratings csv files with header "word1,word2,value,scale_min,scale_max"
        #[arg(long, value_name = "FILE", num_args = 1.., required = true)]
        ratings: Vec<PathBuf>,
        /// Embedding dimensionality
        #[arg(short, long)]
        k: usize,
        /// Output embedding file (header-text format)
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Skip-gram embeddings trained against a full softmax objective
    SgSoftmax {
        /// Counts csv with header "cue,response,count"; each count expands
        /// to that many training pairs
        #[arg(long, value_name = "FILE")]
        counts: PathBuf,
        /// Embedding dimensionality
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        epochs: usize,
        #[arg(long, default_value_t = 0.05)]
        learning_rate: f64,
        /// Output file for cue (input) vectors
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Optional output file for response (output) vectors
        #[arg(long, value_name = "FILE")]
        responses_out: Option<PathBuf>,
    },
}

enum Failure {
    Config(Vec<String>),
    Runtime(anyhow::Error),
}

fn config_path(cli: &Cli) -> Result<PathBuf, Failure> {
    cli.config
        .clone()
        .ok_or_else(|| Failure::Config(vec!["--config is required for this command".into()]))
}

fn load_ctx(cli: &Cli) -> Result<Ctx, Failure> {
    let path = config_path(cli)?;
    let loaded = LoadedConfig::load(&path).map_err(|m| Failure::Config(vec![m]))?;
    Ok(Ctx::new(loaded, cli.seed, cli.out.clone()))
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate => {
            let path = config_path(cli)?;
            let issues = commands::cmd_validate(&path);
            if issues.is_empty() {
                println!("configuration ok");
                Ok(())
            } else {
                Err(Failure::Config(issues))
            }
        }
        Command::Train { model } => {
            let result = match model {
                TrainCommand::PpmiSvd { counts, k, out } => {
                    commands::cmd_train_ppmi_svd(counts, *k, out)
                }
                TrainCommand::SimSvd { ratings, k, out } => {
                    commands::cmd_train_sim_svd(ratings, *k, out)
                }
                TrainCommand::SgSoftmax {
                    counts,
                    dim,
                    epochs,
                    learning_rate,
                    out,
                    responses_out,
                } => commands::cmd_train_sg_softmax(
                    counts,
                    *dim,
                    *epochs,
                    *learning_rate,
                    cli.seed.unwrap_or(0),
                    out,
                    responses_out.as_deref(),
                ),
            };
            result.map_err(Failure::Runtime)
        }
        Command::Rsa => {
            let ctx = load_ctx(cli)?;
            commands::cmd_rsa(&ctx).map(drop).map_err(Failure::Runtime)
        }
        Command::Probe => {
            let ctx = load_ctx(cli)?;
            commands::cmd_probe(&ctx).map(drop).map_err(Failure::Runtime)
        }
        Command::Ensemble => {
            let ctx = load_ctx(cli)?;
            commands::cmd_ensemble(&ctx)
                .map(drop)
                .map_err(Failure::Runtime)
        }
        Command::Report => {
            let ctx = load_ctx(cli)?;
            commands::cmd_report(&ctx)
                .map(drop)
                .map_err(Failure::Runtime)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // results are independent of the pool size; only throughput changes
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(issues)) => {
            for issue in issues {
                eprintln!("config error: {issue}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
