use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nli_cli::{
    parse_grid, run_experiment, run_gridsearch, run_stats, CliError, ExperimentConfig, Overrides,
};
use nli_core::synthetic::{write_corpus, SyntheticCorpus};

/// Native language identification from syntactic features.
#[derive(Parser)]
#[command(name = "nli", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Seed; falls back to the config file, then to NLI_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Function-word list, one word per line.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        ExperimentConfig::load(
            &self.config,
            &Overrides {
                seed: self.seed,
                lexicon: self.lexicon.clone(),
                out_dir: self.out.clone(),
            },
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cross-validate every feature family and the full combination, then
    /// write reports and the confusion-matrix heatmap.
    Run(ConfigArgs),
    /// Print per-L1 statistics of the assembled documents as CSV.
    Stats(ConfigArgs),
    /// Cross-validate once per C value and report the best.
    Gridsearch {
        #[command(flatten)]
        args: ConfigArgs,
        /// `1e-6..1` for every decade in the range, or a comma-separated list.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Write a synthetic annotated corpus and a matching config.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        texts_per_class: usize,
    },
}

fn synth(out: PathBuf, seed: u64, texts_per_class: usize) -> Result<(), CliError> {
    let texts = SyntheticCorpus {
        texts_per_class,
        seed,
        ..Default::default()
    }
    .generate();
    write_corpus(&out.join("corpus"), &texts)?;
    let config = serde_json::json!({
        "manifest": "corpus/manifest.json",
        "genre": "essay",
        "labels": ["AFG", "AL", "ARA", "AZ", "IR"],
        "target_tokens": 60,
        "features": { "function_words": true, "pos_orders": [1, 2, 3], "cfg_rules": true },
        "c": 1.0,
        "k": 10,
        "seed": seed,
        "out_dir": "out"
    });
    let path = out.join("exp.json");
    std::fs::write(
        &path,
        serde_json::to_string_pretty(&config).expect("json") + "\n",
    )
    .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let outcome = run_experiment(&args.load()?)?;
            print!("{}", nli_cli::experiment::table_csv(&outcome.report.table));
            println!("artifacts written to {}", outcome.out_dir.display());
        }
        Command::Stats(args) => print!("{}", run_stats(&args.load()?)?.to_csv()),
        Command::Gridsearch { args, grid } => {
            let grid = grid.as_deref().map(parse_grid).transpose()?;
            let result = run_gridsearch(&args.load()?, grid)?;
            println!("c,accuracy");
            for (c, acc) in &result.table {
                println!("{c:e},{acc}");
            }
            println!(
                "best C = {:e} (accuracy {})",
                result.best_c, result.best_accuracy
            );
        }
        Command::Synth {
            out,
            seed,
            texts_per_class,
        } => synth(out, seed, texts_per_class)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nli: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
