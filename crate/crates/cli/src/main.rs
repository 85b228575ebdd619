//! `splicestat`: extract features, train, predict, cross-validate and
//! evaluate a splicing detector from the command line.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ConfigFile;
use crate::error::CliResult;

#[derive(Parser, Debug)]
#[command(name = "splicestat", version, about = "Detect spliced images from block-DCT and wavelet statistics")]
struct Cli {
    /// `key = value` settings file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the feature vector of every image in a manifest.
    Extract(commands::extract::ExtractArgs),
    /// Train an SVM on a feature CSV.
    Train(commands::train::TrainArgs),
    /// Classify images with a trained model.
    Predict(commands::predict::PredictArgs),
    /// Compare kernels by k-fold cross-validation.
    Cv(commands::cv::CvArgs),
    /// Per-category accuracy, recall, precision and F1 of a predictions file.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Write a synthetic authentic/spliced image set with a manifest.
    Synth(commands::synth::SynthArgs),
}

fn run(cli: &Cli) -> CliResult {
    let cfg = ConfigFile::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Extract(a) => commands::extract::run(a, &cfg),
        Command::Train(a) => commands::train::run(a, &cfg),
        Command::Predict(a) => commands::predict::run(a, &cfg),
        Command::Cv(a) => commands::cv::run(a, &cfg),
        Command::Evaluate(a) => commands::evaluate::run(a, &cfg),
        Command::Synth(a) => commands::synth::run(a, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            log::error!("{e}");
            e.exit_code()
        }
    }
}
