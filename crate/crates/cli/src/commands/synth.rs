use std::path::PathBuf;

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use splicestat_core::dataset::{Manifest, ManifestRow};
use splicestat_core::synth::NoiseImageConfig;
use splicestat_core::{write_pgm, Category};

use crate::config::ConfigFile;
use crate::error::{CliError, CliResult, Outcome};

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Directory for the PGM files and `manifest.csv`.
    #[arg(long)]
    pub out: PathBuf,
    /// Images per class.
    #[arg(long, default_value_t = 200)]
    pub n_each: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Image side length.
    #[arg(long, default_value_t = 128)]
    pub size: usize,
    /// Side length of the pasted patch.
    #[arg(long, default_value_t = 48)]
    pub patch: usize,
}

pub fn run(args: &SynthArgs, cfg: &ConfigFile) -> CliResult {
    if args.n_each == 0 || args.patch == 0 || args.patch >= args.size {
        return Err(CliError::usage("need n-each ≥ 1 and 0 < patch < size"));
    }
    let seed = cfg.pick(args.seed, "seed")?.unwrap_or(0);
    std::fs::create_dir_all(&args.out)?;
    let gen = NoiseImageConfig { size: args.size, patch: args.patch, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * args.n_each);
    for (i, (img, label)) in gen.dataset(&mut rng, args.n_each).into_iter().enumerate() {
        let name = format!("{label}_{i:05}.pgm");
        write_pgm(args.out.join(&name), &img)?;
        rows.push(ManifestRow { path: name, label, category: Category::Uncategorized });
    }
    let mut buf = Vec::new();
    Manifest::write(&rows, &mut buf)?;
    std::fs::write(args.out.join("manifest.csv"), buf)?;
    log::info!("wrote {} images to {}", rows.len(), args.out.display());
    Ok(Outcome::Success)
}
