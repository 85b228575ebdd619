pub mod cv;
pub mod evaluate;
pub mod extract;
pub mod predict;
pub mod synth;
pub mod train;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use splicestat_core::dataset::{Manifest, RejectedRow};

use crate::error::{CliError, CliResult};

/// Writes `body` to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, body: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(
                File::create(p).map_err(|e| CliError::usage(format!("cannot create {}: {e}", p.display())))?,
            );
            w.write_all(body)?;
            w.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body)?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn load_manifest(path: &Path) -> CliResult<(Manifest, Vec<RejectedRow>)> {
    let (manifest, rejected) =
        Manifest::load(path).map_err(|e| CliError::usage(format!("manifest {}: {e}", path.display())))?;
    for r in &rejected {
        log::error!("{}: line {}: {}", path.display(), r.line, r.message);
    }
    if manifest.rows.is_empty() && rejected.is_empty() {
        return Err(CliError::usage(format!("manifest {} has no rows", path.display())));
    }
    Ok((manifest, rejected))
}
