pub mod anneal;
pub mod clean;
pub mod cutoff;
pub mod sweep;
pub mod train_demo;

use crate::CliError;

/// Per-trial seed stream derived from the base seed.
pub fn trial_seed(base: u64, trial: usize) -> u64 {
    base.wrapping_add((trial as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Writes the rows as-is; callers have already formatted each line.
pub fn write_csv(path: &std::path::Path, header: &str, lines: &[String]) -> Result<(), CliError> {
    use std::io::Write;
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "{header}")?;
    for line in lines {
        w.write_all(line.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}
