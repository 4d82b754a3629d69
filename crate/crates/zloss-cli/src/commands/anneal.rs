//! `zloss anneal-table`: the linear sigma schedule, one row per epoch.

use zloss_core::loss::sigma_threshold;

use super::write_csv;
use crate::csvfmt::{csv_line, fmt_g9};
use crate::manifest::RunManifest;
use crate::{info, require_out, AnnealArgs, Cli, CliError};

pub const HEADER: &str = "epoch,sigma";

pub fn run(cli: &Cli, args: &AnnealArgs) -> Result<(), CliError> {
    let out = require_out(cli)?;
    if args.epochs == 0 {
        return Err(CliError::Usage("--epochs must be >= 1".into()));
    }

    let mut lines = Vec::with_capacity(args.epochs + 1);
    for epoch in 0..=args.epochs {
        let sigma = sigma_threshold(epoch, args.epochs, args.start, args.end)?;
        lines.push(csv_line(&[epoch.to_string(), fmt_g9(sigma)]));
    }
    write_csv(out, HEADER, &lines)?;

    let mut m = RunManifest::new("anneal-table", cli.seed);
    m.param("epochs", args.epochs).param("start", args.start).param("end", args.end);
    m.write_beside(out)?;
    info(cli, format!("wrote {} ({} rows)", out.display(), lines.len()));
    Ok(())
}
