//! `zloss cutoff`: read a `logit,label` file, report the inferred decision
//! cutoff on stdout, optionally also as CSV.

use std::path::Path;

use zloss_core::cutoff::{class_inlier_mask, optimal_logit_cutoff, optimal_prob_cutoff_skewnorm};
use zloss_core::{Density, Error};

use super::write_csv;
use crate::csvfmt::{csv_line, fmt_g9};
use crate::manifest::RunManifest;
use crate::{info, Cli, CliError, CutoffArgs, CutoffMethodFlag};

pub const HEADER: &str = "method,logit_cutoff,prob_cutoff,inliers0,inliers1";

pub fn run(cli: &Cli, args: &CutoffArgs) -> Result<(), CliError> {
    let (logits, labels) = read_logit_file(&args.input)?;

    let result = match args.method {
        CutoffMethodFlag::Gaussian => optimal_logit_cutoff(&logits, &labels, args.z_threshold),
        CutoffMethodFlag::Skewnorm => optimal_prob_cutoff_skewnorm(&logits, &labels, args.z_threshold),
    };
    let result = result.map_err(|e| annotate_insufficient(e, &logits, &labels, args))?;

    match args.method {
        CutoffMethodFlag::Gaussian => {
            println!("logit_cutoff: {}", fmt_g9(result.logit_cutoff.expect("gaussian route")));
            println!("prob_cutoff: {}", fmt_g9(result.prob_cutoff));
        }
        CutoffMethodFlag::Skewnorm => {
            println!("prob_cutoff: {}", fmt_g9(result.prob_cutoff));
        }
    }
    print_fit(cli, "class0", &result.class0_fit);
    print_fit(cli, "class1", &result.class1_fit);
    info(cli, format!("inliers: class0={} class1={}", result.inlier_counts.0, result.inlier_counts.1));

    if let Some(out) = &cli.out {
        let line = csv_line(&[
            match args.method {
                CutoffMethodFlag::Gaussian => "gaussian".to_string(),
                CutoffMethodFlag::Skewnorm => "skewnorm".to_string(),
            },
            result.logit_cutoff.map(fmt_g9).unwrap_or_default(),
            fmt_g9(result.prob_cutoff),
            result.inlier_counts.0.to_string(),
            result.inlier_counts.1.to_string(),
        ]);
        write_csv(out, HEADER, std::slice::from_ref(&line))?;
        let mut m = RunManifest::new("cutoff", cli.seed);
        m.param("input", args.input.display())
            .param("method", format!("{:?}", args.method).to_lowercase())
            .param("z_threshold", args.z_threshold);
        m.write_beside(out)?;
        info(cli, format!("wrote {}", out.display()));
    }
    Ok(())
}

fn print_fit(cli: &Cli, name: &str, fit: &Density) {
    match fit {
        Density::Gaussian(g) => info(cli, format!("{name}: mu={} sigma={}", fmt_g9(g.mu), fmt_g9(g.sigma))),
        Density::SkewNormal(s) => info(
            cli,
            format!("{name}: shape={} loc={} scale={}", fmt_g9(s.shape), fmt_g9(s.loc), fmt_g9(s.scale)),
        ),
    }
}

/// Attaches the per-class inlier counts to an insufficient-data failure.
fn annotate_insufficient(e: Error, logits: &[f64], labels: &[u8], args: &CutoffArgs) -> CliError {
    if let Error::InsufficientData(msg) = &e {
        let counts = class_inlier_mask(logits, labels, args.z_threshold)
            .map(|mask| {
                let mut c = [0usize; 2];
                for i in 0..labels.len() {
                    if mask[i] {
                        c[labels[i] as usize] += 1;
                    }
                }
                c
            })
            .unwrap_or([0, 0]);
        return CliError::Runtime(format!(
            "{msg} (inlier counts: class0={}, class1={})",
            counts[0], counts[1]
        ));
    }
    CliError::from(e)
}

/// Reads the `logit,label` CSV, reporting malformed lines as usage errors.
fn read_logit_file(path: &Path) -> Result<(Vec<f64>, Vec<u8>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;

    let headers = reader
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let expected = ["logit", "label"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(CliError::Usage(format!(
            "{}: header must be `logit,label`, got `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut logits = Vec::new();
    let mut labels = Vec::new();
    let mut bad_lines = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line_no = idx + 2; // 1-based, after the header
        let Ok(record) = record else {
            bad_lines.push(line_no);
            continue;
        };
        let parsed = (|| {
            let logit: f64 = record.get(0)?.parse().ok()?;
            let label: f64 = record.get(1)?.parse().ok()?;
            let label = if label == 0.0 {
                0u8
            } else if label == 1.0 {
                1u8
            } else {
                return None;
            };
            Some((logit, label))
        })();
        match parsed {
            Some((logit, label)) => {
                logits.push(logit);
                labels.push(label);
            }
            None => bad_lines.push(line_no),
        }
    }
    if !bad_lines.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: malformed rows at lines {}",
            path.display(),
            join_lines(&bad_lines)
        )));
    }
    if logits.is_empty() {
        return Err(CliError::Runtime(format!("{}: no data rows", path.display())));
    }
    Ok((logits, labels))
}

pub(crate) fn join_lines(lines: &[usize]) -> String {
    lines.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
}
