//! `zloss clean`: append `z_score,inlier` to a data file, masking over the
//! whole file. The input header picks the mode:
//! `id,target` (target z), `id,prediction,target` (squared-error z), or
//! `id,logit,label` (per-class z).

use std::path::Path;

use zloss_core::cutoff::class_z_scores;
use zloss_core::loss::DEFAULT_EPS;
use zloss_core::stats::{mean_std, z_scores};

use super::cutoff::join_lines;
use super::write_csv;
use crate::csvfmt::{csv_line, fmt_g9};
use crate::manifest::RunManifest;
use crate::{info, require_out, Cli, CleanArgs, CliError};

enum CleanMode {
    TargetZ,
    ErrorZ,
    Classification,
}

pub fn run(cli: &Cli, args: &CleanArgs) -> Result<(), CliError> {
    let out = require_out(cli)?;
    let (mode, header, rows) = read_rows(&args.input)?;
    if rows.is_empty() {
        return Err(CliError::Runtime(format!("{}: no data rows", args.input.display())));
    }

    let z = match &mode {
        CleanMode::TargetZ => {
            let targets: Vec<f64> = rows.iter().map(|r| r.values[0]).collect();
            whole_file_z(&targets)?
        }
        CleanMode::ErrorZ => {
            let errors: Vec<f64> = rows.iter().map(|r| (r.values[0] - r.values[1]).powi(2)).collect();
            whole_file_z(&errors)?
        }
        CleanMode::Classification => {
            let logits: Vec<f64> = rows.iter().map(|r| r.values[0]).collect();
            let labels: Vec<u8> = rows.iter().map(|r| r.values[1] as u8).collect();
            class_z_scores(&logits, &labels)?
        }
    };

    let lines: Vec<String> = rows
        .iter()
        .zip(&z)
        .map(|(row, &zi)| {
            let mut fields = row.raw.clone();
            fields.push(fmt_g9(zi));
            fields.push((zi.abs() <= args.sigma).to_string());
            csv_line(&fields)
        })
        .collect();

    let out_header = format!("{header},z_score,inlier");
    write_csv(out, &out_header, &lines)?;

    let mut m = RunManifest::new("clean", cli.seed);
    m.param("input", args.input.display()).param("sigma", args.sigma);
    m.write_beside(out)?;
    info(cli, format!("wrote {} ({} rows)", out.display(), lines.len()));
    Ok(())
}

/// Target/error z over the whole file; a single row standardizes to zero,
/// mirroring the kernels' singleton rule.
fn whole_file_z(values: &[f64]) -> Result<Vec<f64>, CliError> {
    if values.len() == 1 {
        return Ok(vec![0.0]);
    }
    let stats = mean_std(values, 1)?;
    Ok(z_scores(values, &stats, DEFAULT_EPS))
}

struct Row {
    /// Original fields, passed through untouched.
    raw: Vec<String>,
    /// Parsed numeric fields (mode-dependent), excluding the id.
    values: Vec<f64>,
}

fn read_rows(path: &Path) -> Result<(CleanMode, String, Vec<Row>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        .iter()
        .map(|h| h.to_string())
        .collect();
    let mode = match headers.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["id", "target"] => CleanMode::TargetZ,
        ["id", "prediction", "target"] => CleanMode::ErrorZ,
        ["id", "logit", "label"] => CleanMode::Classification,
        _ => {
            return Err(CliError::Usage(format!(
                "{}: header must be `id,target`, `id,prediction,target`, or `id,logit,label`, got `{}`",
                path.display(),
                headers.join(",")
            )))
        }
    };
    let width = headers.len();

    let mut rows = Vec::new();
    let mut bad_lines = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line_no = idx + 2;
        let Ok(record) = record else {
            bad_lines.push(line_no);
            continue;
        };
        if record.len() != width {
            bad_lines.push(line_no);
            continue;
        }
        let raw: Vec<String> = record.iter().map(|f| f.to_string()).collect();
        let mut values = Vec::with_capacity(width - 1);
        let mut ok = true;
        for field in record.iter().skip(1) {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            if let CleanMode::Classification = mode {
                let label = values[1];
                if label != 0.0 && label != 1.0 {
                    ok = false;
                }
            }
        }
        if ok {
            rows.push(Row { raw, values });
        } else {
            bad_lines.push(line_no);
        }
    }
    if !bad_lines.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: malformed rows at lines {}",
            path.display(),
            join_lines(&bad_lines)
        )));
    }
    Ok((mode, headers.join(","), rows))
}
