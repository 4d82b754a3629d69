//! `zloss sweep`: detection quality per (batch size, trial) plus a
//! full-dataset row per trial.

use rayon::prelude::*;

use zloss_core::detect::{detect_batchwise, detect_full, DetectionData, DetectionReport};
use zloss_core::synth::{gen_classification, gen_regression};

use super::{trial_seed, write_csv};
use crate::csvfmt::{csv_line, fmt_g9};
use crate::manifest::RunManifest;
use crate::{info, require_out, Cli, CliError, SweepArgs, Task};

pub const HEADER: &str = "task,method,batch_size,trial,sigma,n,outlier_frac,tp,fp,fn,tn,precision,recall,f1";

pub fn run(cli: &Cli, args: &SweepArgs) -> Result<(), CliError> {
    let out = require_out(cli)?;
    if args.batch_sizes.is_empty() {
        return Err(CliError::Usage("--batch-sizes must not be empty".into()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be >= 1".into()));
    }

    let trial_rows: Vec<Vec<String>> = (0..args.trials)
        .into_par_iter()
        .map(|trial| run_trial(cli, args, trial))
        .collect::<Result<_, _>>()?;
    let lines: Vec<String> = trial_rows.into_iter().flatten().collect();

    write_csv(out, HEADER, &lines)?;
    manifest(cli, args).write_beside(out)?;
    if args.svg {
        let svg_path = out.with_extension("svg");
        crate::svg::render_f1_chart(&svg_path, HEADER, &lines)?;
        info(cli, format!("wrote {}", svg_path.display()));
    }
    info(cli, format!("wrote {} ({} rows)", out.display(), lines.len()));
    Ok(())
}

fn run_trial(cli: &Cli, args: &SweepArgs, trial: usize) -> Result<Vec<String>, CliError> {
    let seed = trial_seed(cli.seed, trial);
    let mut rows = Vec::with_capacity(args.batch_sizes.len() + 1);

    match args.task {
        Task::Regression => {
            let set = gen_regression(args.n, args.d, args.outlier_frac, args.margin, args.noise_std, seed)?;
            let data = DetectionData::Regression { targets: &set.y };
            for &b in &args.batch_sizes {
                let r = detect_batchwise(&data, &set.outlier_flag, b, args.sigma, seed)?;
                rows.push(render_row(args, trial, &r));
            }
            let r = detect_full(&data, &set.outlier_flag, args.sigma)?;
            rows.push(render_row(args, trial, &r));
        }
        Task::Classification => {
            let set = gen_classification(args.n, args.d, args.outlier_frac, args.cluster_sep, seed)?;
            let scores = set.axis_scores();
            let data = DetectionData::Classification { scores: &scores, labels: &set.label };
            for &b in &args.batch_sizes {
                let r = detect_batchwise(&data, &set.outlier_flag, b, args.sigma, seed)?;
                rows.push(render_row(args, trial, &r));
            }
            let r = detect_full(&data, &set.outlier_flag, args.sigma)?;
            rows.push(render_row(args, trial, &r));
        }
    }
    Ok(rows)
}

fn render_row(args: &SweepArgs, trial: usize, r: &DetectionReport) -> String {
    csv_line(&[
        args.task.to_string(),
        r.method.to_string(),
        r.batch_size.to_string(),
        trial.to_string(),
        fmt_g9(r.threshold),
        args.n.to_string(),
        fmt_g9(args.outlier_frac),
        r.true_positives.to_string(),
        r.false_positives.to_string(),
        r.false_negatives.to_string(),
        r.true_negatives.to_string(),
        fmt_g9(r.precision),
        fmt_g9(r.recall),
        fmt_g9(r.f1),
    ])
}

fn manifest(cli: &Cli, args: &SweepArgs) -> RunManifest {
    let mut m = RunManifest::new("sweep", cli.seed);
    m.param("task", args.task)
        .param("n", args.n)
        .param("d", args.d)
        .param("outlier_frac", args.outlier_frac)
        .param("margin", args.margin)
        .param("noise_std", args.noise_std)
        .param("cluster_sep", args.cluster_sep)
        .param("sigma", args.sigma)
        .param(
            "batch_sizes",
            args.batch_sizes.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
        )
        .param("trials", args.trials)
        .param("svg", args.svg);
    m
}
