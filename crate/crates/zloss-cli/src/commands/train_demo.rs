//! `zloss train-demo`: one training run, one CSV row per epoch.

use zloss_core::loss::{MaskMode, SigmaSchedule};
use zloss_core::synth::{gen_classification, gen_regression};
use zloss_core::train::{train, LossKind, ModelKind, ThresholdPolicy, TrainConfig, TrainData};

use super::write_csv;
use crate::csvfmt::{csv_line, fmt_g9};
use crate::manifest::RunManifest;
use crate::{info, require_out, Cli, CliError, LossFlag, MaskModeFlag, ModelFlag, Task, TrainDemoArgs};

pub const HEADER: &str = "epoch,sigma,train_loss,masked_out_count,model_metric";

pub fn run(cli: &Cli, args: &TrainDemoArgs) -> Result<(), CliError> {
    let out = require_out(cli)?;
    let loss = match args.loss {
        LossFlag::Zmse => LossKind::ZMse,
        LossFlag::Mse => LossKind::Mse,
        LossFlag::Zbce => LossKind::ZBce,
        LossFlag::Bce => LossKind::Bce,
    };
    if loss.is_regression() != (args.task == Task::Regression) {
        return Err(CliError::Usage(format!(
            "--loss {:?} does not fit --task {}",
            args.loss, args.task
        )));
    }
    if args.epochs == 0 {
        return Err(CliError::Usage("--epochs must be >= 1".into()));
    }

    let threshold = match args.threshold {
        Some(t) if t > 0.0 => ThresholdPolicy::Fixed(t),
        Some(t) => return Err(CliError::Usage(format!("--threshold must be > 0, got {t}"))),
        None => ThresholdPolicy::Annealed(parse_anneal(&args.anneal, args.epochs)?),
    };
    let model = match args.model.unwrap_or(match args.task {
        Task::Regression => ModelFlag::Linear,
        Task::Classification => ModelFlag::Logistic,
    }) {
        ModelFlag::Linear => ModelKind::Linear,
        ModelFlag::Logistic => ModelKind::Logistic,
        ModelFlag::Mlp => ModelKind::Mlp { width: args.width },
    };
    let config = TrainConfig {
        epochs: args.epochs,
        batch_size: args.batch_size,
        learning_rate: args.lr,
        loss,
        mask_mode: match args.mask_mode {
            MaskModeFlag::Target => MaskMode::TargetZ,
            MaskModeFlag::Error => MaskMode::ErrorZ,
        },
        threshold,
        seed: cli.seed,
        model,
    };

    let stats = match args.task {
        Task::Regression => {
            let set = gen_regression(args.n, args.d, args.outlier_frac, args.margin, args.noise_std, cli.seed)?;
            train(&TrainData::Regression(&set), &config)?.1
        }
        Task::Classification => {
            let set = gen_classification(args.n, args.d, args.outlier_frac, args.cluster_sep, cli.seed)?;
            train(&TrainData::Classification(&set), &config)?.1
        }
    };

    let lines: Vec<String> = stats
        .iter()
        .map(|e| {
            csv_line(&[
                e.epoch.to_string(),
                fmt_g9(e.sigma),
                fmt_g9(e.train_loss),
                e.masked_out_count.to_string(),
                fmt_g9(e.model_metric),
            ])
        })
        .collect();
    write_csv(out, HEADER, &lines)?;

    let mut m = RunManifest::new("train-demo", cli.seed);
    m.param("task", args.task)
        .param("loss", format!("{:?}", args.loss).to_lowercase())
        .param("mask_mode", format!("{:?}", args.mask_mode).to_lowercase())
        .param("epochs", args.epochs)
        .param("batch_size", args.batch_size)
        .param("lr", args.lr)
        .param("anneal", &args.anneal)
        .param("threshold", args.threshold.map(fmt_g9).unwrap_or_default())
        .param("n", args.n)
        .param("d", args.d)
        .param("outlier_frac", args.outlier_frac)
        .param("margin", args.margin)
        .param("noise_std", args.noise_std)
        .param("cluster_sep", args.cluster_sep)
        .param(
            "model",
            match model {
                ModelKind::Linear => "linear",
                ModelKind::Logistic => "logistic",
                ModelKind::Mlp { .. } => "mlp",
            },
        )
        .param("width", args.width);
    m.write_beside(out)?;

    info(cli, format!("wrote {} ({} epochs)", out.display(), lines.len()));
    Ok(())
}

/// Parses START:END or START:END:HORIZON. Without an explicit horizon the
/// schedule spans epochs-1 steps, so the final epoch trains at END.
fn parse_anneal(spec: &str, epochs: usize) -> Result<SigmaSchedule, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 2 && parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--anneal expects START:END or START:END:HORIZON, got {spec:?}"
        )));
    }
    let num = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("--anneal: {s:?} is not a number")))
    };
    let start = num(parts[0])?;
    let end = num(parts[1])?;
    let horizon = match parts.get(2) {
        Some(h) => h
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("--anneal: horizon {h:?} is not an integer")))?,
        None => (epochs - 1).max(1),
    };
    SigmaSchedule::new(start, end, horizon).map_err(CliError::from)
}
