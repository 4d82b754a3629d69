//! The Z-error loss kernels: masked MSE for regression, per-class masked
//! binary cross-entropy for classification, their unmasked baselines, and the
//! linear sigma-annealing schedule.
//!
//! Conventions the kernels pin down:
//! - regression guards the z denominator with `std + 1e-8`, classification
//!   instead replaces `std < 1e-8` by 1.0;
//! - both losses normalize by `valid_count + 1e-8`;
//! - the inlier mask is a stop-gradient: gradients flow only through the
//!   masked per-sample losses.

use crate::classstat::class_z_scores_impl;
use crate::error::{Error, Result};
use crate::stats::{mean_std, sigmoid, z_scores};

/// Denominator guard used throughout the kernels.
pub const DEFAULT_EPS: f64 = 1e-8;

/// Which statistic the regression mask standardizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskMode {
    /// z-scores of the targets themselves (the default).
    TargetZ,
    /// z-scores of the per-sample squared errors.
    ErrorZ,
}

/// Output of every loss kernel: scalar loss, per-sample gradient with respect
/// to the predictions, the inlier mask, and the number of masked-in samples.
///
/// `grad` is exactly zero at every masked-out index and `valid_count` equals
/// the number of `true` mask entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedLossResult {
    pub loss: f64,
    pub grad: Vec<f64>,
    pub mask: Vec<bool>,
    pub valid_count: usize,
}

/// Linear annealing of the inlier threshold from a permissive start to a
/// strict end over `max_epochs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaSchedule {
    pub start_sigma: f64,
    pub end_sigma: f64,
    pub max_epochs: usize,
}

impl SigmaSchedule {
    pub fn new(start_sigma: f64, end_sigma: f64, max_epochs: usize) -> Result<Self> {
        if end_sigma.is_nan() || start_sigma.is_nan() || end_sigma <= 0.0 || start_sigma < end_sigma {
            return Err(Error::invalid(format!(
                "SigmaSchedule: need start >= end > 0, got {start_sigma}..{end_sigma}"
            )));
        }
        if max_epochs < 1 {
            return Err(Error::invalid("SigmaSchedule: max_epochs must be >= 1"));
        }
        Ok(Self { start_sigma, end_sigma, max_epochs })
    }

    /// Threshold at `epoch`, which must lie in `0..=max_epochs`.
    pub fn threshold_at(&self, epoch: usize) -> Result<f64> {
        sigma_threshold(epoch, self.max_epochs, self.start_sigma, self.end_sigma)
    }

    /// Threshold with epochs past the horizon clamped to the end value, for
    /// training runs longer than the annealing window.
    pub fn clamped_at(&self, epoch: usize) -> f64 {
        let progress = (epoch as f64 / self.max_epochs as f64).min(1.0);
        self.start_sigma + (self.end_sigma - self.start_sigma) * progress
    }
}

impl Default for SigmaSchedule {
    /// Default schedule: anneal from 100 down to 2.
    fn default() -> Self {
        Self { start_sigma: 100.0, end_sigma: 2.0, max_epochs: 100 }
    }
}

/// start + (end - start) * epoch / max_epochs.
pub fn sigma_threshold(epoch: usize, max_epochs: usize, start_sigma: f64, end_sigma: f64) -> Result<f64> {
    if max_epochs < 1 {
        return Err(Error::invalid("sigma_threshold: max_epochs must be >= 1"));
    }
    if epoch > max_epochs {
        return Err(Error::invalid(format!(
            "sigma_threshold: epoch {epoch} outside 0..={max_epochs}"
        )));
    }
    let progress = epoch as f64 / max_epochs as f64;
    Ok(start_sigma + (end_sigma - start_sigma) * progress)
}

/// Masked MSE: samples whose masking statistic strays more than `threshold`
/// sample standard deviations from the batch mean contribute neither loss nor
/// gradient.
///
/// A batch of one has no unbiased spread and is masked in whole.
pub fn z_mse_loss(
    predictions: &[f64],
    targets: &[f64],
    threshold: f64,
    mode: MaskMode,
    eps: f64,
) -> Result<MaskedLossResult> {
    check_regression_batch(predictions, targets)?;
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::invalid(format!("z_mse_loss: threshold must be > 0, got {threshold}")));
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::invalid(format!("z_mse_loss: eps must be >= 0, got {eps}")));
    }

    let n = targets.len();
    let mask = if n == 1 {
        vec![true]
    } else {
        let series: Vec<f64> = match mode {
            MaskMode::TargetZ => targets.to_vec(),
            MaskMode::ErrorZ => predictions
                .iter()
                .zip(targets)
                .map(|(&p, &t)| (p - t) * (p - t))
                .collect(),
        };
        let stats = mean_std(&series, 1)?;
        z_scores(&series, &stats, eps)
            .into_iter()
            .map(|z| z.abs() <= threshold)
            .collect()
    };
    Ok(finish_mse(predictions, targets, mask, eps))
}

/// Unmasked MSE baseline, sharing the masked kernel's arithmetic so a
/// saturated threshold reproduces it bit for bit.
pub fn plain_mse(predictions: &[f64], targets: &[f64]) -> Result<MaskedLossResult> {
    check_regression_batch(predictions, targets)?;
    let mask = vec![true; targets.len()];
    Ok(finish_mse(predictions, targets, mask, DEFAULT_EPS))
}

fn check_regression_batch(predictions: &[f64], targets: &[f64]) -> Result<()> {
    if predictions.len() != targets.len() {
        return Err(Error::invalid(format!(
            "mse: {} predictions vs {} targets",
            predictions.len(),
            targets.len()
        )));
    }
    if targets.is_empty() {
        return Err(Error::invalid("mse: empty batch"));
    }
    Ok(())
}

fn finish_mse(predictions: &[f64], targets: &[f64], mask: Vec<bool>, eps: f64) -> MaskedLossResult {
    let valid_count = mask.iter().filter(|&&m| m).count();
    let denom = valid_count as f64 + eps;
    let mut loss = 0.0;
    let mut grad = vec![0.0; targets.len()];
    for i in 0..targets.len() {
        if mask[i] {
            let r = predictions[i] - targets[i];
            loss += r * r;
            grad[i] = 2.0 * r / denom;
        }
    }
    MaskedLossResult { loss: loss / denom, grad, mask, valid_count }
}

/// Per-class masked binary cross-entropy over logits.
///
/// Each class present in the batch gets its own z-statistics; `threshold0`
/// and `threshold1` set independent inclusion radii. Per-sample loss is the
/// overflow-free `max(x, 0) - x*y + ln(1 + exp(-|x|))`.
pub fn z_bce_with_logits_loss(
    logits: &[f64],
    labels: &[u8],
    threshold0: f64,
    threshold1: f64,
) -> Result<MaskedLossResult> {
    if threshold0.is_nan() || threshold1.is_nan() || threshold0 <= 0.0 || threshold1 <= 0.0 {
        return Err(Error::invalid(format!(
            "z_bce_with_logits_loss: thresholds must be > 0, got ({threshold0}, {threshold1})"
        )));
    }
    let z = class_z_scores_impl(logits, labels)?;
    let thresholds = [threshold0, threshold1];
    let mask: Vec<bool> = z
        .iter()
        .zip(labels)
        .map(|(&zi, &l)| zi.abs() <= thresholds[l as usize])
        .collect();
    Ok(finish_bce(logits, labels, mask))
}

/// Unmasked BCE-with-logits baseline.
pub fn plain_bce_with_logits(logits: &[f64], labels: &[u8]) -> Result<MaskedLossResult> {
    if logits.len() != labels.len() {
        return Err(Error::invalid(format!(
            "bce: {} logits vs {} labels",
            logits.len(),
            labels.len()
        )));
    }
    if logits.is_empty() {
        return Err(Error::invalid("bce: empty batch"));
    }
    if let Some(bad) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::invalid(format!("bce: non-binary label {bad}")));
    }
    let mask = vec![true; logits.len()];
    Ok(finish_bce(logits, labels, mask))
}

fn finish_bce(logits: &[f64], labels: &[u8], mask: Vec<bool>) -> MaskedLossResult {
    let valid_count = mask.iter().filter(|&&m| m).count();
    let denom = valid_count as f64 + DEFAULT_EPS;
    let mut loss = 0.0;
    let mut grad = vec![0.0; logits.len()];
    for i in 0..logits.len() {
        if mask[i] {
            let x = logits[i];
            let y = labels[i] as f64;
            loss += x.max(0.0) - x * y + (-x.abs()).exp().ln_1p();
            grad[i] = (sigmoid(x) - y) / denom;
        }
    }
    MaskedLossResult { loss: loss / denom, grad, mask, valid_count }
}
