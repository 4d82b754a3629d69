//! Batchwise versus full-dataset outlier detection with precision/recall/F1
//! scoring against planted ground truth.
//!
//! A sample counts as detected exactly when the relevant z-mask excludes it:
//! target z-scores for regression, per-class score z-scores for
//! classification.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classstat::class_z_scores_impl;
use crate::error::{Error, Result};
use crate::loss::DEFAULT_EPS;
use crate::stats::{mean_std, z_scores};

/// What the mask was computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionMethod {
    Batch,
    Full,
}

impl std::fmt::Display for DetectionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DetectionMethod::Batch => write!(f, "batch"),
            DetectionMethod::Full => write!(f, "full"),
        }
    }
}

/// The values detection standardizes.
#[derive(Debug, Clone, Copy)]
pub enum DetectionData<'a> {
    /// Raw regression targets.
    Regression { targets: &'a [f64] },
    /// Classification scores (logits or a proxy) with their labels.
    Classification { scores: &'a [f64], labels: &'a [u8] },
}

impl DetectionData<'_> {
    pub fn len(&self) -> usize {
        match self {
            DetectionData::Regression { targets } => targets.len(),
            DetectionData::Classification { scores, .. } => scores.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Confusion counts with the zero-denominator convention: an undefined
/// precision, recall, or F1 reports as 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Confusion {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
}

impl Confusion {
    pub fn precision(&self) -> f64 {
        ratio(self.true_positives, self.true_positives + self.false_positives)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.true_positives, self.true_positives + self.false_negatives)
    }

    pub fn f1(&self) -> f64 {
        let p = self.precision();
        let r = self.recall();
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// One detection run's outcome. `batch_size` is 0 for the full-dataset
/// method.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub method: DetectionMethod,
    pub batch_size: usize,
    pub threshold: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl DetectionReport {
    fn from_confusion(method: DetectionMethod, batch_size: usize, threshold: f64, c: Confusion) -> Self {
        DetectionReport {
            method,
            batch_size,
            threshold,
            true_positives: c.true_positives,
            false_positives: c.false_positives,
            false_negatives: c.false_negatives,
            true_negatives: c.true_negatives,
            precision: c.precision(),
            recall: c.recall(),
            f1: c.f1(),
        }
    }
}

/// Confusion counts of predicted outlier flags against the ground truth.
pub fn score_detection(predicted: &[bool], truth: &[bool]) -> Result<Confusion> {
    if predicted.len() != truth.len() {
        return Err(Error::invalid(format!(
            "score_detection: {} predictions vs {} truths",
            predicted.len(),
            truth.len()
        )));
    }
    let mut c = Confusion {
        true_positives: 0,
        false_positives: 0,
        false_negatives: 0,
        true_negatives: 0,
    };
    for (&p, &t) in predicted.iter().zip(truth) {
        match (p, t) {
            (true, true) => c.true_positives += 1,
            (true, false) => c.false_positives += 1,
            (false, true) => c.false_negatives += 1,
            (false, false) => c.true_negatives += 1,
        }
    }
    Ok(c)
}

/// Shuffles once, slices into consecutive batches (short tail kept unless it
/// has fewer than 2 samples), masks within each batch, and scores the
/// masked-out samples against `truth`.
pub fn detect_batchwise(
    data: &DetectionData,
    truth: &[bool],
    batch_size: usize,
    threshold: f64,
    seed: u64,
) -> Result<DetectionReport> {
    if batch_size < 2 {
        return Err(Error::invalid(format!(
            "detect_batchwise: need batch_size >= 2, got {batch_size}"
        )));
    }
    validate_detection(data, truth, threshold)?;

    let n = data.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut predicted = vec![false; n];
    for chunk in order.chunks(batch_size) {
        if chunk.len() < 2 {
            continue;
        }
        // Canonical within-batch order makes a whole-dataset batch agree
        // with detect_full to the last bit.
        let mut idx = chunk.to_vec();
        idx.sort_unstable();
        mark_batch_outliers(data, &idx, threshold, &mut predicted)?;
    }
    let confusion = score_detection(&predicted, truth)?;
    Ok(DetectionReport::from_confusion(DetectionMethod::Batch, batch_size, threshold, confusion))
}

/// One mask over the entire dataset.
pub fn detect_full(data: &DetectionData, truth: &[bool], threshold: f64) -> Result<DetectionReport> {
    validate_detection(data, truth, threshold)?;
    let n = data.len();
    let mut predicted = vec![false; n];
    if n >= 2 {
        let idx: Vec<usize> = (0..n).collect();
        mark_batch_outliers(data, &idx, threshold, &mut predicted)?;
    }
    let confusion = score_detection(&predicted, truth)?;
    Ok(DetectionReport::from_confusion(DetectionMethod::Full, 0, threshold, confusion))
}

fn validate_detection(data: &DetectionData, truth: &[bool], threshold: f64) -> Result<()> {
    if data.len() != truth.len() {
        return Err(Error::invalid(format!(
            "detect: {} samples vs {} truth flags",
            data.len(),
            truth.len()
        )));
    }
    if data.is_empty() {
        return Err(Error::invalid("detect: empty dataset"));
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::invalid(format!("detect: threshold must be > 0, got {threshold}")));
    }
    if let DetectionData::Classification { scores, labels } = data {
        if scores.len() != labels.len() {
            return Err(Error::invalid(format!(
                "detect: {} scores vs {} labels",
                scores.len(),
                labels.len()
            )));
        }
    }
    Ok(())
}

fn mark_batch_outliers(
    data: &DetectionData,
    idx: &[usize],
    threshold: f64,
    predicted: &mut [bool],
) -> Result<()> {
    match data {
        DetectionData::Regression { targets } => {
            let batch: Vec<f64> = idx.iter().map(|&i| targets[i]).collect();
            let stats = mean_std(&batch, 1)?;
            let z = z_scores(&batch, &stats, DEFAULT_EPS);
            for (pos, &i) in idx.iter().enumerate() {
                if z[pos].abs() > threshold {
                    predicted[i] = true;
                }
            }
        }
        DetectionData::Classification { scores, labels } => {
            let batch_scores: Vec<f64> = idx.iter().map(|&i| scores[i]).collect();
            let batch_labels: Vec<u8> = idx.iter().map(|&i| labels[i]).collect();
            let z = class_z_scores_impl(&batch_scores, &batch_labels)?;
            for (pos, &i) in idx.iter().enumerate() {
                if z[pos].abs() > threshold {
                    predicted[i] = true;
                }
            }
        }
    }
    Ok(())
}
