//! Per-class standardization shared by the classification kernel, cutoff
//! inference, and detection: each sample is z-scored against its own class's
//! logit (or probability) statistics.

use crate::error::{Error, Result};

/// Signed z-score of every sample within its class.
///
/// Class statistics use the unbiased std (ddof = 1); a class with a single
/// sample or with std below 1e-8 standardizes against 1.0 instead, so its
/// members get z = 0 rather than NaN.
pub(crate) fn class_z_scores_impl(scores: &[f64], labels: &[u8]) -> Result<Vec<f64>> {
    if scores.len() != labels.len() {
        return Err(Error::invalid(format!(
            "class z-scores: {} scores vs {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.is_empty() {
        return Err(Error::invalid("class z-scores: empty batch"));
    }
    if let Some(bad) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::invalid(format!("class z-scores: non-binary label {bad}")));
    }

    let mut z = vec![0.0; scores.len()];
    for cls in [0u8, 1u8] {
        let idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == cls).collect();
        if idx.is_empty() {
            continue;
        }
        let n = idx.len();
        let mean = idx.iter().map(|&i| scores[i]).sum::<f64>() / n as f64;
        let std = if n < 2 {
            1.0
        } else {
            let ss: f64 = idx.iter().map(|&i| (scores[i] - mean) * (scores[i] - mean)).sum();
            let s = (ss / (n - 1) as f64).sqrt();
            if s < 1e-8 {
                1.0
            } else {
                s
            }
        };
        for &i in &idx {
            z[i] = (scores[i] - mean) / std;
        }
    }
    Ok(z)
}
