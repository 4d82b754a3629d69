//! Seeded synthetic datasets with planted, ground-truth-flagged outliers.
//!
//! Regression outliers sit at least `margin` noise standard deviations off
//! the true line; classification outliers are cluster points carrying the
//! opposite cluster's label. Everything is a pure function of its arguments
//! and the seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Regression features, targets, and the ground truth behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRegressionSet {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub outlier_flag: Vec<bool>,
    pub true_weights: Vec<f64>,
    pub true_bias: f64,
    pub noise_std: f64,
}

impl SyntheticRegressionSet {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Noise-free value of the true line at row `i`.
    pub fn clean_target(&self, i: usize) -> f64 {
        dot(&self.true_weights, &self.x[i]) + self.true_bias
    }
}

/// Two labeled feature clusters with mislabeled points as outliers.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticClassificationSet {
    pub x: Vec<Vec<f64>>,
    pub label: Vec<u8>,
    pub outlier_flag: Vec<bool>,
    pub cluster_sep: f64,
}

impl SyntheticClassificationSet {
    pub fn len(&self) -> usize {
        self.label.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label.is_empty()
    }

    /// First-axis projection, the model-free stand-in for a logit score: the
    /// clusters are separated along this axis.
    pub fn axis_scores(&self) -> Vec<f64> {
        self.x.iter().map(|row| row[0]).collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&u, &v)| u * v).sum()
}

/// Linear data with `round(n * outlier_frac)` flagged rows offset from the
/// true line by `sign * (margin + |u|) * noise_std`, u standard normal.
///
/// Inlier targets carry N(0, noise_std^2) noise; flagged targets carry only
/// the offset, so every flagged residual is at least `margin * noise_std`.
pub fn gen_regression(
    n: usize,
    d: usize,
    outlier_frac: f64,
    margin: f64,
    noise_std: f64,
    seed: u64,
) -> Result<SyntheticRegressionSet> {
    if n < 10 {
        return Err(Error::invalid(format!("gen_regression: need n >= 10, got {n}")));
    }
    if d < 1 {
        return Err(Error::invalid("gen_regression: need d >= 1"));
    }
    if !(0.0..0.5).contains(&outlier_frac) {
        return Err(Error::invalid(format!(
            "gen_regression: outlier_frac must lie in [0, 0.5), got {outlier_frac}"
        )));
    }
    if margin.is_nan() || margin < 3.0 {
        return Err(Error::invalid(format!("gen_regression: need margin >= 3, got {margin}")));
    }
    if noise_std.is_nan() || noise_std <= 0.0 {
        return Err(Error::invalid(format!(
            "gen_regression: need noise_std > 0, got {noise_std}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Weak signal relative to the noise keeps the target distribution tight,
    // so margin offsets genuinely stick out of it. Magnitudes bounded away
    // from zero keep relative slope errors meaningful.
    let scale = 1.0 / (d as f64).sqrt();
    let true_weights: Vec<f64> = (0..d)
        .map(|_| {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            sign * rng.gen_range(0.25..0.5) * scale
        })
        .collect();
    let true_bias: f64 = rng.gen_range(-0.5..0.5);

    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();

    let k = (n as f64 * outlier_frac).round() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut outlier_flag = vec![false; n];
    for &i in order.iter().take(k) {
        outlier_flag[i] = true;
    }

    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let clean = dot(&true_weights, &x[i]) + true_bias;
        if outlier_flag[i] {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let u: f64 = rng.sample(StandardNormal);
            y.push(clean + sign * (margin + u.abs()) * noise_std);
        } else {
            let noise: f64 = rng.sample(StandardNormal);
            y.push(clean + noise * noise_std);
        }
    }

    Ok(SyntheticRegressionSet { x, y, outlier_flag, true_weights, true_bias, noise_std })
}

/// Two balanced Gaussian clusters at -sep/2 and +sep/2 on the first axis.
/// `round(n * outlier_frac)` points, split evenly across the classes, are
/// drawn from one cluster but labeled as the other.
pub fn gen_classification(
    n: usize,
    d: usize,
    outlier_frac: f64,
    cluster_sep: f64,
    seed: u64,
) -> Result<SyntheticClassificationSet> {
    if n < 20 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "gen_classification: need even n >= 20, got {n}"
        )));
    }
    if d < 1 {
        return Err(Error::invalid("gen_classification: need d >= 1"));
    }
    if !(0.0..0.5).contains(&outlier_frac) {
        return Err(Error::invalid(format!(
            "gen_classification: outlier_frac must lie in [0, 0.5), got {outlier_frac}"
        )));
    }
    if cluster_sep.is_nan() || cluster_sep <= 0.0 {
        return Err(Error::invalid(format!(
            "gen_classification: need cluster_sep > 0, got {cluster_sep}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_class = n / 2;
    let total_outliers = (n as f64 * outlier_frac).round() as usize;
    let per_class_outliers = [total_outliers / 2, total_outliers - total_outliers / 2];
    let centers = [-cluster_sep / 2.0, cluster_sep / 2.0];

    let mut rows: Vec<(Vec<f64>, u8, bool)> = Vec::with_capacity(n);
    for class in 0..2usize {
        let mut local: Vec<usize> = (0..per_class).collect();
        local.shuffle(&mut rng);
        let mut flagged = vec![false; per_class];
        for &i in local.iter().take(per_class_outliers[class]) {
            flagged[i] = true;
        }
        for &is_outlier in &flagged {
            // Outliers are drawn from the opposite cluster but keep this label.
            let center = if is_outlier { centers[1 - class] } else { centers[class] };
            let mut row: Vec<f64> = Vec::with_capacity(d);
            row.push(center + rng.sample::<f64, _>(StandardNormal));
            for _ in 1..d {
                row.push(rng.sample::<f64, _>(StandardNormal));
            }
            rows.push((row, class as u8, is_outlier));
        }
    }
    rows.shuffle(&mut rng);

    let mut x = Vec::with_capacity(n);
    let mut label = Vec::with_capacity(n);
    let mut outlier_flag = Vec::with_capacity(n);
    for (row, l, f) in rows {
        x.push(row);
        label.push(l);
        outlier_flag.push(f);
    }
    Ok(SyntheticClassificationSet { x, label, outlier_flag, cluster_sep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regression_counts_and_margins() {
        let set = gen_regression(1000, 3, 0.10, 6.0, 1.0, 42).unwrap();
        assert_eq!(set.len(), 1000);
        assert_eq!(set.outlier_flag.iter().filter(|&&f| f).count(), 100);
        for i in 0..set.len() {
            if set.outlier_flag[i] {
                let resid = (set.y[i] - set.clean_target(i)).abs();
                assert!(resid >= 6.0 * set.noise_std, "row {i}: residual {resid}");
            }
        }
    }

    #[test]
    fn regression_is_deterministic() {
        let a = gen_regression(200, 2, 0.1, 6.0, 0.5, 7).unwrap();
        let b = gen_regression(200, 2, 0.1, 6.0, 0.5, 7).unwrap();
        assert_eq!(a, b);
        let c = gen_regression(200, 2, 0.1, 6.0, 0.5, 8).unwrap();
        assert_ne!(a.y, c.y);
    }

    #[test]
    fn regression_validation() {
        assert!(gen_regression(5, 3, 0.1, 6.0, 1.0, 0).is_err());
        assert!(gen_regression(100, 3, 0.5, 6.0, 1.0, 0).is_err());
        assert!(gen_regression(100, 3, 0.1, 2.0, 1.0, 0).is_err());
        assert!(gen_regression(100, 3, 0.1, 6.0, 0.0, 0).is_err());
        assert!(gen_regression(100, 0, 0.1, 6.0, 1.0, 0).is_err());
    }

    #[test]
    fn classification_counts_and_balance() {
        let set = gen_classification(2000, 3, 0.10, 6.0, 42).unwrap();
        assert_eq!(set.len(), 2000);
        let n1 = set.label.iter().filter(|&&l| l == 1).count();
        assert_eq!(n1, 1000);
        let flagged_per_class: Vec<usize> = (0..2)
            .map(|c| {
                (0..set.len())
                    .filter(|&i| set.label[i] == c as u8 && set.outlier_flag[i])
                    .count()
            })
            .collect();
        assert_eq!(flagged_per_class, vec![100, 100]);
    }

    #[test]
    fn classification_clean_case_matches_clusters() {
        let set = gen_classification(20, 2, 0.0, 8.0, 1).unwrap();
        assert!(set.outlier_flag.iter().all(|&f| !f));
        for i in 0..set.len() {
            let side = set.x[i][0] > 0.0;
            assert_eq!(side, set.label[i] == 1, "row {i} sits on the wrong side");
        }
    }

    #[test]
    fn classification_outliers_sit_in_opposite_cluster() {
        let set = gen_classification(2000, 2, 0.10, 10.0, 3).unwrap();
        for i in 0..set.len() {
            if set.outlier_flag[i] {
                let own_side = if set.label[i] == 1 { 1.0 } else { -1.0 };
                assert!(set.x[i][0] * own_side < 0.0, "row {i} not mislabeled");
            }
        }
    }

    #[test]
    fn classification_is_deterministic() {
        let a = gen_classification(100, 2, 0.1, 6.0, 9).unwrap();
        let b = gen_classification(100, 2, 0.1, 6.0, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn classification_validation() {
        assert!(gen_classification(21, 2, 0.1, 6.0, 0).is_err());
        assert!(gen_classification(10, 2, 0.1, 6.0, 0).is_err());
        assert!(gen_classification(100, 2, 0.1, 0.0, 0).is_err());
    }
}
