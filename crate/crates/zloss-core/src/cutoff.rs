//! Data-driven decision-cutoff inference.
//!
//! Two routes: fit class-conditional Gaussians to inlier logits and take
//! their intersection, or squash to probabilities, fit skew-normals (the
//! sigmoid introduces skew), and find the pdf crossing numerically.

use crate::classstat::class_z_scores_impl;
use crate::error::{Error, Result};
use crate::stats::skewnorm::MIN_FIT_SAMPLES;
use crate::stats::{
    brent_root, fit_gaussian, fit_skewnorm, gauss_intersection, sigmoid, Density, GaussianParams,
};

/// Brent bracket used for the probability-space intersection search.
pub const DEFAULT_PROB_BRACKET: (f64, f64) = (0.001, 0.999);

const BRENT_TOL: f64 = 1e-12;
const BRENT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffMethod {
    Gaussian,
    SkewNormal,
}

/// An inferred decision cutoff plus the fitted class distributions behind it.
///
/// `logit_cutoff` is present only on the Gaussian route, where
/// `prob_cutoff == sigmoid(logit_cutoff)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffResult {
    pub logit_cutoff: Option<f64>,
    pub prob_cutoff: f64,
    pub method: CutoffMethod,
    pub class0_fit: Density,
    pub class1_fit: Density,
    pub inlier_counts: (usize, usize),
}

/// Signed z-score of every sample within its own class (unbiased std;
/// single-sample or zero-variance classes standardize against 1.0).
pub fn class_z_scores(scores: &[f64], labels: &[u8]) -> Result<Vec<f64>> {
    class_z_scores_impl(scores, labels)
}

/// Per-class inlier mask: true where |z| stays within `threshold`.
pub fn class_inlier_mask(scores: &[f64], labels: &[u8], threshold: f64) -> Result<Vec<bool>> {
    let z = class_z_scores_impl(scores, labels)?;
    Ok(z.into_iter().map(|zi| zi.abs() <= threshold).collect())
}

/// Decision cutoff from the intersection of per-class Gaussians fitted to
/// inlier logits (population std). Of the intersection roots, the one nearest
/// the midpoint of the two class means wins; ties go to the smaller root.
pub fn optimal_logit_cutoff(logits: &[f64], labels: &[u8], z_threshold: f64) -> Result<CutoffResult> {
    let mask = class_inlier_mask(logits, labels, z_threshold)?;
    let (inliers0, inliers1) = split_inliers(logits, labels, &mask);
    if inliers0.len() < 2 || inliers1.len() < 2 {
        return Err(Error::InsufficientData(
            "Not enough inlier points in each class to fit Gaussians.".into(),
        ));
    }
    let fit0 = fit_gaussian(&inliers0)?;
    let fit1 = fit_gaussian(&inliers1)?;
    let cutoff = logit_cutoff_from_gaussians(&fit0, &fit1)?;
    Ok(CutoffResult {
        logit_cutoff: Some(cutoff),
        prob_cutoff: sigmoid(cutoff),
        method: CutoffMethod::Gaussian,
        class0_fit: Density::Gaussian(fit0),
        class1_fit: Density::Gaussian(fit1),
        inlier_counts: (inliers0.len(), inliers1.len()),
    })
}

/// Intersection-root selection on already-fitted class Gaussians.
pub fn logit_cutoff_from_gaussians(p0: &GaussianParams, p1: &GaussianParams) -> Result<f64> {
    let roots = gauss_intersection(p0, p1)?;
    if roots.is_empty() {
        return Err(Error::DegenerateInput(
            "logit cutoff: class densities never intersect".into(),
        ));
    }
    let midpoint = (p0.mu + p1.mu) / 2.0;
    // Roots come sorted ascending, so strict < keeps the smaller root on ties.
    let mut chosen = roots[0];
    let mut best = (roots[0] - midpoint).abs();
    for &r in &roots[1..] {
        let d = (r - midpoint).abs();
        if d < best {
            best = d;
            chosen = r;
        }
    }
    Ok(chosen)
}

/// Decision cutoff in probability space: sigmoid the logits, mask per class,
/// fit skew-normals, and find the pdf crossing inside `DEFAULT_PROB_BRACKET`.
/// When the bracket shows no sign change, falls back to the midpoint of the
/// two class mean probabilities.
pub fn optimal_prob_cutoff_skewnorm(
    logits: &[f64],
    labels: &[u8],
    z_threshold: f64,
) -> Result<CutoffResult> {
    optimal_prob_cutoff_skewnorm_in(logits, labels, z_threshold, DEFAULT_PROB_BRACKET)
}

/// Same as [`optimal_prob_cutoff_skewnorm`] with an explicit search bracket.
pub fn optimal_prob_cutoff_skewnorm_in(
    logits: &[f64],
    labels: &[u8],
    z_threshold: f64,
    bracket: (f64, f64),
) -> Result<CutoffResult> {
    let probs: Vec<f64> = logits.iter().map(|&x| sigmoid(x)).collect();
    let mask = class_inlier_mask(&probs, labels, z_threshold)?;
    let (inliers0, inliers1) = split_inliers(&probs, labels, &mask);
    if inliers0.len() < MIN_FIT_SAMPLES || inliers1.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData(
            "Not enough inlier points in each class to fit SkewNormals.".into(),
        ));
    }
    let fit0 = fit_skewnorm(&inliers0)?;
    let fit1 = fit_skewnorm(&inliers1)?;

    let diff = |x: f64| {
        crate::stats::skewnorm_pdf(x, &fit0) - crate::stats::skewnorm_pdf(x, &fit1)
    };
    let prob_cutoff = match brent_root(diff, bracket.0, bracket.1, BRENT_TOL, BRENT_MAX_ITER) {
        Ok(root) => root,
        Err(Error::NoSignChange { .. }) => {
            let m0 = inliers0.iter().sum::<f64>() / inliers0.len() as f64;
            let m1 = inliers1.iter().sum::<f64>() / inliers1.len() as f64;
            (m0 + m1) / 2.0
        }
        Err(e) => return Err(e),
    };

    Ok(CutoffResult {
        logit_cutoff: None,
        prob_cutoff,
        method: CutoffMethod::SkewNormal,
        class0_fit: Density::SkewNormal(fit0),
        class1_fit: Density::SkewNormal(fit1),
        inlier_counts: (inliers0.len(), inliers1.len()),
    })
}

fn split_inliers(scores: &[f64], labels: &[u8], mask: &[bool]) -> (Vec<f64>, Vec<f64>) {
    let mut c0 = Vec::new();
    let mut c1 = Vec::new();
    for i in 0..scores.len() {
        if mask[i] {
            if labels[i] == 0 {
                c0.push(scores[i]);
            } else {
                c1.push(scores[i]);
            }
        }
    }
    (c0, c1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    const CODE_LOGITS: [f64; 6] = [2.5, 0.2, -1.1, 1.3, -2.0, 3.0];
    const CODE_LABELS: [u8; 6] = [1, 1, 0, 1, 0, 1];

    fn two_class_logits(seed: u64, n: usize, mu0: f64, mu1: f64) -> (Vec<f64>, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d0 = Normal::new(mu0, 1.0).unwrap();
        let d1 = Normal::new(mu1, 1.0).unwrap();
        let mut logits = Vec::with_capacity(2 * n);
        let mut labels = Vec::with_capacity(2 * n);
        for _ in 0..n {
            logits.push(d0.sample(&mut rng));
            labels.push(0);
        }
        for _ in 0..n {
            logits.push(d1.sample(&mut rng));
            labels.push(1);
        }
        (logits, labels)
    }

    #[test]
    fn inlier_mask_worked_example() {
        let mask = class_inlier_mask(&CODE_LOGITS, &CODE_LABELS, 1.1).unwrap();
        assert_eq!(mask, vec![true, false, true, true, true, true]);
    }

    #[test]
    fn inlier_mask_zero_variance_class() {
        let mask = class_inlier_mask(&[3.0, 3.0, 3.0, -1.0], &[1, 1, 1, 0], 0.5).unwrap();
        assert_eq!(&mask[..3], &[true, true, true]);
        assert!(mask[3], "single-sample class is masked in");
    }

    #[test]
    fn inlier_mask_saturates() {
        let mask = class_inlier_mask(&CODE_LOGITS, &CODE_LABELS, 1e9).unwrap();
        assert!(mask.iter().all(|&m| m));
    }

    #[test]
    fn exact_symmetric_populations_cut_at_zero() {
        let p0 = GaussianParams::new(-2.0, 1.0).unwrap();
        let p1 = GaussianParams::new(2.0, 1.0).unwrap();
        let cut = logit_cutoff_from_gaussians(&p0, &p1).unwrap();
        assert_eq!(cut, 0.0);
        assert_eq!(sigmoid(cut), 0.5);
    }

    #[test]
    fn identical_fits_are_degenerate() {
        let p = GaussianParams::new(0.3, 1.1).unwrap();
        assert!(matches!(
            logit_cutoff_from_gaussians(&p, &p),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn gaussian_cutoff_on_sampled_classes() {
        for seed in [42, 43, 44] {
            let (logits, labels) = two_class_logits(seed, 1000, -2.0, 2.0);
            let r = optimal_logit_cutoff(&logits, &labels, 2.0).unwrap();
            let cut = r.logit_cutoff.unwrap();
            assert!(cut.abs() <= 0.15, "seed {seed}: cutoff {cut}");
            assert!((r.prob_cutoff - 0.5).abs() <= 0.04);
            assert_relative_eq!(r.prob_cutoff, sigmoid(cut), epsilon = 1e-12);
            assert!(r.inlier_counts.0 >= 900 && r.inlier_counts.1 >= 900);
            // The chosen root really is an equal-density point.
            let f0 = r.class0_fit.pdf(cut);
            let f1 = r.class1_fit.pdf(cut);
            assert!((f0 - f1).abs() <= 1e-6 * f0.max(f1));
        }
    }

    #[test]
    fn gaussian_cutoff_needs_two_inliers_per_class() {
        let logits = [0.5, -1.0, -1.1, -0.9];
        let labels = [1, 0, 0, 0];
        let err = optimal_logit_cutoff(&logits, &labels, 2.0).unwrap_err();
        match err {
            Error::InsufficientData(msg) => {
                assert_eq!(msg, "Not enough inlier points in each class to fit Gaussians.")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn label_swap_leaves_cutoff_unchanged() {
        let (logits, labels) = two_class_logits(7, 400, -1.5, 2.5);
        let swapped: Vec<u8> = labels.iter().map(|&l| 1 - l).collect();
        let a = optimal_logit_cutoff(&logits, &labels, 2.0).unwrap();
        let b = optimal_logit_cutoff(&logits, &swapped, 2.0).unwrap();
        assert!((a.logit_cutoff.unwrap() - b.logit_cutoff.unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn translation_moves_cutoff_exactly() {
        let (logits, labels) = two_class_logits(9, 400, -2.0, 2.0);
        let base = optimal_logit_cutoff(&logits, &labels, 2.0).unwrap();
        for shift in [-3.0, 0.7, 12.0] {
            let moved: Vec<f64> = logits.iter().map(|&x| x + shift).collect();
            let r = optimal_logit_cutoff(&moved, &labels, 2.0).unwrap();
            assert!(
                (r.logit_cutoff.unwrap() - base.logit_cutoff.unwrap() - shift).abs() <= 1e-9,
                "shift {shift}"
            );
        }
    }

    #[test]
    fn skewnorm_cutoff_on_sampled_classes() {
        let (logits, labels) = two_class_logits(42, 1000, -2.0, 2.0);
        let r = optimal_prob_cutoff_skewnorm(&logits, &labels, 2.0).unwrap();
        assert!((r.prob_cutoff - 0.5).abs() <= 0.05, "prob {}", r.prob_cutoff);
        assert!(r.logit_cutoff.is_none());
        assert_eq!(r.method, CutoffMethod::SkewNormal);
        // Not the fallback: the crossing equalizes the fitted densities.
        let f0 = r.class0_fit.pdf(r.prob_cutoff);
        let f1 = r.class1_fit.pdf(r.prob_cutoff);
        assert!((f0 - f1).abs() <= 1e-6 * f0.max(f1), "{f0} vs {f1}");
    }

    #[test]
    fn skewnorm_cutoff_falls_back_on_coincident_classes() {
        // Same class means, clearly different spreads: the wider density wins
        // both bracket tails, so the difference never changes sign and the
        // midpoint fallback fires.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let wide = Normal::new(0.0, 1.4).unwrap();
        let narrow = Normal::new(0.0, 0.7).unwrap();
        let mut logits = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..500 {
            logits.push(wide.sample(&mut rng));
            labels.push(0u8);
            logits.push(narrow.sample(&mut rng));
            labels.push(1u8);
        }
        let r = optimal_prob_cutoff_skewnorm(&logits, &labels, 2.0).unwrap();
        assert!((r.prob_cutoff - 0.5).abs() <= 0.05, "prob {}", r.prob_cutoff);
        // Fallback means the returned point is not an equal-density crossing.
        let f0 = r.class0_fit.pdf(r.prob_cutoff);
        let f1 = r.class1_fit.pdf(r.prob_cutoff);
        assert!((f0 - f1).abs() > 1e-6 * f0.max(f1), "expected the fallback path");
    }

    #[test]
    fn skewnorm_cutoff_enforces_fit_floor() {
        let mut logits = vec![-1.0, -1.1, -0.9, -1.05];
        let mut labels = vec![0u8; 4];
        logits.extend([1.0, 1.3, 0.9, 1.1, 1.2, 0.95, 1.05, 1.15]);
        labels.extend([1u8; 8]);
        let err = optimal_prob_cutoff_skewnorm(&logits, &labels, 2.0).unwrap_err();
        match err {
            Error::InsufficientData(msg) => {
                assert_eq!(msg, "Not enough inlier points in each class to fit SkewNormals.")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
