//! Distribution primitives: descriptive statistics, Gaussian and skew-normal
//! densities and fits, Gaussian-intersection roots, and bracketed root
//! finding.
//!
//! Two ddof conventions coexist on purpose: the loss kernels standardize with
//! the unbiased estimator (ddof = 1) while the cutoff fits use the population
//! estimator (ddof = 0). Both are preserved exactly; pick per call site.

pub mod normal;
pub mod root;
pub mod skewnorm;

mod simplex;

pub use normal::{fit_gaussian, gauss_intersection, gaussian_pdf, norm_cdf, GaussianParams};
pub use root::brent_root;
pub use skewnorm::{fit_skewnorm, sample_skewnorm, skewnorm_pdf, SkewNormalParams};

use crate::error::{Error, Result};

/// Floor applied to pdf values before taking logs, so a single far-out sample
/// cannot poison a stability sweep with -inf.
pub const PDF_FLOOR: f64 = 1e-300;

/// Mean and standard deviation of a sample, with the ddof convention made
/// explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptiveStats {
    pub mean: f64,
    /// Non-negative; sqrt of the (n - ddof)-normalized squared deviations.
    pub std: f64,
    pub count: usize,
    /// 0 = population, 1 = unbiased sample estimate.
    pub ddof: usize,
}

/// Computes mean and standard deviation with the given ddof.
///
/// `ddof = 1` needs at least two points; a singleton has no unbiased spread.
pub fn mean_std(values: &[f64], ddof: usize) -> Result<DescriptiveStats> {
    if values.is_empty() {
        return Err(Error::invalid("mean_std: empty input"));
    }
    if ddof > 1 {
        return Err(Error::invalid(format!("mean_std: ddof must be 0 or 1, got {ddof}")));
    }
    let n = values.len();
    if ddof == 1 && n < 2 {
        return Err(Error::DegenerateSample(
            "mean_std: unbiased std undefined for a single sample".into(),
        ));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|&x| (x - mean) * (x - mean)).sum();
    let std = (ss / (n - ddof) as f64).sqrt();
    Ok(DescriptiveStats { mean, std, count: n, ddof })
}

/// Standardizes `values` against `stats`, guarding the denominator with
/// `eps` so zero-variance samples map to zero instead of NaN.
pub fn z_scores(values: &[f64], stats: &DescriptiveStats, eps: f64) -> Vec<f64> {
    let denom = stats.std + eps;
    values.iter().map(|&x| (x - stats.mean) / denom).collect()
}

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Inverse of [`sigmoid`]; only defined on the open interval (0, 1).
pub fn logit(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("logit: p must lie in (0, 1), got {p}")));
    }
    Ok((p / (1.0 - p)).ln())
}

/// A fitted density, used where either family may appear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Gaussian(GaussianParams),
    SkewNormal(SkewNormalParams),
}

impl Density {
    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Density::Gaussian(p) => gaussian_pdf(x, p),
            Density::SkewNormal(p) => skewnorm_pdf(x, p),
        }
    }
}

/// Sum of log densities over `samples`, with pdf values floored at
/// [`PDF_FLOOR`] so the result stays finite.
pub fn log_likelihood(samples: &[f64], density: &Density) -> f64 {
    samples
        .iter()
        .map(|&x| density.pdf(x).max(PDF_FLOOR).ln())
        .sum()
}
