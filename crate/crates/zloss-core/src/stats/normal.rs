//! Gaussian density, population-moment fit, intersection roots, and the
//! standard normal cdf.
//!
//! The cdf goes through Cody's rational-Chebyshev erf/erfc (SPECFUN's
//! `calerf`), accurate to well under 1e-14 absolute, because skew-normal pdf
//! accuracy bounds everything the cutoff inference computes downstream.

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.5066282746310002;
const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;

/// Mean and strictly positive standard deviation of a Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub mu: f64,
    pub sigma: f64,
}

impl GaussianParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if sigma <= 0.0 || !sigma.is_finite() || !mu.is_finite() {
            return Err(Error::invalid(format!(
                "GaussianParams: sigma must be finite and positive, got mu={mu}, sigma={sigma}"
            )));
        }
        Ok(Self { mu, sigma })
    }
}

/// Gaussian density at `x`.
pub fn gaussian_pdf(x: f64, p: &GaussianParams) -> f64 {
    let z = (x - p.mu) / p.sigma;
    (-0.5 * z * z).exp() / (p.sigma * SQRT_2PI)
}

/// Standard normal density.
pub(crate) fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

/// Standard normal cdf via erfc.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Fits a Gaussian by population moments (ddof = 0), the convention the
/// cutoff inference standardizes on (the loss kernels use ddof = 1).
pub fn fit_gaussian(samples: &[f64]) -> Result<GaussianParams> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(
            "fit_gaussian: need at least 2 samples".into(),
        ));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let sigma = var.sqrt();
    if sigma <= 0.0 {
        return Err(Error::DegenerateSample(
            "fit_gaussian: sample has zero variance".into(),
        ));
    }
    GaussianParams::new(mean, sigma)
}

/// Real points where two Gaussian densities are equal.
///
/// Solves a*x^2 + b*x + c = 0 with
///   a = 1/(2*s0^2) - 1/(2*s1^2)
///   b = mu1/s1^2 - mu0/s0^2
///   c = mu0^2/(2*s0^2) - mu1^2/(2*s1^2) - ln(s1/s0)
/// Equal sigmas make the equation linear with exactly one root; identical
/// distributions have no intersection set and error out.
pub fn gauss_intersection(p0: &GaussianParams, p1: &GaussianParams) -> Result<Vec<f64>> {
    let (mu0, s0) = (p0.mu, p0.sigma);
    let (mu1, s1) = (p1.mu, p1.sigma);
    let a = 1.0 / (2.0 * s0 * s0) - 1.0 / (2.0 * s1 * s1);
    let b = mu1 / (s1 * s1) - mu0 / (s0 * s0);
    let c = mu0 * mu0 / (2.0 * s0 * s0) - mu1 * mu1 / (2.0 * s1 * s1) - (s1 / s0).ln();

    if a == 0.0 {
        if b == 0.0 {
            return Err(Error::DegenerateInput(
                "gauss_intersection: identical distributions".into(),
            ));
        }
        return Ok(vec![-c / b]);
    }

    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    if disc == 0.0 {
        return Ok(vec![-b / (2.0 * a)]);
    }
    // Stable quadratic: avoid cancellation in the smaller-magnitude root.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = vec![q / a, c / q];
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(roots)
}

/// Error function, Cody's rational Chebyshev approximation (SPECFUN calerf).
pub fn erf(x: f64) -> f64 {
    if x.abs() <= 0.46875 {
        erf_small(x)
    } else {
        let e = erfc_core(x.abs());
        if x > 0.0 {
            1.0 - e
        } else {
            e - 1.0
        }
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.abs() <= 0.46875 {
        1.0 - erf_small(x)
    } else if x > 0.0 {
        erfc_core(x)
    } else {
        2.0 - erfc_core(-x)
    }
}

// |x| <= 0.46875 branch.
fn erf_small(x: f64) -> f64 {
    const A: [f64; 5] = [
        3.1611237438705655,
        113.86415415105016,
        377.485237685302,
        3209.3775891384694,
        0.18577770618460315,
    ];
    const B: [f64; 4] = [
        23.601290952344122,
        244.02463793444417,
        1282.6165260773723,
        2844.236833439171,
    ];
    let z = x * x;
    let mut num = A[4] * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + A[i]) * z;
        den = (den + B[i]) * z;
    }
    x * (num + A[3]) / (den + B[3])
}

// erfc for y > 0.46875.
fn erfc_core(y: f64) -> f64 {
    debug_assert!(y > 0.46875);
    let result = if y <= 4.0 {
        const C: [f64; 9] = [
            0.5641884969886701,
            8.883149794388377,
            66.11919063714163,
            298.6351381974001,
            881.952221241769,
            1712.0476126340707,
            2051.0783778260716,
            1230.3393547979972,
            2.1531153547440383e-08,
        ];
        const D: [f64; 8] = [
            15.744926110709835,
            117.6939508913125,
            537.1811018620099,
            1621.3895745666903,
            3290.7992357334597,
            4362.619090143247,
            3439.3676741437216,
            1230.3393548037495,
        ];
        let mut num = C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + C[i]) * y;
            den = (den + D[i]) * y;
        }
        (num + C[7]) / (den + D[7])
    } else {
        if y >= 26.543 {
            return 0.0;
        }
        const P: [f64; 6] = [
            0.30532663496123236,
            0.36034489994980445,
            0.12578172611122926,
            0.016083785148742275,
            0.0006587491615298378,
            0.016315387137302097,
        ];
        const Q: [f64; 5] = [
            2.568520192289822,
            1.8729528499234604,
            0.5279051029514285,
            0.06051834131244132,
            0.0023352049762686918,
        ];
        let z = 1.0 / (y * y);
        let mut num = P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + P[i]) * z;
            den = (den + Q[i]) * z;
        }
        let r = z * (num + P[4]) / (den + Q[4]);
        (FRAC_1_SQRT_PI - r) / y
    };
    // exp(-y^2) split to preserve accuracy for large y.
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * result
}
