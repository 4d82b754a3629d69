//! Robust-training toolkit built around batchwise z-score outlier masking.
//!
//! The crate provides:
//!
//! - [`loss`] — the Z-error loss kernels: masked MSE for regression, per-class
//!   masked binary cross-entropy for classification, their plain baselines,
//!   and the linear sigma-annealing schedule.
//! - [`cutoff`] — data-driven decision-cutoff inference from class-conditional
//!   Gaussian intersections (logit space) or skew-normal intersections
//!   (probability space).
//! - [`stats`] — the distribution primitives underneath: descriptive
//!   statistics, Gaussian/skew-normal densities and fits, Brent root finding.
//! - [`synth`] — seeded synthetic datasets with planted, ground-truth-flagged
//!   outliers.
//! - [`train`] — a minimal mini-batch gradient-descent trainer (linear,
//!   logistic, one-hidden-layer network) driven by the masked kernels.
//! - [`detect`] — batchwise vs full-dataset outlier detection scoring.

mod classstat;

pub mod cutoff;
pub mod detect;
pub mod error;
pub mod loss;
pub mod stats;
pub mod synth;
pub mod train;

pub use cutoff::{class_inlier_mask, optimal_logit_cutoff, optimal_prob_cutoff_skewnorm, CutoffResult};
pub use detect::{detect_batchwise, detect_full, score_detection, DetectionData, DetectionReport};
pub use error::{Error, Result};
pub use loss::{
    plain_bce_with_logits, plain_mse, sigma_threshold, z_bce_with_logits_loss, z_mse_loss,
    MaskMode, MaskedLossResult, SigmaSchedule,
};
pub use stats::{DescriptiveStats, Density, GaussianParams, SkewNormalParams};
pub use synth::{gen_classification, gen_regression, SyntheticClassificationSet, SyntheticRegressionSet};
pub use train::{train, EpochStats, LossKind, ModelKind, ThresholdPolicy, TrainConfig, TrainedModel};
