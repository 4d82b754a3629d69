//! Minimal mini-batch gradient-descent trainer driven by the masked loss
//! kernels: exact closed-form gradients for the linear and logistic models,
//! manual backprop through one tanh hidden layer for the MLP.
//!
//! The inlier mask is a stop-gradient, so parameter gradients are the chain
//! rule applied to `MaskedLossResult::grad` alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::loss::{
    plain_bce_with_logits, plain_mse, z_bce_with_logits_loss, z_mse_loss, MaskMode,
    MaskedLossResult, SigmaSchedule, DEFAULT_EPS,
};
use crate::synth::{dot, SyntheticClassificationSet, SyntheticRegressionSet};

/// Which kernel the trainer backpropagates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    ZMse,
    Mse,
    ZBce,
    Bce,
}

impl LossKind {
    pub fn is_regression(self) -> bool {
        matches!(self, LossKind::ZMse | LossKind::Mse)
    }
}

/// Model family. `Linear` and `Logistic` share the affine parameterization;
/// the name records whether the output is a prediction or a logit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Linear,
    Logistic,
    Mlp { width: usize },
}

/// Fixed inlier threshold, or linear annealing that holds its end value once
/// the schedule horizon is past.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy {
    Fixed(f64),
    Annealed(SigmaSchedule),
}

impl ThresholdPolicy {
    fn at_epoch(&self, epoch: usize) -> f64 {
        match self {
            ThresholdPolicy::Fixed(t) => *t,
            ThresholdPolicy::Annealed(s) => s.clamped_at(epoch),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub loss: LossKind,
    pub mask_mode: MaskMode,
    pub threshold: ThresholdPolicy,
    pub seed: u64,
    pub model: ModelKind,
}

/// Per-epoch diagnostics. `model_metric` is the relative weight error for
/// linear regression, the clean-signal RMSE for MLP regression, and balanced
/// accuracy for classification.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub sigma: f64,
    pub train_loss: f64,
    pub masked_out_count: usize,
    pub model_metric: f64,
}

/// Either dataset the trainer accepts.
#[derive(Debug, Clone, Copy)]
pub enum TrainData<'a> {
    Regression(&'a SyntheticRegressionSet),
    Classification(&'a SyntheticClassificationSet),
}

impl TrainData<'_> {
    fn len(&self) -> usize {
        match self {
            TrainData::Regression(s) => s.len(),
            TrainData::Classification(s) => s.len(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            TrainData::Regression(s) => s.x[0].len(),
            TrainData::Classification(s) => s.x[0].len(),
        }
    }

    fn features(&self) -> &[Vec<f64>] {
        match self {
            TrainData::Regression(s) => &s.x,
            TrainData::Classification(s) => &s.x,
        }
    }
}

/// Targets for one batch, matching the loss family.
#[derive(Debug, Clone, Copy)]
pub enum BatchTargets<'a> {
    Targets(&'a [f64]),
    Labels(&'a [u8]),
}

/// Affine model: params are `[w_0..w_{d-1}, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub input_dim: usize,
    pub params: Vec<f64>,
}

impl LinearModel {
    fn zeros(input_dim: usize) -> Self {
        Self { input_dim, params: vec![0.0; input_dim + 1] }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        dot(&self.params[..self.input_dim], x) + self.params[self.input_dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.params[..self.input_dim]
    }

    fn param_grads(&self, xs: &[&[f64]], dpred: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.params.len()];
        for (row, &gp) in xs.iter().zip(dpred) {
            for j in 0..self.input_dim {
                g[j] += gp * row[j];
            }
            g[self.input_dim] += gp;
        }
        g
    }
}

/// One tanh hidden layer, linear output. Params are
/// `[w1 (width x d, row-major), b1 (width), w2 (width), b2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub input_dim: usize,
    pub width: usize,
    pub params: Vec<f64>,
}

impl MlpModel {
    fn init<R: Rng + ?Sized>(input_dim: usize, width: usize, rng: &mut R) -> Self {
        let scale = 1.0 / (input_dim as f64).sqrt();
        let n_params = width * input_dim + width + width + 1;
        let params = (0..n_params)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * 0.5 * scale)
            .collect();
        Self { input_dim, width, params }
    }

    fn split(&self) -> (&[f64], &[f64], &[f64], f64) {
        let (d, w) = (self.input_dim, self.width);
        let w1 = &self.params[..w * d];
        let b1 = &self.params[w * d..w * d + w];
        let w2 = &self.params[w * d + w..w * d + 2 * w];
        let b2 = self.params[w * d + 2 * w];
        (w1, b1, w2, b2)
    }

    fn hidden(&self, x: &[f64]) -> Vec<f64> {
        let (w1, b1, _, _) = self.split();
        (0..self.width)
            .map(|k| (dot(&w1[k * self.input_dim..(k + 1) * self.input_dim], x) + b1[k]).tanh())
            .collect()
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let (_, _, w2, b2) = self.split();
        dot(w2, &self.hidden(x)) + b2
    }

    fn param_grads(&self, xs: &[&[f64]], dpred: &[f64]) -> Vec<f64> {
        let (d, w) = (self.input_dim, self.width);
        let (_, _, w2, _) = self.split();
        let w2 = w2.to_vec();
        let mut g = vec![0.0; self.params.len()];
        for (row, &gp) in xs.iter().zip(dpred) {
            let h = self.hidden(row);
            for k in 0..w {
                g[w * d + w + k] += gp * h[k]; // dL/dw2
                let da = gp * w2[k] * (1.0 - h[k] * h[k]);
                for j in 0..d {
                    g[k * d + j] += da * row[j]; // dL/dw1
                }
                g[w * d + k] += da; // dL/db1
            }
            g[w * d + 2 * w] += gp; // dL/db2
        }
        g
    }
}

/// The trained model, exposing a flat parameter view for inspection and
/// finite-difference checks.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Linear(LinearModel),
    Mlp(MlpModel),
}

impl TrainedModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            TrainedModel::Linear(m) => m.predict(x),
            TrainedModel::Mlp(m) => m.predict(x),
        }
    }

    pub fn params(&self) -> &[f64] {
        match self {
            TrainedModel::Linear(m) => &m.params,
            TrainedModel::Mlp(m) => &m.params,
        }
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        match self {
            TrainedModel::Linear(m) => &mut m.params,
            TrainedModel::Mlp(m) => &mut m.params,
        }
    }

    /// Weight part of an affine model, if that is what this is.
    pub fn linear_weights(&self) -> Option<&[f64]> {
        match self {
            TrainedModel::Linear(m) => Some(m.weights()),
            TrainedModel::Mlp(_) => None,
        }
    }

    fn param_grads(&self, xs: &[&[f64]], dpred: &[f64]) -> Vec<f64> {
        match self {
            TrainedModel::Linear(m) => m.param_grads(xs, dpred),
            TrainedModel::Mlp(m) => m.param_grads(xs, dpred),
        }
    }
}

/// Evaluates the configured kernel on one batch and chain-rules its
/// per-sample gradient back to the parameters.
pub fn batch_loss_and_grads(
    model: &TrainedModel,
    xs: &[&[f64]],
    targets: BatchTargets,
    loss: LossKind,
    mask_mode: MaskMode,
    threshold: f64,
) -> Result<(MaskedLossResult, Vec<f64>)> {
    let preds: Vec<f64> = xs.iter().map(|x| model.predict(x)).collect();
    let result = match (loss, targets) {
        (LossKind::ZMse, BatchTargets::Targets(t)) => {
            z_mse_loss(&preds, t, threshold, mask_mode, DEFAULT_EPS)?
        }
        (LossKind::Mse, BatchTargets::Targets(t)) => plain_mse(&preds, t)?,
        (LossKind::ZBce, BatchTargets::Labels(l)) => {
            z_bce_with_logits_loss(&preds, l, threshold, threshold)?
        }
        (LossKind::Bce, BatchTargets::Labels(l)) => plain_bce_with_logits(&preds, l)?,
        _ => {
            return Err(Error::invalid(
                "batch_loss_and_grads: loss kind does not match the batch targets",
            ))
        }
    };
    let grads = model.param_grads(xs, &result.grad);
    Ok((result, grads))
}

/// Mini-batch SGD over the dataset.
///
/// Batches are reshuffled every epoch from the config seed; the per-epoch
/// threshold follows the configured policy. Returns the model plus one
/// [`EpochStats`] row per epoch. A non-finite batch loss aborts with
/// [`Error::TrainingDiverged`].
pub fn train(data: &TrainData, config: &TrainConfig) -> Result<(TrainedModel, Vec<EpochStats>)> {
    validate_config(data, config)?;
    let n = data.len();
    let dim = data.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut model = match config.model {
        ModelKind::Linear | ModelKind::Logistic => TrainedModel::Linear(LinearModel::zeros(dim)),
        ModelKind::Mlp { width } => TrainedModel::Mlp(MlpModel::init(dim, width, &mut rng)),
    };

    let features = data.features();
    let mut order: Vec<usize> = (0..n).collect();
    let mut stats = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let sigma = config.threshold.at_epoch(epoch);
        order.shuffle(&mut rng);

        let mut epoch_loss = 0.0;
        let mut batches = 0usize;
        let mut masked_out = 0usize;

        for chunk in order.chunks(config.batch_size) {
            let xs: Vec<&[f64]> = chunk.iter().map(|&i| features[i].as_slice()).collect();
            let (t_buf, l_buf);
            let targets = match data {
                TrainData::Regression(s) => {
                    t_buf = chunk.iter().map(|&i| s.y[i]).collect::<Vec<f64>>();
                    BatchTargets::Targets(&t_buf)
                }
                TrainData::Classification(s) => {
                    l_buf = chunk.iter().map(|&i| s.label[i]).collect::<Vec<u8>>();
                    BatchTargets::Labels(&l_buf)
                }
            };
            let (result, grads) =
                batch_loss_and_grads(&model, &xs, targets, config.loss, config.mask_mode, sigma)?;
            if !result.loss.is_finite() {
                return Err(Error::TrainingDiverged { epoch });
            }
            let params = model.params_mut();
            for (p, g) in params.iter_mut().zip(&grads) {
                *p -= config.learning_rate * g;
            }
            epoch_loss += result.loss;
            batches += 1;
            masked_out += chunk.len() - result.valid_count;
        }

        stats.push(EpochStats {
            epoch,
            sigma,
            train_loss: epoch_loss / batches as f64,
            masked_out_count: masked_out,
            model_metric: model_metric(data, &model),
        });
    }

    Ok((model, stats))
}

fn validate_config(data: &TrainData, config: &TrainConfig) -> Result<()> {
    if config.epochs < 1 {
        return Err(Error::invalid("train: epochs must be >= 1"));
    }
    if config.batch_size < 1 {
        return Err(Error::invalid("train: batch_size must be >= 1"));
    }
    if config.learning_rate.is_nan() || config.learning_rate <= 0.0 {
        return Err(Error::invalid("train: learning_rate must be > 0"));
    }
    if let ThresholdPolicy::Fixed(t) = config.threshold {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::invalid("train: fixed threshold must be > 0"));
        }
    }
    if data.len() == 0 {
        return Err(Error::invalid("train: empty dataset"));
    }
    let regression_task = matches!(data, TrainData::Regression(_));
    if regression_task != config.loss.is_regression() {
        return Err(Error::invalid("train: loss kind does not match the task"));
    }
    match (config.model, regression_task) {
        (ModelKind::Linear, false) => Err(Error::invalid("train: linear model needs a regression task")),
        (ModelKind::Logistic, true) => {
            Err(Error::invalid("train: logistic model needs a classification task"))
        }
        (ModelKind::Mlp { width: 0 }, _) => {
            Err(Error::invalid("train: mlp width must be >= 1"))
        }
        _ => Ok(()),
    }
}

fn model_metric(data: &TrainData, model: &TrainedModel) -> f64 {
    match data {
        TrainData::Regression(s) => match model {
            TrainedModel::Linear(m) => {
                let diff: f64 = m
                    .weights()
                    .iter()
                    .zip(&s.true_weights)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum();
                let norm: f64 = s.true_weights.iter().map(|&w| w * w).sum();
                (diff / norm.max(1e-24)).sqrt()
            }
            TrainedModel::Mlp(_) => {
                let mse: f64 = (0..s.len())
                    .map(|i| {
                        let e = model.predict(&s.x[i]) - s.clean_target(i);
                        e * e
                    })
                    .sum::<f64>()
                    / s.len() as f64;
                mse.sqrt()
            }
        },
        TrainData::Classification(s) => {
            let mut correct = [0usize; 2];
            let mut count = [0usize; 2];
            for i in 0..s.len() {
                let c = s.label[i] as usize;
                count[c] += 1;
                let predicted = model.predict(&s.x[i]) >= 0.0;
                if predicted == (c == 1) {
                    correct[c] += 1;
                }
            }
            let acc = |c: usize| {
                if count[c] == 0 {
                    0.0
                } else {
                    correct[c] as f64 / count[c] as f64
                }
            };
            (acc(0) + acc(1)) / 2.0
        }
    }
}
