//! Shared input generators for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Regression batch with ~10% far-out targets.
pub fn contaminated_batch(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    for t in targets.iter_mut() {
        if rng.gen_bool(0.1) {
            *t += 12.0 * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        }
    }
    let preds: Vec<f64> = targets
        .iter()
        .map(|&t| t + 0.3 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    (preds, targets)
}

/// Two-class logit batch centered at -2 and +2.
pub fn logit_batch(n: usize, seed: u64) -> (Vec<f64>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logits = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let label = rng.gen_range(0..2) as u8;
        let center = if label == 1 { 2.0 } else { -2.0 };
        logits.push(center + rng.sample::<f64, _>(StandardNormal));
        labels.push(label);
    }
    (logits, labels)
}
