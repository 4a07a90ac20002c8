use rand::Rng;

use super::rng::{seeded, SAMPLE_STREAM};
use crate::error::{invalid, Error, Result};
use crate::sector::{Occupation, OutcomeDistribution};

/// `count` i.i.d. draws from `dist` by inverse-CDF lookup on ChaCha20 stream
/// [`SAMPLE_STREAM`].
pub fn sample_outcomes(dist: &OutcomeDistribution, seed: u64, count: usize) -> Vec<Occupation> {
    let probs = dist.probs();
    let cdf: Vec<f64> = probs
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let total = cdf.last().copied().unwrap_or(0.0);
    // Rounding can leave `u` at the very top of the CDF; fall back to the last
    // outcome with positive weight.
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = seeded(seed, SAMPLE_STREAM);
    (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let i = cdf.partition_point(|&c| c <= u).min(last);
            dist.basis().state(i).clone()
        })
        .collect()
}

/// Relative frequencies of `samples` over the basis of `like`.
pub fn empirical_distribution(like: &OutcomeDistribution, samples: &[Occupation]) -> Result<OutcomeDistribution> {
    if samples.is_empty() {
        return Err(invalid("samples", "need at least one sample"));
    }
    let basis = like.basis();
    let mut counts = vec![0u64; basis.len()];
    for s in samples {
        let i = basis.index_of(s).ok_or(Error::BasisMismatch)?;
        counts[i] += 1;
    }
    let n = samples.len() as f64;
    OutcomeDistribution::new(basis.clone(), counts.into_iter().map(|c| c as f64 / n).collect())
}

/// Total variation distance `½ Σ |p - r|`.
pub fn tv_distance(p: &OutcomeDistribution, r: &OutcomeDistribution) -> Result<f64> {
    if p.basis().states() != r.basis().states() {
        return Err(Error::BasisMismatch);
    }
    Ok(0.5 * p.probs().iter().zip(r.probs()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
