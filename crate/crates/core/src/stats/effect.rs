use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{mean, variance, StatsError};

/// Subsample sizes used when averaging effect sizes.
pub const DEFAULT_STRATA: [usize; 7] = [8, 40, 60, 100, 200, 500, 1000];

/// Absolute Cohen's d with the pooled standard deviation.
pub fn cohens_d(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    let (nx, ny) = (x.len(), y.len());
    if nx < 2 || ny < 2 {
        return Err(StatsError::TooFewSamples { x: nx, y: ny });
    }
    let (nxf, nyf) = (nx as f64, ny as f64);
    let pooled = ((nxf - 1.0) * variance(x) + (nyf - 1.0) * variance(y)) / (nxf + nyf - 2.0);
    if pooled <= 0.0 {
        return Err(StatsError::ZeroPooledVariance);
    }
    Ok((mean(x) - mean(y)).abs() / pooled.sqrt())
}

/// Extended effect-size scale; each class starts at its threshold
/// (0.01, 0.2, 0.5, 0.8, 1.2, 2.0). Values below 0.01 are `VerySmall`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EffectClass {
    VerySmall,
    Small,
    Medium,
    Large,
    VeryLarge,
    Huge,
}

impl fmt::Display for EffectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffectClass::VerySmall => "Very Small",
            EffectClass::Small => "Small",
            EffectClass::Medium => "Medium",
            EffectClass::Large => "Large",
            EffectClass::VeryLarge => "Very Large",
            EffectClass::Huge => "Huge",
        })
    }
}

pub fn classify_effect(d: f64) -> EffectClass {
    match d {
        d if d >= 2.0 => EffectClass::Huge,
        d if d >= 1.2 => EffectClass::VeryLarge,
        d if d >= 0.8 => EffectClass::Large,
        d if d >= 0.5 => EffectClass::Medium,
        d if d >= 0.2 => EffectClass::Small,
        _ => EffectClass::VerySmall,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub d_by_size: BTreeMap<usize, f64>,
    pub d_mean: f64,
    pub class: EffectClass,
}

fn draw(values: &[f64], size: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut idx = rand::seq::index::sample(rng, values.len(), size).into_vec();
    // Keep input order so a full-size draw reproduces the full sample.
    idx.sort_unstable();
    idx.into_iter().map(|i| values[i]).collect()
}

/// Mean Cohen's d over random subsamples: for each size, `size` elements
/// are drawn without replacement from each group (`repeats` times, averaged).
/// Sizes larger than either group are skipped, as are strata whose pooled
/// variance is zero.
pub fn stratified_effect_size(
    x: &[f64],
    y: &[f64],
    sizes: &[usize],
    repeats: usize,
    seed: u64,
) -> Result<EffectSize, StatsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d_by_size = BTreeMap::new();
    for &size in sizes {
        if size > x.len() || size > y.len() {
            log::warn!(
                "effect-size stratum {size} skipped: groups have {} and {} documents",
                x.len(),
                y.len()
            );
            continue;
        }
        let mut acc = 0.0;
        let mut ok = 0usize;
        for _ in 0..repeats.max(1) {
            let (sx, sy) = (draw(x, size, &mut rng), draw(y, size, &mut rng));
            match cohens_d(&sx, &sy) {
                Ok(d) => {
                    acc += d;
                    ok += 1;
                }
                Err(e) => log::warn!("effect-size stratum {size} draw skipped: {e}"),
            }
        }
        if ok > 0 {
            d_by_size.insert(size, acc / ok as f64);
        }
    }
    if d_by_size.is_empty() {
        return Err(StatsError::NoStrata);
    }
    let d_mean = d_by_size.values().sum::<f64>() / d_by_size.len() as f64;
    Ok(EffectSize {
        class: classify_effect(d_mean),
        d_by_size,
        d_mean,
    })
}
