use super::TopicModel;
use crate::special::ln_gamma;

/// `ln Γ(n + offset)` for integer counts `0..=max`, precomputed.
#[derive(Debug, Clone)]
pub(crate) struct LnGammaTable {
    values: Vec<f64>,
}

impl LnGammaTable {
    pub(crate) fn new(offset: f64, max: usize) -> Self {
        LnGammaTable {
            values: (0..=max).map(|n| ln_gamma(n as f64 + offset)).collect(),
        }
    }

    fn get(&self, n: u32) -> f64 {
        self.values[n as usize]
    }
}

/// Joint `ln p(w, z | α, β)` of the collapsed model, from count arrays
/// laid out as in [`TopicModel::counts`].
///
/// ```text
/// ln p(w | z) = T [ln Γ(Vβ) − V ln Γ(β)] + Σ_k [Σ_w ln Γ(n_kw + β) − ln Γ(n_k + Vβ)]
/// ln p(z)     = D [ln Γ(Tα) − T ln Γ(α)] + Σ_d [Σ_k ln Γ(n_dk + α) − ln Γ(n_d + Tα)]
/// ```
#[allow(clippy::too_many_arguments)]
pub(crate) fn log_likelihood_from_counts_cached(
    n_dk: &[u32],
    n_kw: &[u32],
    n_k: &[u32],
    topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    lg_alpha: &LnGammaTable,
    lg_beta: &LnGammaTable,
) -> f64 {
    let docs = n_dk.len() / topics;
    let v_beta = vocab_size as f64 * beta;
    let t_alpha = topics as f64 * alpha;

    let mut words = topics as f64 * (ln_gamma(v_beta) - vocab_size as f64 * ln_gamma(beta));
    for k in 0..topics {
        words += n_kw[k * vocab_size..(k + 1) * vocab_size]
            .iter()
            .map(|&n| lg_beta.get(n))
            .sum::<f64>();
        words -= ln_gamma(n_k[k] as f64 + v_beta);
    }

    let mut assign = docs as f64 * (ln_gamma(t_alpha) - topics as f64 * ln_gamma(alpha));
    for row in n_dk.chunks(topics) {
        let n_d: u32 = row.iter().sum();
        assign += row.iter().map(|&n| lg_alpha.get(n)).sum::<f64>();
        assign -= ln_gamma(n_d as f64 + t_alpha);
    }
    words + assign
}

/// Joint log-likelihood from raw counts.
pub fn log_likelihood_from_counts(
    n_dk: &[u32],
    n_kw: &[u32],
    n_k: &[u32],
    topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
) -> f64 {
    let total: u32 = n_k.iter().sum();
    let lg_alpha = LnGammaTable::new(alpha, total as usize);
    let lg_beta = LnGammaTable::new(beta, total as usize);
    log_likelihood_from_counts_cached(
        n_dk, n_kw, n_k, topics, vocab_size, alpha, beta, &lg_alpha, &lg_beta,
    )
}

/// Joint log-likelihood of a fitted model's final assignments.
pub fn log_likelihood(model: &TopicModel) -> f64 {
    let (n_dk, n_kw, n_k) = model.counts();
    log_likelihood_from_counts(
        n_dk,
        n_kw,
        n_k,
        model.topic_count(),
        model.vocab_size(),
        model.alpha(),
        model.beta(),
    )
}
