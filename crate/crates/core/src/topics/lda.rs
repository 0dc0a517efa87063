use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::likelihood::{log_likelihood_from_counts_cached, LnGammaTable};
use super::{LdaConfig, TopicError};
use crate::corpus::{CleanDoc, Vocabulary};
use crate::matrix::Matrix;

/// Collapsed Gibbs sampler state for one chain.
///
/// Tokens are visited in document order, then token order.
#[derive(Debug, Clone)]
pub struct GibbsSampler {
    topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    docs: Vec<Vec<usize>>,
    assignments: Vec<Vec<usize>>,
    n_dk: Vec<u32>,
    n_kw: Vec<u32>,
    n_k: Vec<u32>,
    rng: ChaCha8Rng,
    probs: Vec<f64>,
    lg_alpha: LnGammaTable,
    lg_beta: LnGammaTable,
}

impl GibbsSampler {
    /// Encodes the corpus and draws a uniform random initial assignment.
    pub fn new(docs: &[CleanDoc], vocab: &Vocabulary, cfg: &LdaConfig) -> Result<Self, TopicError> {
        cfg.validate()?;
        if docs.is_empty() {
            return Err(TopicError::EmptyCorpus);
        }
        let mut encoded = Vec::with_capacity(docs.len());
        for doc in docs {
            if doc.tokens.is_empty() {
                return Err(TopicError::EmptyDocument { id: doc.id.clone() });
            }
            encoded.push(vocab.encode(doc)?);
        }
        Ok(Self::from_encoded(encoded, vocab.len(), cfg))
    }

    /// Starts a chain on documents already mapped to term indices.
    /// Every document must be nonempty and every index below `vocab_size`.
    pub fn from_encoded(docs: Vec<Vec<usize>>, vocab_size: usize, cfg: &LdaConfig) -> Self {
        let topics = cfg.topic_count;
        let alpha = cfg.alpha();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut n_dk = vec![0u32; docs.len() * topics];
        let mut n_kw = vec![0u32; topics * vocab_size];
        let mut n_k = vec![0u32; topics];
        let mut assignments = Vec::with_capacity(docs.len());
        for (d, doc) in docs.iter().enumerate() {
            let z: Vec<usize> = doc.iter().map(|_| rng.gen_range(0..topics)).collect();
            for (&w, &k) in doc.iter().zip(&z) {
                n_dk[d * topics + k] += 1;
                n_kw[k * vocab_size + w] += 1;
                n_k[k] += 1;
            }
            assignments.push(z);
        }
        let total: usize = docs.iter().map(Vec::len).sum();
        GibbsSampler {
            topics,
            vocab_size,
            alpha,
            beta: cfg.beta,
            docs,
            assignments,
            n_dk,
            n_kw,
            n_k,
            rng,
            probs: vec![0.0; topics],
            lg_alpha: LnGammaTable::new(alpha, total),
            lg_beta: LnGammaTable::new(cfg.beta, total),
        }
    }

    /// Normalized full conditional of token `i` in document `d` with the
    /// token's own assignment removed:
    /// `p(k) ∝ (n_dk + α)(n_kw + β) / (n_k + Vβ)`.
    pub fn conditional(&self, d: usize, i: usize) -> Vec<f64> {
        let mut s = self.clone();
        let w = s.docs[d][i];
        let k = s.assignments[d][i];
        s.decrement(d, w, k);
        s.fill_conditional(d, w);
        s.probs
    }

    fn decrement(&mut self, d: usize, w: usize, k: usize) {
        self.n_dk[d * self.topics + k] -= 1;
        self.n_kw[k * self.vocab_size + w] -= 1;
        self.n_k[k] -= 1;
    }

    fn increment(&mut self, d: usize, w: usize, k: usize) {
        self.n_dk[d * self.topics + k] += 1;
        self.n_kw[k * self.vocab_size + w] += 1;
        self.n_k[k] += 1;
    }

    fn fill_conditional(&mut self, d: usize, w: usize) {
        let v_beta = self.vocab_size as f64 * self.beta;
        let mut total = 0.0;
        for k in 0..self.topics {
            let p = (self.n_dk[d * self.topics + k] as f64 + self.alpha)
                * (self.n_kw[k * self.vocab_size + w] as f64 + self.beta)
                / (self.n_k[k] as f64 + v_beta);
            self.probs[k] = p;
            total += p;
        }
        for p in &mut self.probs {
            *p /= total;
        }
    }

    fn draw(&mut self) -> usize {
        let u: f64 = self.rng.gen();
        let mut acc = 0.0;
        for (k, p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        // Rounding left the cumulative sum a hair below one.
        self.probs
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(self.topics - 1)
    }

    /// One full pass over every token.
    pub fn sweep(&mut self) {
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.assignments[d][i];
                self.decrement(d, w, old);
                self.fill_conditional(d, w);
                let new = self.draw();
                self.assignments[d][i] = new;
                self.increment(d, w, new);
            }
        }
    }

    pub fn log_likelihood(&self) -> f64 {
        log_likelihood_from_counts_cached(
            &self.n_dk,
            &self.n_kw,
            &self.n_k,
            self.topics,
            self.vocab_size,
            self.alpha,
            self.beta,
            &self.lg_alpha,
            &self.lg_beta,
        )
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    pub fn topic_totals(&self) -> &[u32] {
        &self.n_k
    }

    /// Freezes the chain into smoothed φ and θ estimates.
    pub fn finalize(self, doc_ids: Vec<String>, trace: Vec<f64>) -> TopicModel {
        let (t, v) = (self.topics, self.vocab_size);
        let mut phi = Matrix::zeros(t, v);
        let v_beta = v as f64 * self.beta;
        for k in 0..t {
            let denom = self.n_k[k] as f64 + v_beta;
            for w in 0..v {
                phi.set(k, w, (self.n_kw[k * v + w] as f64 + self.beta) / denom);
            }
        }
        let mut theta = Matrix::zeros(self.docs.len(), t);
        let t_alpha = t as f64 * self.alpha;
        for (d, doc) in self.docs.iter().enumerate() {
            let denom = doc.len() as f64 + t_alpha;
            for k in 0..t {
                theta.set(d, k, (self.n_dk[d * t + k] as f64 + self.alpha) / denom);
            }
        }
        TopicModel {
            topics: t,
            vocab_size: v,
            alpha: self.alpha,
            beta: self.beta,
            doc_ids,
            docs: self.docs,
            assignments: self.assignments,
            n_dk: self.n_dk,
            n_kw: self.n_kw,
            n_k: self.n_k,
            phi,
            theta,
            log_likelihood_trace: trace,
        }
    }
}

/// A fitted model. Immutable once built.
#[derive(Debug, Clone)]
pub struct TopicModel {
    topics: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    doc_ids: Vec<String>,
    docs: Vec<Vec<usize>>,
    assignments: Vec<Vec<usize>>,
    n_dk: Vec<u32>,
    n_kw: Vec<u32>,
    n_k: Vec<u32>,
    phi: Matrix,
    theta: Matrix,
    log_likelihood_trace: Vec<f64>,
}

/// Runs `cfg.iterations` sweeps of collapsed Gibbs sampling, recording the
/// joint log-likelihood after every sweep.
pub fn fit_lda(
    docs: &[CleanDoc],
    vocab: &Vocabulary,
    cfg: &LdaConfig,
) -> Result<TopicModel, TopicError> {
    let mut sampler = GibbsSampler::new(docs, vocab, cfg)?;
    let mut trace = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        sampler.sweep();
        trace.push(sampler.log_likelihood());
    }
    let ids = docs.iter().map(|d| d.id.clone()).collect();
    Ok(sampler.finalize(ids, trace))
}

impl TopicModel {
    pub fn topic_count(&self) -> usize {
        self.topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn docs(&self) -> &[Vec<usize>] {
        &self.docs
    }

    /// `P(word | topic)`, one row per topic.
    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    /// `P(topic | document)`, one row per document.
    pub fn theta(&self) -> &Matrix {
        &self.theta
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    pub fn log_likelihood_trace(&self) -> &[f64] {
        &self.log_likelihood_trace
    }

    pub fn final_log_likelihood(&self) -> f64 {
        self.log_likelihood_trace
            .last()
            .copied()
            .unwrap_or(f64::NAN)
    }

    /// Stored counts as `(n_dk, n_kw, n_k)`, flattened row-major.
    pub fn counts(&self) -> (&[u32], &[u32], &[u32]) {
        (&self.n_dk, &self.n_kw, &self.n_k)
    }
}
