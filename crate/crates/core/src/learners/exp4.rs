//! Exponential weights over an expert pool with importance-weighted loss
//! estimates, for bandit feedback.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::experts::{build_expert_pool, ExpertPool, ExpertRunner};
use super::{full_support, BanditLearner, Predictor, Support};
use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};
use crate::dimensions::ldim;
use crate::error::{Error, Result};

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp4Config {
    /// Learning rate; defaults to `gamma / k`.
    pub eta: Option<f64>,
    /// Exploration mass; defaults to `min(1, √(k · ln N / T))`.
    pub gamma: Option<f64>,
    pub expert_cap: usize,
}

impl Default for Exp4Config {
    fn default() -> Self {
        Self {
            eta: None,
            gamma: None,
            expert_cap: crate::Caps::default().experts,
        }
    }
}

#[derive(Debug, Clone)]
struct Pending {
    x: InstanceId,
    advice: Vec<LabelId>,
    dist: Vec<(LabelId, f64)>,
}

#[derive(Debug, Clone)]
pub struct Exp4 {
    runner: ExpertRunner,
    support: Arc<Support>,
    /// Expert weights, rescaled so the largest stays near 1.
    weights: Vec<f64>,
    eta: f64,
    gamma: f64,
    rng: ChaCha8Rng,
    pending: Option<Pending>,
}

impl Exp4 {
    /// Experts over `class` with `L = ldim(class)` overrides, exploring over
    /// every label of the class.
    pub fn new(class: Arc<HypothesisClass>, horizon: usize, config: Exp4Config, seed: u64) -> Result<Self> {
        let support = full_support(&class);
        Self::with_support(class, horizon, support, config, seed)
    }

    /// Like [`Exp4::new`] but exploration at `x` is uniform over `support[x]`
    /// and `k` is the largest support size.
    pub fn with_support(
        class: Arc<HypothesisClass>,
        horizon: usize,
        support: Support,
        config: Exp4Config,
        seed: u64,
    ) -> Result<Self> {
        let l = ldim(&VersionSpace::full(class.clone())).max(0) as usize;
        let pool = build_expert_pool(class, horizon, l, config.expert_cap)?;
        Self::from_pool(Arc::new(pool), support, config, seed)
    }

    pub fn from_pool(pool: Arc<ExpertPool>, support: Support, config: Exp4Config, seed: u64) -> Result<Self> {
        let class = pool.class().clone();
        if support.len() != class.num_instances() || support.iter().any(|s| s.is_empty()) {
            return Err(Error::Config("support must list at least one label per instance".into()));
        }
        for &y in support.iter().flatten() {
            class.check_label(y)?;
        }
        let k = support.iter().map(Vec::len).max().unwrap_or(1);
        let n = pool.len();
        let horizon = pool.horizon().max(1);
        let gamma = match config.gamma {
            Some(g) if (0.0..=1.0).contains(&g) => g,
            Some(g) => return Err(Error::Config(format!("gamma must lie in [0, 1], got {g}"))),
            None => (k as f64 * (n as f64).ln() / horizon as f64).sqrt().min(1.0),
        };
        let eta = match config.eta {
            Some(e) if e > 0.0 && e.is_finite() => e,
            Some(e) => return Err(Error::Config(format!("eta must be positive, got {e}"))),
            None => gamma / k as f64,
        };
        let support = Arc::new(support);
        Ok(Self {
            runner: ExpertRunner::new(pool, Some(support.clone())),
            support,
            weights: vec![1.0; n],
            eta,
            gamma,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn num_experts(&self) -> usize {
        self.weights.len()
    }

    /// Log-weights up to a common additive constant.
    pub fn log_weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.ln()).collect()
    }

    pub fn set_log_weights(&mut self, log_weights: Vec<f64>) -> Result<()> {
        if log_weights.len() != self.weights.len() || log_weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Config("log-weights must be finite, one per expert".into()));
        }
        let top = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        self.weights = log_weights.iter().map(|lw| (lw - top).exp()).collect();
        Ok(())
    }

    fn mix(&self, x: InstanceId, advice: &[LabelId]) -> Result<Vec<(LabelId, f64)>> {
        let labels = &self.support[x.index()];
        let mut by_label = vec![0.0; self.runner.pool().class().num_labels()];
        for (&w, y) in self.weights.iter().zip(advice) {
            by_label[y.index()] += w;
        }
        for (y, &m) in by_label.iter().enumerate() {
            if m > 0.0 && !labels.contains(&LabelId(y as u32)) {
                return Err(Error::Invariant(format!("expert advice {y} outside the support")));
            }
        }
        let total: f64 = labels.iter().map(|y| by_label[y.index()]).sum();
        let explore = self.gamma / labels.len() as f64;
        let dist: Vec<(LabelId, f64)> = labels
            .iter()
            .map(|&y| (y, (1.0 - self.gamma) * by_label[y.index()] / total + explore))
            .collect();
        let sum: f64 = dist.iter().map(|(_, p)| p).sum();
        if !sum.is_finite() || (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Invariant(format!("sampling distribution sums to {sum}")));
        }
        Ok(dist)
    }

    /// Sampling distribution over `support[x]` for the current round.
    pub fn distribution(&mut self, x: InstanceId) -> Result<Vec<(LabelId, f64)>> {
        let advice = self.runner.advice(x)?;
        self.mix(x, &advice)
    }

    /// Estimated loss charged to the played label.
    pub fn loss_estimate(probability: f64, correct: bool) -> f64 {
        if correct {
            0.0
        } else {
            1.0 / probability
        }
    }
}

impl Predictor for Exp4 {
    fn name(&self) -> String {
        format!("exp4(eta={:.4},gamma={:.4},N={})", self.eta, self.gamma, self.weights.len())
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn predict(&mut self, x: InstanceId) -> Result<LabelId> {
        let advice = self.runner.advice(x)?;
        let dist = self.mix(x, &advice)?;
        let u: f64 = self.rng.gen();
        let mut acc = 0.0;
        let mut choice = dist.last().map(|&(y, _)| y).expect("support is nonempty");
        for &(y, p) in &dist {
            acc += p;
            if u < acc {
                choice = y;
                break;
            }
        }
        self.pending = Some(Pending { x, advice, dist });
        Ok(choice)
    }
}

impl BanditLearner for Exp4 {
    fn observe_loss(&mut self, x: InstanceId, prediction: LabelId, correct: bool) -> Result<()> {
        let pending = self
            .pending
            .take()
            .filter(|p| p.x == x)
            .ok_or_else(|| Error::Contract("feedback without a matching prediction".into()))?;
        let p = pending
            .dist
            .iter()
            .find(|(y, _)| *y == prediction)
            .map(|&(_, p)| p)
            .filter(|&p| p > 0.0)
            .ok_or_else(|| Error::Contract(format!("label {} was not playable", prediction.0)))?;
        let loss = Self::loss_estimate(p, correct);
        if loss > 0.0 {
            let factor = (-self.eta * loss).exp();
            for (w, y) in self.weights.iter_mut().zip(&pending.advice) {
                if *y == prediction {
                    *w *= factor;
                }
            }
            let top = self.weights.iter().cloned().fold(0.0, f64::max);
            if top < 1e-100 {
                self.weights.iter_mut().for_each(|w| *w /= top);
            }
        }
        self.runner.advance(x, &pending.advice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::gen_constants;

    fn constants(n: usize, m: usize) -> Arc<HypothesisClass> {
        Arc::new(gen_constants(n, m).unwrap())
    }

    #[test]
    fn defaults() {
        let learner = Exp4::new(constants(3, 2), 200, Exp4Config::default(), 1).unwrap();
        assert_eq!(learner.num_experts(), 601);
        let gamma = (3.0 * 601f64.ln() / 200.0).sqrt();
        assert!((learner.gamma() - gamma).abs() < 1e-12);
        assert!((learner.eta() - gamma / 3.0).abs() < 1e-12);
        assert!(!learner.is_deterministic());
    }

    #[test]
    fn full_exploration_is_uniform() {
        let config = Exp4Config {
            gamma: Some(1.0),
            ..Exp4Config::default()
        };
        let mut learner = Exp4::new(constants(4, 1), 10, config, 2).unwrap();
        learner
            .set_log_weights((0..learner.num_experts()).map(|i| -(i as f64)).collect())
            .unwrap();
        for (_, p) in learner.distribution(InstanceId(0)).unwrap() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn single_expert_without_exploration_follows_it() {
        let class = constants(3, 1);
        let config = Exp4Config {
            gamma: Some(0.0),
            eta: Some(0.5),
            ..Exp4Config::default()
        };
        let pool = Arc::new(build_expert_pool(class.clone(), 5, 0, 10).unwrap());
        let mut learner = Exp4::from_pool(pool, full_support(&class), config, 3).unwrap();
        for _ in 0..5 {
            let y = learner.predict(InstanceId(0)).unwrap();
            assert_eq!(y, LabelId(0));
            learner.observe_loss(InstanceId(0), y, false).unwrap();
        }
    }

    #[test]
    fn estimator_is_unbiased() {
        let mut learner = Exp4::new(constants(3, 2), 20, Exp4Config::default(), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let w = (0..learner.num_experts()).map(|_| rng.gen_range(-5.0..0.0)).collect();
            learner.set_log_weights(w).unwrap();
            let dist = learner.distribution(InstanceId(1)).unwrap();
            let sum: f64 = dist.iter().map(|(_, p)| p).sum();
            assert!((sum - 1.0).abs() < 1e-12);
            for &(truth, _) in &dist {
                for &(y, _) in &dist {
                    // E[estimate(y)] = Σ_ŷ p(ŷ) · [ŷ = y] · estimate
                    let expected: f64 = dist
                        .iter()
                        .filter(|(played, _)| *played == y)
                        .map(|&(played, p)| p * Exp4::loss_estimate(p, played == truth))
                        .sum();
                    let target = if y == truth { 0.0 } else { 1.0 };
                    assert!((expected - target).abs() < 1e-12);
                }
            }
            for &(_, p) in &dist {
                assert!(p >= learner.gamma() / 3.0 - 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = Exp4Config {
            gamma: Some(1.5),
            ..Exp4Config::default()
        };
        assert!(matches!(Exp4::new(constants(2, 1), 5, bad, 0), Err(Error::Config(_))));
        let bad = Exp4Config {
            eta: Some(0.0),
            ..Exp4Config::default()
        };
        assert!(matches!(Exp4::new(constants(2, 1), 5, bad, 0), Err(Error::Config(_))));
        let tiny = Exp4Config {
            expert_cap: 10,
            ..Exp4Config::default()
        };
        assert!(matches!(Exp4::new(constants(3, 2), 200, tiny, 0), Err(Error::Capacity { .. })));
    }
}
