use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::version::VersionTracker;
use super::{BanditLearner, Predictor};
use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};
use crate::error::{Error, Result};

/// Baseline: keeps the bandit version space like BSOA but predicts a
/// uniformly random label from its projection.
#[derive(Debug, Clone)]
pub struct RandomConsistent {
    tracker: VersionTracker,
    rng: ChaCha8Rng,
    seed: u64,
    pinned: bool,
}

impl RandomConsistent {
    pub fn new(class: Arc<HypothesisClass>, seed: u64) -> Self {
        Self {
            tracker: VersionTracker::new(class),
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            pinned: false,
        }
    }

    /// Same learner, declared deterministic: with the seed fixed in advance
    /// its predictions are a function of the interaction history, so an
    /// adaptive adversary may play against it.
    pub fn with_fixed_seed(class: Arc<HypothesisClass>, seed: u64) -> Self {
        Self {
            pinned: true,
            ..Self::new(class, seed)
        }
    }

    pub fn version_space(&self) -> VersionSpace {
        self.tracker.space()
    }
}

impl Predictor for RandomConsistent {
    fn name(&self) -> String {
        if self.pinned {
            format!("random-consistent(seed={})", self.seed)
        } else {
            "random-consistent".into()
        }
    }

    fn is_deterministic(&self) -> bool {
        self.pinned
    }

    fn predict(&mut self, x: InstanceId) -> Result<LabelId> {
        self.tracker.class.check_instance(x)?;
        let labels = self.tracker.class.project_set(&self.tracker.current, x);
        labels
            .choose(&mut self.rng)
            .copied()
            .ok_or_else(|| Error::Invariant("empty projection for a nonempty version space".into()))
    }
}

impl BanditLearner for RandomConsistent {
    fn observe_loss(&mut self, x: InstanceId, prediction: LabelId, correct: bool) -> Result<()> {
        self.tracker.class.check_instance(x)?;
        self.tracker.class.check_label(prediction)?;
        self.tracker.bandit_update(x, prediction, correct);
        Ok(())
    }
}
