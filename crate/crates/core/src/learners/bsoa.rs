//! Bandit Standard Optimal Algorithm.
//!
//! Predicts the label whose "wrong" branch leaves the version space with the
//! smallest bandit Littlestone dimension. On a realizable stream every
//! mistake lowers `bldim(V)` by at least one, so the total number of
//! mistakes is at most `bldim(H)`.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::version::VersionTracker;
use super::{BanditLearner, Predictor};
use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};
use crate::dimensions::DimensionEngine;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Bsoa {
    engine: DimensionEngine,
    tracker: VersionTracker,
}

impl Bsoa {
    pub fn new(class: Arc<HypothesisClass>) -> Self {
        Self {
            engine: DimensionEngine::new(class.clone()),
            tracker: VersionTracker::new(class),
        }
    }

    pub fn version_space(&self) -> VersionSpace {
        self.tracker.space()
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.tracker.current
    }

    /// Replaces the version space; used to branch an exhaustive search.
    pub fn set_members(&mut self, members: FixedBitSet) {
        debug_assert!(!members.is_clear());
        self.tracker.current = members;
    }

    /// Number of resets to the full class caused by non-realizable feedback.
    pub fn resets(&self) -> usize {
        self.tracker.resets
    }

    /// `bldim` of the current version space.
    pub fn potential(&mut self) -> i32 {
        let current = self.tracker.current.clone();
        self.engine.bldim_of(&current)
    }
}

impl Predictor for Bsoa {
    fn name(&self) -> String {
        "bsoa".into()
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn predict(&mut self, x: InstanceId) -> Result<LabelId> {
        self.tracker.class.check_instance(x)?;
        let current = self.tracker.current.clone();
        self.engine
            .bandit_branch_values(&current, x)
            .into_iter()
            .min_by_key(|&(y, d)| (d, y))
            .map(|(y, _)| y)
            .ok_or_else(|| Error::Invariant("empty projection for a nonempty version space".into()))
    }
}

impl BanditLearner for Bsoa {
    fn observe_loss(&mut self, x: InstanceId, prediction: LabelId, correct: bool) -> Result<()> {
        self.tracker.class.check_instance(x)?;
        self.tracker.class.check_label(prediction)?;
        self.tracker.bandit_update(x, prediction, correct);
        Ok(())
    }
}
