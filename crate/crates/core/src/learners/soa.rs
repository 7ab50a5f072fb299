//! Full-information Standard Optimal Algorithm: predict the label whose
//! consistent subclass keeps the largest Littlestone dimension.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::version::VersionTracker;
use super::{FullInfoLearner, Predictor};
use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};
use crate::dimensions::DimensionEngine;
use crate::error::{Error, Result};

/// SOA choice on `set`; smallest label among the maximizers.
pub(crate) fn soa_choice(
    engine: &mut DimensionEngine,
    set: &FixedBitSet,
    x: InstanceId,
) -> Option<LabelId> {
    engine
        .full_branch_values(set, x)
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(y, _)| y)
}

#[derive(Debug, Clone)]
pub struct Soa {
    engine: DimensionEngine,
    tracker: VersionTracker,
}

impl Soa {
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

    pub fn set_members(&mut self, members: FixedBitSet) {
        debug_assert!(!members.is_clear());
        self.tracker.current = members;
    }
}

impl Predictor for Soa {
    fn name(&self) -> String {
        "soa".into()
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn predict(&mut self, x: InstanceId) -> Result<LabelId> {
        self.tracker.class.check_instance(x)?;
        let current = self.tracker.current.clone();
        soa_choice(&mut self.engine, &current, x)
            .ok_or_else(|| Error::Invariant("empty projection for a nonempty version space".into()))
    }
}

impl FullInfoLearner for Soa {
    fn observe_label(&mut self, x: InstanceId, _prediction: LabelId, label: LabelId) -> Result<()> {
        self.tracker.class.check_instance(x)?;
        self.tracker.class.check_label(label)?;
        self.tracker.keep_eq(x, label);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::gen_constants;

    #[test]
    fn constants_cost_at_most_one_mistake() {
        for n in 1..=5 {
            let class = Arc::new(gen_constants(n, 2).unwrap());
            for truth in 0..n {
                let mut learner = Soa::new(class.clone());
                let mut mistakes = 0;
                for t in 0..5u32 {
                    let x = InstanceId(t % 2);
                    let y = learner.predict(x).unwrap();
                    let label = LabelId(truth as u32);
                    mistakes += usize::from(y != label);
                    learner.observe_label(x, y, label).unwrap();
                }
                assert!(mistakes <= 1, "n={n} truth={truth}");
            }
        }
    }
}
