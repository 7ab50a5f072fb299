//! Online learners.
//!
//! A learner receives `x_t`, emits a prediction, and then gets feedback.
//! Bandit learners implement [`BanditLearner`] and only ever see the loss
//! bit; full-information learners implement [`FullInfoLearner`] and see the
//! true label. The two traits are disjoint so a bandit learner cannot be
//! handed a label by mistake.

mod bounds;
mod bsoa;
mod exp4;
mod experts;
mod random;
mod remap;
mod soa;
mod version;

use crate::class::{HypothesisClass, InstanceId, LabelId};
use crate::error::Result;

pub use bounds::{regret_bounds, RegretBounds};
pub use bsoa::Bsoa;
pub use exp4::{Exp4, Exp4Config};
pub use experts::{build_expert_pool, expert_count, Expert, ExpertPool, ExpertRunner};
pub use random::RandomConsistent;
pub use remap::{remap_build, remap_stream, RemapTable, RemapWrapper};
pub use soa::Soa;

pub trait Predictor {
    /// Identity string, e.g. `"bsoa"` or `"exp4(eta=0.1,gamma=0.3,N=601)"`.
    fn name(&self) -> String;

    /// Whether predictions are a fixed function of the interaction history.
    fn is_deterministic(&self) -> bool;

    fn predict(&mut self, x: InstanceId) -> Result<LabelId>;
}

pub trait BanditLearner: Predictor {
    /// Feedback after predicting `prediction` on `x`: only whether it was right.
    fn observe_loss(&mut self, x: InstanceId, prediction: LabelId, correct: bool) -> Result<()>;
}

pub trait FullInfoLearner: Predictor {
    fn observe_label(&mut self, x: InstanceId, prediction: LabelId, label: LabelId) -> Result<()>;
}

/// A learner of either feedback kind.
pub enum Learner {
    Bandit(Box<dyn BanditLearner>),
    Full(Box<dyn FullInfoLearner>),
}

impl Learner {
    pub fn name(&self) -> String {
        match self {
            Learner::Bandit(l) => l.name(),
            Learner::Full(l) => l.name(),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            Learner::Bandit(l) => l.is_deterministic(),
            Learner::Full(l) => l.is_deterministic(),
        }
    }

    pub fn predict(&mut self, x: InstanceId) -> Result<LabelId> {
        match self {
            Learner::Bandit(l) => l.predict(x),
            Learner::Full(l) => l.predict(x),
        }
    }
}

/// Valid prediction targets per instance, used to confine exploration.
pub type Support = Vec<Vec<LabelId>>;

/// Every label of `class` at every instance.
pub fn full_support(class: &HypothesisClass) -> Support {
    class.instances().map(|_| class.labels().collect()).collect()
}
