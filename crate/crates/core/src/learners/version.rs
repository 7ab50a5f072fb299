use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};

/// Consistent-hypothesis tracking shared by the version-space learners.
///
/// A restriction that would leave no hypothesis (the stream is not
/// realizable) resets the version space to the full class.
#[derive(Debug, Clone)]
pub(crate) struct VersionTracker {
    pub(crate) class: Arc<HypothesisClass>,
    pub(crate) current: FixedBitSet,
    pub(crate) resets: usize,
}

impl VersionTracker {
    pub(crate) fn new(class: Arc<HypothesisClass>) -> Self {
        let current = class.all_members();
        Self {
            class,
            current,
            resets: 0,
        }
    }

    fn replace(&mut self, next: FixedBitSet) {
        if next.is_clear() {
            self.current = self.class.all_members();
            self.resets += 1;
        } else {
            self.current = next;
        }
    }

    pub(crate) fn keep_eq(&mut self, x: InstanceId, y: LabelId) {
        let next = self.class.restrict_eq_set(&self.current, x, y);
        self.replace(next);
    }

    pub(crate) fn keep_neq(&mut self, x: InstanceId, y: LabelId) {
        let next = self.class.restrict_neq_set(&self.current, x, y);
        self.replace(next);
    }

    pub(crate) fn bandit_update(&mut self, x: InstanceId, prediction: LabelId, correct: bool) {
        if correct {
            self.keep_eq(x, prediction);
        } else {
            self.keep_neq(x, prediction);
        }
    }

    pub(crate) fn space(&self) -> VersionSpace {
        VersionSpace::from_bits(self.class.clone(), self.current.clone())
    }
}
