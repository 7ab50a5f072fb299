use serde::{Deserialize, Serialize};

use super::{HypothesisClass, InstanceId, LabelId};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamExample {
    pub x: InstanceId,
    pub y: LabelId,
}

/// An ordered labeled sequence. `realizable` is an annotation that can be
/// recomputed with [`Stream::check_realizable`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stream {
    pub examples: Vec<StreamExample>,
    pub realizable: Option<bool>,
}

impl Stream {
    pub fn new(examples: Vec<StreamExample>) -> Self {
        Self {
            examples,
            realizable: None,
        }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn validate(&self, class: &HypothesisClass) -> Result<()> {
        for ex in &self.examples {
            class.check_instance(ex.x)?;
            class.check_label(ex.y)?;
        }
        Ok(())
    }

    /// Hypotheses that agree with every example.
    pub fn consistent_hypotheses(&self, class: &HypothesisClass) -> Vec<usize> {
        (0..class.num_hypotheses())
            .filter(|&h| self.examples.iter().all(|ex| class.eval(h, ex.x) == ex.y))
            .collect()
    }

    pub fn is_realizable_by(&self, class: &HypothesisClass) -> bool {
        !self.consistent_hypotheses(class).is_empty()
    }

    /// Recomputes and stores the realizability flag.
    pub fn check_realizable(&mut self, class: &HypothesisClass) -> bool {
        let r = self.is_realizable_by(class);
        self.realizable = Some(r);
        r
    }

    /// The stream labeled by `h` on the given instances.
    pub fn labeled_by(class: &HypothesisClass, h: usize, xs: &[InstanceId]) -> Self {
        Self {
            examples: xs
                .iter()
                .map(|&x| StreamExample {
                    x,
                    y: class.eval(h, x),
                })
                .collect(),
            realizable: Some(true),
        }
    }
}
