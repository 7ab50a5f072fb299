//! Learner-versus-adversary games, regret, Monte Carlo estimates and bound
//! annotations.

mod montecarlo;
mod select;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adversaries::Opponent;
use crate::class::{HypothesisClass, InstanceId, LabelId, Stream};
use crate::error::{Error, Result};
use crate::learners::Learner;

pub use montecarlo::{
    bound_check, exact_uniform_expectation, monte_carlo, play_trial, BoundCheck, BoundKind, Dimensions,
    RegretReport, TrialOutcome, SEED_RULE,
};
pub use select::{LearnerFactory, LearnerSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// The learner sees only whether its prediction was correct.
    Bandit,
    /// The learner sees the true label.
    Full,
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bandit" => Ok(Protocol::Bandit),
            "full" => Ok(Protocol::Full),
            _ => Err(Error::Config(format!("unknown protocol {s:?}; expected bandit or full"))),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Bandit => "bandit",
            Protocol::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Round {
    pub x: InstanceId,
    pub prediction: LabelId,
    pub truth: LabelId,
    pub loss: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameTrace {
    pub protocol: Protocol,
    pub learner: String,
    pub adversary: String,
    pub seed: Option<u64>,
    pub rounds: Vec<Round>,
    /// Hypothesis an adaptive adversary committed to at the end of the game.
    pub committed: Option<usize>,
}

pub const TRACE_HEADER: &str = "round,x,yhat,ytrue,loss";

impl GameTrace {
    pub fn cumulative_loss(&self) -> u64 {
        self.rounds.iter().filter(|r| r.loss).count() as u64
    }

    /// Examples the learner faced, with their true labels.
    pub fn stream(&self) -> Stream {
        Stream::new(
            self.rounds
                .iter()
                .map(|r| crate::class::StreamExample { x: r.x, y: r.truth })
                .collect(),
        )
    }

    /// Rounds are numbered from 1; ids are written by name.
    pub fn to_csv(&self, class: &HypothesisClass) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for (t, r) in self.rounds.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t + 1,
                class.instance_name(r.x),
                class.label_name(r.prediction),
                class.label_name(r.truth),
                u8::from(r.loss)
            ));
        }
        out
    }
}

/// Plays one game of at most `horizon` rounds; an oblivious stream shorter
/// than the horizon ends the game early.
pub fn run_game(
    class: &HypothesisClass,
    learner: &mut Learner,
    opponent: Opponent,
    protocol: Protocol,
    horizon: usize,
) -> Result<GameTrace> {
    if protocol == Protocol::Bandit && matches!(learner, Learner::Full(_)) {
        return Err(Error::Config(format!(
            "{} needs full-information feedback and cannot play the bandit protocol",
            learner.name()
        )));
    }
    let name = learner.name();
    let mut rounds = Vec::new();
    let mut committed = None;
    match opponent {
        Opponent::Oblivious(stream) => {
            stream.validate(class)?;
            for e in stream.examples.iter().take(horizon) {
                let prediction = learner.predict(e.x)?;
                class.check_label(prediction)?;
                let correct = prediction == e.y;
                match learner {
                    Learner::Bandit(l) => l.observe_loss(e.x, prediction, correct)?,
                    Learner::Full(l) => l.observe_label(e.x, prediction, e.y)?,
                }
                rounds.push(Round {
                    x: e.x,
                    prediction,
                    truth: e.y,
                    loss: !correct,
                });
            }
        }
        Opponent::Adaptive(mut adversary) => {
            if protocol != Protocol::Bandit {
                return Err(Error::Config("the adaptive adversary plays only the bandit protocol".into()));
            }
            if !learner.is_deterministic() {
                return Err(Error::Config(format!(
                    "the adaptive adversary needs a deterministic learner; {name} is randomized"
                )));
            }
            let Learner::Bandit(l) = learner else {
                unreachable!("full-information learners were rejected above")
            };
            let mut feedback = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                let x = adversary.present();
                let prediction = l.predict(x)?;
                class.check_label(prediction)?;
                let correct = adversary.respond(x, prediction)?;
                l.observe_loss(x, prediction, correct)?;
                feedback.push((x, prediction, correct));
            }
            let h = adversary.finish();
            for (x, prediction, correct) in feedback {
                let truth = class.eval(h, x);
                if (truth == prediction) != correct {
                    return Err(Error::Invariant(format!(
                        "adaptive feedback is inconsistent with committed hypothesis {}",
                        class.hypothesis_name(h)
                    )));
                }
                rounds.push(Round {
                    x,
                    prediction,
                    truth,
                    loss: !correct,
                });
            }
            committed = Some(h);
        }
    }
    Ok(GameTrace {
        protocol,
        learner: name,
        adversary: String::new(),
        seed: None,
        rounds,
        committed,
    })
}

/// Loss of the best fixed hypothesis on the trace's examples.
pub fn best_hypothesis_loss(trace: &GameTrace, class: &HypothesisClass) -> u64 {
    (0..class.num_hypotheses())
        .map(|h| trace.rounds.iter().filter(|r| class.eval(h, r.x) != r.truth).count() as u64)
        .min()
        .unwrap_or(0)
}

/// Cumulative loss, best-hypothesis loss and their difference.
pub fn regret(trace: &GameTrace, class: &HypothesisClass) -> TrialOutcome {
    let loss = trace.cumulative_loss();
    let best = best_hypothesis_loss(trace, class);
    TrialOutcome {
        loss,
        best_loss: best,
        regret: loss as i64 - best as i64,
    }
}
