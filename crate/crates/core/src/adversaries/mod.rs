//! Opponents for the learners: oblivious streams fixed before the game and
//! an adaptive adversary that walks a shattered bandit tree.

mod adaptive;
mod oblivious;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::class::{load_stream, HypothesisClass, Stream};
use crate::error::{Error, Result};

pub use adaptive::AdaptiveBlAdversary;
pub use oblivious::{bltree_stream, uniform_label_stream, uniform_label_target, BlTreeSampler};

/// Adversary selection as written on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversarySpec {
    File(PathBuf),
    Uniform,
    BlTree,
    Adaptive,
}

impl AdversarySpec {
    pub fn is_adaptive(&self) -> bool {
        matches!(self, AdversarySpec::Adaptive)
    }
}

impl FromStr for AdversarySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(AdversarySpec::Uniform),
            "bltree" => Ok(AdversarySpec::BlTree),
            "adaptive" => Ok(AdversarySpec::Adaptive),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(AdversarySpec::File(PathBuf::from(path))),
                _ => Err(Error::Config(format!(
                    "unknown adversary {s:?}; expected file:<path>, uniform, bltree or adaptive"
                ))),
            },
        }
    }
}

impl fmt::Display for AdversarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversarySpec::File(p) => write!(f, "file:{}", p.display()),
            AdversarySpec::Uniform => f.write_str("uniform"),
            AdversarySpec::BlTree => f.write_str("bltree"),
            AdversarySpec::Adaptive => f.write_str("adaptive"),
        }
    }
}

/// One game's opponent.
pub enum Opponent {
    Oblivious(Stream),
    Adaptive(AdaptiveBlAdversary),
}

/// Builds a fresh opponent per trial; expensive preparation (loading the
/// stream file, extracting the witness tree) happens once.
#[derive(Debug, Clone)]
pub struct AdversaryFactory {
    spec: AdversarySpec,
    kind: Prepared,
}

#[derive(Debug, Clone)]
enum Prepared {
    Fixed(Stream),
    Uniform { class: Arc<HypothesisClass>, horizon: usize },
    BlTree(BlTreeSampler),
    Adaptive(AdaptiveBlAdversary),
}

impl AdversaryFactory {
    pub fn new(spec: AdversarySpec, class: Arc<HypothesisClass>, horizon: usize) -> Result<Self> {
        let kind = match &spec {
            AdversarySpec::File(path) => Prepared::Fixed(load_stream(path, &class)?),
            AdversarySpec::Uniform => {
                if class.num_hypotheses() == 0 {
                    return Err(Error::input("the uniform adversary needs a nonempty class"));
                }
                Prepared::Uniform { class, horizon }
            }
            AdversarySpec::BlTree => Prepared::BlTree(BlTreeSampler::new(class, horizon)?),
            AdversarySpec::Adaptive => Prepared::Adaptive(AdaptiveBlAdversary::new(class)?),
        };
        Ok(Self { spec, kind })
    }

    /// Replays a fixed stream.
    pub fn from_stream(stream: Stream, id: &str) -> Self {
        Self {
            spec: AdversarySpec::File(PathBuf::from(id)),
            kind: Prepared::Fixed(stream),
        }
    }

    pub fn spec(&self) -> &AdversarySpec {
        &self.spec
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self.kind, Prepared::Adaptive(_))
    }

    pub fn build(&self, seed: u64) -> Result<Opponent> {
        Ok(match &self.kind {
            Prepared::Fixed(stream) => Opponent::Oblivious(stream.clone()),
            Prepared::Uniform { class, horizon } => {
                Opponent::Oblivious(uniform_label_stream(class, *horizon, seed)?)
            }
            Prepared::BlTree(sampler) => Opponent::Oblivious(sampler.sample(seed)),
            Prepared::Adaptive(fresh) => Opponent::Adaptive(fresh.clone()),
        })
    }
}
