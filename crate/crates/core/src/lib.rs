//! Combinatorial dimensions, optimal learners and lower-bound adversaries for
//! online multiclass classification under bandit feedback on finite classes.
//!
//! * [`class`]: hypothesis tables, version spaces, generators and file formats.
//! * [`dimensions`]: Littlestone, Bandit Littlestone and Sequential Graph
//!   dimensions with shattered-tree witnesses.
//! * [`learners`]: BSOA, full-information SOA, the experts + EXP4 agnostic
//!   learner, label remapping, and baselines.
//! * [`adversaries`]: lower-bound streams and the adaptive tree adversary.
//! * [`harness`]: games, regret, Monte Carlo estimates and bound checks.

pub mod adversaries;
pub mod caps;
pub mod class;
pub mod dimensions;
pub mod error;
pub mod harness;
pub mod learners;
pub mod seed;

pub use caps::Caps;
pub use class::{HypothesisClass, InstanceId, LabelId, Stream, StreamExample, VersionSpace};
pub use error::{Error, Result};
