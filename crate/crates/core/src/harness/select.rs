use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::class::{HypothesisClass, VersionSpace};
use crate::dimensions::ldim;
use crate::error::{Error, Result};
use crate::learners::{
    build_expert_pool, full_support, remap_build, Bsoa, Exp4, Exp4Config, ExpertPool, Learner, RandomConsistent,
    RemapTable, RemapWrapper, Soa, Support,
};

/// Learner selection as written on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerSpec {
    Bsoa,
    Soa,
    Exp4,
    Exp4Remap,
    RandomConsistent,
}

impl LearnerSpec {
    pub fn is_deterministic(self) -> bool {
        matches!(self, LearnerSpec::Bsoa | LearnerSpec::Soa)
    }
}

impl FromStr for LearnerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bsoa" => LearnerSpec::Bsoa,
            "soa" => LearnerSpec::Soa,
            "exp4" => LearnerSpec::Exp4,
            "exp4-remap" => LearnerSpec::Exp4Remap,
            "random-consistent" => LearnerSpec::RandomConsistent,
            _ => {
                return Err(Error::Config(format!(
                    "unknown learner {s:?}; expected bsoa, soa, exp4, exp4-remap or random-consistent"
                )))
            }
        })
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LearnerSpec::Bsoa => "bsoa",
            LearnerSpec::Soa => "soa",
            LearnerSpec::Exp4 => "exp4",
            LearnerSpec::Exp4Remap => "exp4-remap",
            LearnerSpec::RandomConsistent => "random-consistent",
        })
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    Plain,
    Experts {
        pool: Arc<ExpertPool>,
        support: Support,
        remap: Option<Arc<RemapTable>>,
    },
}

/// Builds a fresh learner per trial. Expert pools and remap tables are built
/// once and shared.
#[derive(Debug, Clone)]
pub struct LearnerFactory {
    spec: LearnerSpec,
    class: Arc<HypothesisClass>,
    config: Exp4Config,
    prepared: Prepared,
}

impl LearnerFactory {
    pub fn new(spec: LearnerSpec, class: Arc<HypothesisClass>, horizon: usize, config: Exp4Config) -> Result<Self> {
        let prepared = match spec {
            LearnerSpec::Exp4 => {
                let l = ldim(&VersionSpace::full(class.clone())).max(0) as usize;
                let pool = build_expert_pool(class.clone(), horizon, l, config.expert_cap)?;
                Prepared::Experts {
                    pool: Arc::new(pool),
                    support: full_support(&class),
                    remap: None,
                }
            }
            LearnerSpec::Exp4Remap => {
                let (remapped, table) = remap_build(&class)?;
                let remapped = Arc::new(remapped);
                let l = ldim(&VersionSpace::full(remapped.clone())).max(0) as usize;
                let pool = build_expert_pool(remapped, horizon, l, config.expert_cap)?;
                Prepared::Experts {
                    pool: Arc::new(pool),
                    support: table.support(),
                    remap: Some(Arc::new(table)),
                }
            }
            _ => Prepared::Plain,
        };
        let factory = Self {
            spec,
            class,
            config,
            prepared,
        };
        // surface parameter errors before any trial runs
        factory.build(0)?;
        Ok(factory)
    }

    pub fn spec(&self) -> LearnerSpec {
        self.spec
    }

    pub fn build(&self, seed: u64) -> Result<Learner> {
        Ok(match (&self.prepared, self.spec) {
            (_, LearnerSpec::Bsoa) => Learner::Bandit(Box::new(Bsoa::new(self.class.clone()))),
            (_, LearnerSpec::Soa) => Learner::Full(Box::new(Soa::new(self.class.clone()))),
            (_, LearnerSpec::RandomConsistent) => {
                Learner::Bandit(Box::new(RandomConsistent::new(self.class.clone(), seed)))
            }
            (Prepared::Experts { pool, support, remap }, _) => {
                let exp4 = Exp4::from_pool(pool.clone(), support.clone(), self.config, seed)?;
                match remap {
                    Some(table) => Learner::Bandit(Box::new(RemapWrapper::new(Box::new(exp4), table.clone()))),
                    None => Learner::Bandit(Box::new(exp4)),
                }
            }
            (Prepared::Plain, _) => unreachable!("expert learners are always prepared"),
        })
    }
}
