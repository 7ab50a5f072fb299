//! Size caps that keep exhaustive computations at desk scale.
//!
//! Defaults can be overridden through the `BANDIT_LDIM_CAPS` environment
//! variable, a comma-separated `key=value` list with keys `full_class`,
//! `experts`, `sg_domain` and `oracle_depth`.

use crate::error::{Error, Result};

pub const CAPS_ENV_VAR: &str = "BANDIT_LDIM_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of hypotheses `gen_full` may emit.
    pub full_class: usize,
    /// Maximum size of an expert pool.
    pub experts: usize,
    /// Maximum `|X|·|Y|` for the loss class behind the sequential graph dimension.
    pub sg_domain: usize,
    /// Maximum depth explored by the literal bandit-tree oracle.
    pub oracle_depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            full_class: 4096,
            experts: 20_000,
            sg_domain: 64,
            oracle_depth: 6,
        }
    }
}

impl Caps {
    /// Parses an override list such as `"experts=500,sg_domain=100"` on top
    /// of the defaults.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::parse(CAPS_ENV_VAR, format!("expected key=value, got '{item}'"))
            })?;
            let value: usize = value.trim().parse().map_err(|_| {
                Error::parse(CAPS_ENV_VAR, format!("'{}' is not a non-negative integer", value.trim()))
            })?;
            match key.trim() {
                "full_class" => caps.full_class = value,
                "experts" => caps.experts = value,
                "sg_domain" => caps.sg_domain = value,
                "oracle_depth" => caps.oracle_depth = value,
                other => {
                    return Err(Error::parse(CAPS_ENV_VAR, format!("unknown cap '{other}'")));
                }
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV_VAR) {
            Ok(spec) => Self::parse_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }
}
