//! Literal bandit-tree search: every node branches over the whole supplied
//! label universe, and a path survives on the hypotheses that avoid every
//! label on it. No memo, no effective-label shortcut.

use fixedbitset::FixedBitSet;

use crate::caps::Caps;
use crate::class::{HypothesisClass, LabelId, VersionSpace};
use crate::error::{Error, Result};

/// Largest label universe the oracle will branch over.
pub const ORACLE_MAX_LABELS: usize = 8;

/// Maximal `d ≤ depth_cap` such that some depth-`d` tree branching over all
/// of `y_universe` is shattered by `v`; −1 for the empty class.
pub fn bldim_oracle(
    v: &VersionSpace,
    y_universe: &[LabelId],
    depth_cap: usize,
    caps: &Caps,
) -> Result<i32> {
    if depth_cap > caps.oracle_depth {
        return Err(Error::Capacity {
            what: "oracle depth",
            requested: depth_cap as u128,
            cap: caps.oracle_depth as u128,
        });
    }
    if y_universe.len() > ORACLE_MAX_LABELS {
        return Err(Error::Capacity {
            what: "oracle label universe",
            requested: y_universe.len() as u128,
            cap: ORACLE_MAX_LABELS as u128,
        });
    }
    for &y in y_universe {
        v.class().check_label(y)?;
    }
    if v.is_empty() {
        return Ok(-1);
    }
    for d in 1..=depth_cap {
        if !shattered(v.class(), v.bits(), y_universe, d) {
            return Ok(d as i32 - 1);
        }
    }
    Ok(depth_cap as i32)
}

fn shattered(class: &HypothesisClass, alive: &FixedBitSet, ys: &[LabelId], depth: usize) -> bool {
    if depth == 0 {
        return !alive.is_clear();
    }
    class.instances().any(|x| {
        ys.iter()
            .all(|&y| shattered(class, &class.restrict_neq_set(alive, x, y), ys, depth - 1))
    })
}
