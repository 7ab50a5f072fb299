//! Littlestone (L), Bandit Littlestone (BL) and Sequential Graph (SG)
//! dimensions of finite classes.
//!
//! All three are computed by game recursions over version spaces, memoized on
//! the member bitset. Degenerate conventions: the empty class has dimension
//! −1 and a singleton has dimension 0.
//!
//! The BL recursion branches only over labels realized at the node instance.
//! A label `y ∉ H(x)` leaves the whole class alive, so that branch never
//! attains the minimum; [`bldim_oracle`] branches over the full label universe
//! and is used to check this equivalence.

mod oracle;
mod report;
mod witness;

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::caps::Caps;
use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};
use crate::error::{Error, Result};

pub use oracle::{bldim_oracle, ORACLE_MAX_LABELS};
pub use report::{dim_report, DimReport, InequalityCheck};
pub use witness::{
    tree_from_json, tree_to_json, verify_bltree, verify_ltree, witness_bltree, witness_bltree_depth,
    witness_ltree, BLTree, LTree, TreeNode,
};

fn floor_log2(n: usize) -> i32 {
    debug_assert!(n > 0);
    (usize::BITS - 1 - n.leading_zeros()) as i32
}

/// Memo tables for one class. A fresh engine per computation keeps results
/// independent; a learner may keep one for its lifetime.
#[derive(Debug, Clone)]
pub struct DimensionEngine {
    class: Arc<HypothesisClass>,
    memoize: bool,
    ldim_memo: HashMap<FixedBitSet, i32>,
    bldim_memo: HashMap<FixedBitSet, i32>,
}

impl DimensionEngine {
    pub fn new(class: Arc<HypothesisClass>) -> Self {
        Self {
            class,
            memoize: true,
            ldim_memo: HashMap::new(),
            bldim_memo: HashMap::new(),
        }
    }

    /// Plain recursion with no memo table; only usable on tiny classes.
    pub fn without_memo(class: Arc<HypothesisClass>) -> Self {
        Self {
            memoize: false,
            ..Self::new(class)
        }
    }

    pub fn class(&self) -> &Arc<HypothesisClass> {
        &self.class
    }

    fn check_class(&self, v: &VersionSpace) -> Result<()> {
        if Arc::ptr_eq(&self.class, v.class()) || **v.class() == *self.class {
            Ok(())
        } else {
            Err(Error::input("version space belongs to a different class"))
        }
    }

    pub fn ldim(&mut self, v: &VersionSpace) -> Result<i32> {
        self.check_class(v)?;
        Ok(self.ldim_of(v.bits()))
    }

    pub fn bldim(&mut self, v: &VersionSpace) -> Result<i32> {
        self.check_class(v)?;
        Ok(self.bldim_of(v.bits()))
    }

    /// Littlestone dimension of the members of `set`.
    pub fn ldim_of(&mut self, set: &FixedBitSet) -> i32 {
        let n = set.count_ones(..);
        if n <= 1 {
            return n as i32 - 1;
        }
        if self.memoize {
            if let Some(&d) = self.ldim_memo.get(set) {
                return d;
            }
        }

        // A shattered binary tree of depth d needs 2^d distinct hypotheses.
        let upper = floor_log2(n);
        let class = self.class.clone();
        let mut best = 0;
        for x in class.instances() {
            let mut kids: Vec<(usize, FixedBitSet)> = class
                .labels()
                .filter_map(|y| {
                    let child = class.restrict_eq_set(set, x, y);
                    let c = child.count_ones(..);
                    (c > 0).then_some((c, child))
                })
                .collect();
            if kids.len() < 2 {
                continue;
            }
            kids.sort_by_key(|k| std::cmp::Reverse(k.0));
            if 1 + floor_log2(kids[1].0) <= best {
                continue;
            }
            // top two child dimensions
            let (mut first, mut second) = (-1, -1);
            for (count, child) in &kids {
                if floor_log2(*count) <= second {
                    break;
                }
                let d = self.ldim_of(child);
                if d > first {
                    second = first;
                    first = d;
                } else if d > second {
                    second = d;
                }
            }
            best = best.max(1 + second);
            if best == upper {
                break;
            }
        }

        if self.memoize {
            self.ldim_memo.insert(set.clone(), best);
        }
        best
    }

    /// Bandit Littlestone dimension of the members of `set`.
    pub fn bldim_of(&mut self, set: &FixedBitSet) -> i32 {
        let n = set.count_ones(..);
        if n <= 1 {
            return n as i32 - 1;
        }
        if self.memoize {
            if let Some(&d) = self.bldim_memo.get(set) {
                return d;
            }
        }

        // Every branch removes at least one hypothesis.
        let upper = n as i32 - 1;
        let class = self.class.clone();
        let mut best = 0;
        for x in class.instances() {
            let mut kids: Vec<(usize, FixedBitSet)> = class
                .project_set(set, x)
                .into_iter()
                .map(|y| {
                    let child = class.restrict_neq_set(set, x, y);
                    (child.count_ones(..), child)
                })
                .collect();
            // 1 + bldim(child) <= |child|
            let bound = kids.iter().map(|k| k.0).min().unwrap_or(0) as i32;
            if bound <= best {
                continue;
            }
            kids.sort_by_key(|k| k.0);
            let mut value = i32::MAX;
            for (_, child) in &kids {
                value = value.min(1 + self.bldim_of(child));
                if value <= best {
                    break;
                }
            }
            best = best.max(value);
            if best == upper {
                break;
            }
        }

        if self.memoize {
            self.bldim_memo.insert(set.clone(), best);
        }
        best
    }

    /// `bldim(restrict_neq(set, x, y))` for each realized label `y` at `x`.
    pub fn bandit_branch_values(&mut self, set: &FixedBitSet, x: InstanceId) -> Vec<(LabelId, i32)> {
        let class = self.class.clone();
        class
            .project_set(set, x)
            .into_iter()
            .map(|y| (y, self.bldim_of(&class.restrict_neq_set(set, x, y))))
            .collect()
    }

    /// `ldim(restrict_eq(set, x, y))` for each realized label `y` at `x`.
    pub fn full_branch_values(&mut self, set: &FixedBitSet, x: InstanceId) -> Vec<(LabelId, i32)> {
        let class = self.class.clone();
        class
            .project_set(set, x)
            .into_iter()
            .map(|y| (y, self.ldim_of(&class.restrict_eq_set(set, x, y))))
            .collect()
    }
}

/// Littlestone dimension; −1 for the empty class.
pub fn ldim(v: &VersionSpace) -> i32 {
    DimensionEngine::new(v.class().clone()).ldim_of(v.bits())
}

/// Bandit Littlestone dimension; −1 for the empty class.
pub fn bldim(v: &VersionSpace) -> i32 {
    DimensionEngine::new(v.class().clone()).bldim_of(v.bits())
}

/// The 0/1 loss class `{(x, y) ↦ 1{h(x) ≠ y}}` of `v` as a binary class
/// over the product domain `X × Y`, identical loss functions merged.
pub fn loss_class(v: &VersionSpace, caps: &Caps) -> Result<HypothesisClass> {
    let class = v.class();
    let domain = class.num_instances() as u128 * class.num_labels() as u128;
    if domain > caps.sg_domain as u128 {
        return Err(Error::Capacity {
            what: "loss-class domain |X|·|Y|",
            requested: domain,
            cap: caps.sg_domain as u128,
        });
    }
    let mut instances = Vec::with_capacity(domain as usize);
    for x in class.instances() {
        for y in class.labels() {
            instances.push(format!("{}|{}", class.instance_name(x), class.label_name(y)));
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut rows = Vec::new();
    let mut names = Vec::new();
    for h in v.members() {
        let row: Vec<LabelId> = class
            .instances()
            .flat_map(|x| class.labels().map(move |y| (x, y)))
            .map(|(x, y)| LabelId((class.eval(h, x) != y) as u32))
            .collect();
        if seen.insert(row.clone()) {
            rows.push(row);
            names.push(format!("loss({})", class.hypothesis_name(h)));
        }
    }
    HypothesisClass::new(instances, vec!["0".into(), "1".into()], names, rows)
}

/// Sequential Graph dimension: the Littlestone dimension of the loss class.
pub fn sgdim(v: &VersionSpace, caps: &Caps) -> Result<i32> {
    if v.is_empty() {
        return Ok(-1);
    }
    let loss = Arc::new(loss_class(v, caps)?);
    Ok(ldim(&VersionSpace::full(loss)))
}
