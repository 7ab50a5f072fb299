//! Finite multiclass hypothesis classes and their version spaces.
//!
//! Instances and labels are dense integer ids into ordered universes; a class
//! is an `|H| × |X|` table of label ids. For every `(x, y)` the class keeps the
//! bitset of hypotheses with `h(x) = y`, so restricting a version space is a
//! single bitset intersection or difference.

mod generate;
mod io;
mod stream;

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{gen_constants, gen_full, gen_random, with_extra_labels};
pub use io::{load_class, load_stream, parse_class, parse_stream, save_class, save_stream};
pub use io::{class_to_json, stream_to_json};
pub use stream::{Stream, StreamExample};

/// Index into a class's label universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelId(pub u32);

/// Index into a class's instance universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InstanceId(pub u32);

impl LabelId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl InstanceId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y#{}", self.0)
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x#{}", self.0)
    }
}

/// A finite table of pairwise-distinct functions from instances to labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisClass {
    instances: Vec<String>,
    labels: Vec<String>,
    names: Vec<String>,
    /// Row-major `|H| × |X|`.
    table: Vec<LabelId>,
    /// `masks[x * |Y| + y]` = hypotheses with `h(x) = y`.
    masks: Vec<FixedBitSet>,
}

impl HypothesisClass {
    /// Builds a class from named universes and one row of label ids per
    /// hypothesis. Rows must be distinct and every entry a valid label id.
    pub fn new(
        instances: Vec<String>,
        labels: Vec<String>,
        names: Vec<String>,
        rows: Vec<Vec<LabelId>>,
    ) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::Validation("a class needs at least one instance".into()));
        }
        if labels.is_empty() {
            return Err(Error::Validation("a class needs at least one label".into()));
        }
        if names.len() != rows.len() {
            return Err(Error::Validation(format!(
                "{} hypothesis names for {} rows",
                names.len(),
                rows.len()
            )));
        }
        check_unique("instance", &instances)?;
        check_unique("label", &labels)?;
        check_unique("hypothesis", &names)?;

        let width = instances.len();
        let mut table = Vec::with_capacity(rows.len() * width);
        for (h, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Validation(format!(
                    "hypothesis '{}' maps {} instances, expected {width}",
                    names[h],
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|y| y.index() >= labels.len()) {
                return Err(Error::Validation(format!(
                    "hypothesis '{}' uses label id {} outside a universe of {}",
                    names[h],
                    bad.0,
                    labels.len()
                )));
            }
            table.extend_from_slice(row);
        }

        let mut seen = std::collections::HashMap::with_capacity(rows.len());
        for (h, row) in rows.iter().enumerate() {
            if let Some(prev) = seen.insert(row.as_slice(), h) {
                return Err(Error::Validation(format!(
                    "hypotheses '{}' and '{}' are the same function",
                    names[prev], names[h]
                )));
            }
        }

        let n = rows.len();
        let k = labels.len();
        let mut masks = vec![FixedBitSet::with_capacity(n); width * k];
        for h in 0..n {
            for x in 0..width {
                let y = table[h * width + x].index();
                masks[x * k + y].insert(h);
            }
        }

        Ok(Self {
            instances,
            labels,
            names,
            table,
            masks,
        })
    }

    pub fn num_hypotheses(&self) -> usize {
        self.names.len()
    }

    pub fn num_instances(&self) -> usize {
        self.instances.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn instance_names(&self) -> &[String] {
        &self.instances
    }

    pub fn label_names(&self) -> &[String] {
        &self.labels
    }

    pub fn hypothesis_names(&self) -> &[String] {
        &self.names
    }

    pub fn instance_name(&self, x: InstanceId) -> &str {
        &self.instances[x.index()]
    }

    pub fn label_name(&self, y: LabelId) -> &str {
        &self.labels[y.index()]
    }

    pub fn hypothesis_name(&self, h: usize) -> &str {
        &self.names[h]
    }

    pub fn instance_by_name(&self, name: &str) -> Option<InstanceId> {
        self.instances
            .iter()
            .position(|s| s == name)
            .map(|i| InstanceId(i as u32))
    }

    pub fn label_by_name(&self, name: &str) -> Option<LabelId> {
        self.labels.iter().position(|s| s == name).map(|i| LabelId(i as u32))
    }

    pub fn hypothesis_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    pub fn instances(&self) -> impl Iterator<Item = InstanceId> + '_ {
        (0..self.instances.len() as u32).map(InstanceId)
    }

    pub fn labels(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.labels.len() as u32).map(LabelId)
    }

    /// `h(x)`.
    #[inline]
    pub fn eval(&self, h: usize, x: InstanceId) -> LabelId {
        self.table[h * self.instances.len() + x.index()]
    }

    pub fn row(&self, h: usize) -> &[LabelId] {
        let w = self.instances.len();
        &self.table[h * w..(h + 1) * w]
    }

    /// Hypotheses with `h(x) = y`.
    #[inline]
    pub fn eq_mask(&self, x: InstanceId, y: LabelId) -> &FixedBitSet {
        &self.masks[x.index() * self.labels.len() + y.index()]
    }

    pub fn check_instance(&self, x: InstanceId) -> Result<()> {
        if x.index() < self.instances.len() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "instance id {} outside a universe of {}",
                x.0,
                self.instances.len()
            )))
        }
    }

    pub fn check_label(&self, y: LabelId) -> Result<()> {
        if y.index() < self.labels.len() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "label id {} outside a universe of {}",
                y.0,
                self.labels.len()
            )))
        }
    }

    /// All members as a bitset.
    pub fn all_members(&self) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.num_hypotheses());
        set.insert_range(..);
        set
    }

    /// Labels realized at `x` by the members of `set`, ascending.
    pub fn project_set(&self, set: &FixedBitSet, x: InstanceId) -> Vec<LabelId> {
        self.labels()
            .filter(|&y| !self.eq_mask(x, y).is_disjoint(set))
            .collect()
    }

    /// `sup_x |projection(set, x)|`, zero for the empty set.
    pub fn max_projection_of(&self, set: &FixedBitSet) -> usize {
        if set.is_clear() {
            return 0;
        }
        self.instances()
            .map(|x| self.project_set(set, x).len())
            .max()
            .unwrap_or(0)
    }

    /// Members of `set` that agree with `y` at `x`.
    #[inline]
    pub fn restrict_eq_set(&self, set: &FixedBitSet, x: InstanceId, y: LabelId) -> FixedBitSet {
        let mut out = set.clone();
        out.intersect_with(self.eq_mask(x, y));
        out
    }

    /// Members of `set` that disagree with `y` at `x`.
    #[inline]
    pub fn restrict_neq_set(&self, set: &FixedBitSet, x: InstanceId, y: LabelId) -> FixedBitSet {
        let mut out = set.clone();
        out.difference_with(self.eq_mask(x, y));
        out
    }
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::Validation(format!("duplicate {kind} name '{n}'")));
        }
    }
    Ok(())
}

/// A subset of a class's hypotheses. Immutable: restriction returns a new value.
#[derive(Debug, Clone)]
pub struct VersionSpace {
    class: Arc<HypothesisClass>,
    members: FixedBitSet,
}

impl PartialEq for VersionSpace {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.class, &other.class) || self.class == other.class)
            && self.members == other.members
    }
}

impl Eq for VersionSpace {}

impl VersionSpace {
    /// The whole class.
    pub fn full(class: Arc<HypothesisClass>) -> Self {
        let members = class.all_members();
        Self { class, members }
    }

    pub fn empty(class: Arc<HypothesisClass>) -> Self {
        let members = FixedBitSet::with_capacity(class.num_hypotheses());
        Self { class, members }
    }

    pub fn from_members(
        class: Arc<HypothesisClass>,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let n = class.num_hypotheses();
        let mut set = FixedBitSet::with_capacity(n);
        for h in members {
            if h >= n {
                return Err(Error::input(format!("hypothesis index {h} outside a class of {n}")));
            }
            set.insert(h);
        }
        Ok(Self { class, members: set })
    }

    pub(crate) fn from_bits(class: Arc<HypothesisClass>, members: FixedBitSet) -> Self {
        debug_assert_eq!(members.len(), class.num_hypotheses());
        Self { class, members }
    }

    pub fn class(&self) -> &Arc<HypothesisClass> {
        &self.class
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains(&self, h: usize) -> bool {
        self.members.contains(h)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    /// Sorted member list; equal subsets have equal keys.
    pub fn key(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn is_subset_of(&self, other: &VersionSpace) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &VersionSpace) -> VersionSpace {
        let mut members = self.members.clone();
        members.union_with(&other.members);
        Self::from_bits(self.class.clone(), members)
    }

    /// `{h(x) : h ∈ v}` in ascending label-id order.
    pub fn projection(&self, x: InstanceId) -> Result<Vec<LabelId>> {
        self.class.check_instance(x)?;
        Ok(self.class.project_set(&self.members, x))
    }

    pub fn restrict_eq(&self, x: InstanceId, y: LabelId) -> Result<VersionSpace> {
        self.class.check_instance(x)?;
        self.class.check_label(y)?;
        let members = self.class.restrict_eq_set(&self.members, x, y);
        Ok(Self::from_bits(self.class.clone(), members))
    }

    pub fn restrict_neq(&self, x: InstanceId, y: LabelId) -> Result<VersionSpace> {
        self.class.check_instance(x)?;
        self.class.check_label(y)?;
        let members = self.class.restrict_neq_set(&self.members, x, y);
        Ok(Self::from_bits(self.class.clone(), members))
    }

    pub fn max_projection(&self) -> usize {
        self.class.max_projection_of(&self.members)
    }
}
