//! Shattered-tree witnesses and their direct verification.
//!
//! Both tree kinds share [`TreeNode`]: an internal node carries an instance
//! and labeled edges, a leaf carries the witness hypothesis for its path.
//! An L-tree node has exactly two edges with distinct labels. A BL-tree node
//! stores its branch-label set explicitly (the labels of its edges); under
//! the effective-label convention that set covers the projection of the
//! hypotheses still alive on the path, which makes the tree a certificate
//! for branching over any label universe.
//!
//! Extraction breaks ties by smallest instance id, then smallest label ids.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde_json::{Map, Value};

use super::DimensionEngine;
use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(usize),
    Internal {
        x: InstanceId,
        edges: Vec<(LabelId, TreeNode)>,
    },
}

impl TreeNode {
    /// Every root-to-leaf path as `(steps, witness)`.
    pub fn paths(&self) -> Vec<(Vec<(InstanceId, LabelId)>, usize)> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.collect_paths(&mut prefix, &mut out);
        out
    }

    fn collect_paths(
        &self,
        prefix: &mut Vec<(InstanceId, LabelId)>,
        out: &mut Vec<(Vec<(InstanceId, LabelId)>, usize)>,
    ) {
        match self {
            TreeNode::Leaf(h) => out.push((prefix.clone(), *h)),
            TreeNode::Internal { x, edges } => {
                for (y, child) in edges {
                    prefix.push((*x, *y));
                    child.collect_paths(prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    pub fn child(&self, y: LabelId) -> Option<&TreeNode> {
        match self {
            TreeNode::Leaf(_) => None,
            TreeNode::Internal { edges, .. } => {
                edges.iter().find(|(label, _)| *label == y).map(|(_, c)| c)
            }
        }
    }

    /// Labels on the outgoing edges, in stored order.
    pub fn branch_labels(&self) -> Vec<LabelId> {
        match self {
            TreeNode::Leaf(_) => Vec::new(),
            TreeNode::Internal { edges, .. } => edges.iter().map(|(y, _)| *y).collect(),
        }
    }

    /// Witness of the leftmost leaf below this node.
    pub fn first_witness(&self) -> usize {
        match self {
            TreeNode::Leaf(h) => *h,
            TreeNode::Internal { edges, .. } => edges[0].1.first_witness(),
        }
    }

    /// Depth if every leaf sits at the same depth.
    pub fn uniform_depth(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf(_) => Some(0),
            TreeNode::Internal { edges, .. } => {
                let mut depth = None;
                for (_, child) in edges {
                    let d = child.uniform_depth()?;
                    match depth {
                        None => depth = Some(d),
                        Some(prev) if prev != d => return None,
                        _ => {}
                    }
                }
                depth.map(|d| d + 1)
            }
        }
    }
}

/// Binary Littlestone tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LTree {
    pub root: TreeNode,
    pub depth: usize,
}

/// Label-ary bandit Littlestone tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BLTree {
    pub root: TreeNode,
    pub depth: usize,
}

fn first_member(set: &FixedBitSet) -> Result<usize> {
    set.ones()
        .next()
        .ok_or_else(|| Error::Invariant("witness extraction reached an empty version space".into()))
}

fn extract_l(engine: &mut DimensionEngine, set: &FixedBitSet, depth: usize) -> Result<TreeNode> {
    if depth == 0 {
        return Ok(TreeNode::Leaf(first_member(set)?));
    }
    let class = engine.class().clone();
    let need = depth as i32 - 1;
    for x in class.instances() {
        let good: Vec<(LabelId, FixedBitSet)> = class
            .project_set(set, x)
            .into_iter()
            .map(|y| (y, class.restrict_eq_set(set, x, y)))
            .filter(|(_, child)| engine.ldim_of(child) >= need)
            .take(2)
            .collect();
        if let [(y1, c1), (y2, c2)] = good.as_slice() {
            let left = extract_l(engine, c1, depth - 1)?;
            let right = extract_l(engine, c2, depth - 1)?;
            return Ok(TreeNode::Internal {
                x,
                edges: vec![(*y1, left), (*y2, right)],
            });
        }
    }
    Err(Error::Invariant(format!("no Littlestone tree of depth {depth}")))
}

fn extract_bl(engine: &mut DimensionEngine, set: &FixedBitSet, depth: usize) -> Result<TreeNode> {
    if depth == 0 {
        return Ok(TreeNode::Leaf(first_member(set)?));
    }
    let class = engine.class().clone();
    let need = depth as i32 - 1;
    for x in class.instances() {
        let labels = class.project_set(set, x);
        let children: Vec<FixedBitSet> =
            labels.iter().map(|&y| class.restrict_neq_set(set, x, y)).collect();
        if children.iter().all(|c| engine.bldim_of(c) >= need) {
            let mut edges = Vec::with_capacity(labels.len());
            for (y, child) in labels.into_iter().zip(children) {
                edges.push((y, extract_bl(engine, &child, depth - 1)?));
            }
            return Ok(TreeNode::Internal { x, edges });
        }
    }
    Err(Error::Invariant(format!("no bandit Littlestone tree of depth {depth}")))
}

/// A shattered L-tree of depth `ldim(v)`.
pub fn witness_ltree(v: &VersionSpace) -> Result<LTree> {
    if v.is_empty() {
        return Err(Error::input("witness trees need a nonempty class"));
    }
    let mut engine = DimensionEngine::new(v.class().clone());
    let depth = engine.ldim_of(v.bits()) as usize;
    let root = extract_l(&mut engine, v.bits(), depth)?;
    Ok(LTree { root, depth })
}

/// A shattered BL-tree of depth `bldim(v)`.
pub fn witness_bltree(v: &VersionSpace) -> Result<BLTree> {
    if v.is_empty() {
        return Err(Error::input("witness trees need a nonempty class"));
    }
    let mut engine = DimensionEngine::new(v.class().clone());
    let depth = engine.bldim_of(v.bits()) as usize;
    witness_bltree_depth(&mut engine, v, depth)
}

/// A shattered BL-tree of the given depth, which must not exceed `bldim(v)`.
pub fn witness_bltree_depth(
    engine: &mut DimensionEngine,
    v: &VersionSpace,
    depth: usize,
) -> Result<BLTree> {
    if v.is_empty() {
        return Err(Error::input("witness trees need a nonempty class"));
    }
    let bl = engine.bldim(v)?;
    if depth as i32 > bl {
        return Err(Error::input(format!("requested depth {depth} exceeds BL = {bl}")));
    }
    let root = extract_bl(engine, v.bits(), depth)?;
    Ok(BLTree { root, depth })
}

fn ids_valid(class: &HypothesisClass, x: InstanceId, y: LabelId) -> bool {
    x.index() < class.num_instances() && y.index() < class.num_labels()
}

/// True iff `tree` is a uniform binary tree with distinct edge labels whose
/// every path is realized exactly by its leaf witness, a member of `v`.
pub fn verify_ltree(tree: &LTree, v: &VersionSpace) -> bool {
    fn walk(
        node: &TreeNode,
        class: &HypothesisClass,
        v: &VersionSpace,
        path: &mut Vec<(InstanceId, LabelId)>,
        depth: usize,
    ) -> bool {
        match node {
            TreeNode::Leaf(h) => {
                path.len() == depth
                    && *h < class.num_hypotheses()
                    && v.contains(*h)
                    && path.iter().all(|&(x, y)| class.eval(*h, x) == y)
            }
            TreeNode::Internal { x, edges } => {
                if edges.len() != 2 || edges[0].0 == edges[1].0 || path.len() >= depth {
                    return false;
                }
                edges.iter().all(|(y, child)| {
                    if !ids_valid(class, *x, *y) {
                        return false;
                    }
                    path.push((*x, *y));
                    let ok = walk(child, class, v, path, depth);
                    path.pop();
                    ok
                })
            }
        }
    }
    walk(&tree.root, v.class(), v, &mut Vec::new(), tree.depth)
}

/// True iff every path's leaf witness is a member of `v` that avoids every
/// label on its path, all leaves sit at `tree.depth`, and each node's
/// branch-label set covers the projection of the members of `v` alive on
/// the path to it.
pub fn verify_bltree(tree: &BLTree, v: &VersionSpace) -> bool {
    fn walk(
        node: &TreeNode,
        class: &HypothesisClass,
        v: &VersionSpace,
        alive: &FixedBitSet,
        path: &mut Vec<(InstanceId, LabelId)>,
        depth: usize,
    ) -> bool {
        match node {
            TreeNode::Leaf(h) => {
                path.len() == depth
                    && *h < class.num_hypotheses()
                    && v.contains(*h)
                    && path.iter().all(|&(x, y)| class.eval(*h, x) != y)
            }
            TreeNode::Internal { x, edges } => {
                if edges.is_empty() || path.len() >= depth || x.index() >= class.num_instances() {
                    return false;
                }
                let labels: Vec<LabelId> = edges.iter().map(|(y, _)| *y).collect();
                let mut dedup = labels.clone();
                dedup.sort();
                dedup.dedup();
                if dedup.len() != labels.len() {
                    return false;
                }
                if !class.project_set(alive, *x).iter().all(|y| labels.contains(y)) {
                    return false;
                }
                edges.iter().all(|(y, child)| {
                    if !ids_valid(class, *x, *y) {
                        return false;
                    }
                    let next = class.restrict_neq_set(alive, *x, *y);
                    path.push((*x, *y));
                    let ok = walk(child, class, v, &next, path, depth);
                    path.pop();
                    ok
                })
            }
        }
    }
    walk(&tree.root, v.class(), v, v.bits(), &mut Vec::new(), tree.depth)
}

/// `{"x": name, "edges": {label: subtree | witness}}`; a leaf is the
/// witness hypothesis name.
pub fn tree_to_json(node: &TreeNode, class: &HypothesisClass) -> Value {
    match node {
        TreeNode::Leaf(h) => Value::String(class.hypothesis_name(*h).to_string()),
        TreeNode::Internal { x, edges } => {
            let mut map = Map::new();
            for (y, child) in edges {
                map.insert(class.label_name(*y).to_string(), tree_to_json(child, class));
            }
            let mut obj = Map::new();
            obj.insert("x".into(), Value::String(class.instance_name(*x).to_string()));
            obj.insert("edges".into(), Value::Object(map));
            Value::Object(obj)
        }
    }
}

/// Parses the JSON tree form. Edges come back in ascending label-id order.
pub fn tree_from_json(value: &Value, class: &HypothesisClass) -> Result<TreeNode> {
    fn parse(value: &Value, class: &HypothesisClass, at: &str) -> Result<TreeNode> {
        match value {
            Value::String(name) => class
                .hypothesis_by_name(name)
                .map(TreeNode::Leaf)
                .ok_or_else(|| Error::parse(at, format!("unknown hypothesis '{name}'"))),
            Value::Object(obj) => {
                let x_name = obj
                    .get("x")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::parse(at, "node needs a string field 'x'"))?;
                let x = class
                    .instance_by_name(x_name)
                    .ok_or_else(|| Error::parse(at, format!("unknown instance '{x_name}'")))?;
                let edges = obj
                    .get("edges")
                    .and_then(Value::as_object)
                    .ok_or_else(|| Error::parse(at, "node needs an object field 'edges'"))?;
                let mut sorted = BTreeMap::new();
                for (label, child) in edges {
                    let y = class
                        .label_by_name(label)
                        .ok_or_else(|| Error::parse(at, format!("unknown label '{label}'")))?;
                    sorted.insert(y, parse(child, class, &format!("{at}.edges.{label}"))?);
                }
                Ok(TreeNode::Internal {
                    x,
                    edges: sorted.into_iter().collect(),
                })
            }
            _ => Err(Error::parse(at, "expected a node object or a hypothesis name")),
        }
    }
    parse(value, class, "tree")
}
