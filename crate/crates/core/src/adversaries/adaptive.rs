use std::sync::Arc;

use crate::class::{HypothesisClass, InstanceId, LabelId, VersionSpace};
use crate::dimensions::{witness_bltree, BLTree, TreeNode};
use crate::error::{Error, Result};

/// Forces `bldim(H)` mistakes on any deterministic learner under bandit
/// feedback.
///
/// It presents the instance at the current node of a shattered bandit tree
/// and always answers "incorrect". A prediction on one of the node's edges
/// moves down that edge; any other prediction is wrong for every surviving
/// hypothesis, so the adversary stays put. At a leaf it commits to the leaf
/// witness and answers truthfully from then on.
#[derive(Debug, Clone)]
pub struct AdaptiveBlAdversary {
    class: Arc<HypothesisClass>,
    tree: Arc<BLTree>,
    path: Vec<usize>,
    committed: Option<usize>,
}

impl AdaptiveBlAdversary {
    pub fn new(class: Arc<HypothesisClass>) -> Result<Self> {
        let tree = witness_bltree(&VersionSpace::full(class.clone()))?;
        Ok(Self::from_tree(class, Arc::new(tree)))
    }

    pub fn from_tree(class: Arc<HypothesisClass>, tree: Arc<BLTree>) -> Self {
        Self {
            class,
            tree,
            path: Vec::new(),
            committed: None,
        }
    }

    pub fn tree(&self) -> &BLTree {
        &self.tree
    }

    /// Edges followed so far.
    pub fn descents(&self) -> usize {
        self.path.len()
    }

    pub fn committed(&self) -> Option<usize> {
        self.committed
    }

    fn node(&self) -> &TreeNode {
        let mut node = &self.tree.root;
        for &i in &self.path {
            match node {
                TreeNode::Internal { edges, .. } => node = &edges[i].1,
                TreeNode::Leaf(_) => unreachable!("paths only follow internal nodes"),
            }
        }
        node
    }

    pub fn present(&mut self) -> InstanceId {
        if self.committed.is_none() {
            match self.node() {
                TreeNode::Internal { x, .. } => return *x,
                TreeNode::Leaf(h) => self.committed = Some(*h),
            }
        }
        InstanceId(0)
    }

    /// Feedback for `prediction` on the instance just presented: whether it
    /// was correct.
    pub fn respond(&mut self, x: InstanceId, prediction: LabelId) -> Result<bool> {
        if let Some(h) = self.committed {
            return Ok(self.class.eval(h, x) == prediction);
        }
        match self.node() {
            TreeNode::Internal { x: node_x, edges } => {
                if *node_x != x {
                    return Err(Error::Contract("response for an instance that was not presented".into()));
                }
                if let Some(i) = edges.iter().position(|(y, _)| *y == prediction) {
                    self.path.push(i);
                }
                Ok(false)
            }
            TreeNode::Leaf(_) => Err(Error::Contract("respond called before present".into())),
        }
    }

    /// Fixes the hypothesis realizing the game so far: the leftmost witness
    /// below the current node if the game ended inside the tree.
    pub fn finish(&mut self) -> usize {
        if let Some(h) = self.committed {
            return h;
        }
        let h = self.node().first_witness();
        self.committed = Some(h);
        h
    }
}
