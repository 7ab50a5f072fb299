use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::class::{HypothesisClass, InstanceId, LabelId, Stream, StreamExample, VersionSpace};
use crate::dimensions::{witness_bltree_depth, BLTree, DimensionEngine, TreeNode};
use crate::error::{Error, Result};

/// The instance with the largest projection (smallest id on ties) and the
/// first `min(C, T)` labels of its projection in ascending id order.
pub fn uniform_label_target(class: &HypothesisClass, horizon: usize) -> Result<(InstanceId, Vec<LabelId>)> {
    if class.num_hypotheses() == 0 {
        return Err(Error::input("the uniform adversary needs a nonempty class"));
    }
    let all = class.all_members();
    let (x, labels) = class
        .instances()
        .map(|x| (x, class.project_set(&all, x)))
        .fold(None, |best: Option<(InstanceId, Vec<LabelId>)>, cand| match best {
            Some(b) if b.1.len() >= cand.1.len() => Some(b),
            _ => Some(cand),
        })
        .expect("classes have at least one instance");
    let d = labels.len().min(horizon);
    Ok((x, labels[..d].to_vec()))
}

/// `T` copies of `(x*, y)` with `y` drawn uniformly from the first
/// `min(C, T)` labels realized at `x*`.
pub fn uniform_label_stream(class: &HypothesisClass, horizon: usize, seed: u64) -> Result<Stream> {
    let (x, labels) = uniform_label_target(class, horizon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let examples = match labels.choose(&mut rng) {
        Some(&y) => vec![StreamExample { x, y }; horizon],
        None => Vec::new(),
    };
    let mut stream = Stream::new(examples);
    stream.check_realizable(class);
    Ok(stream)
}

/// Random root-to-leaf walks on a shattered bandit tree of depth
/// `min(BL, T)`, each emitted as the stream labeled by the leaf witness.
#[derive(Debug, Clone)]
pub struct BlTreeSampler {
    class: Arc<HypothesisClass>,
    tree: Arc<BLTree>,
}

impl BlTreeSampler {
    pub fn new(class: Arc<HypothesisClass>, horizon: usize) -> Result<Self> {
        let v = VersionSpace::full(class.clone());
        if v.is_empty() {
            return Err(Error::input("the bltree adversary needs a nonempty class"));
        }
        let mut engine = DimensionEngine::new(class.clone());
        let bl = engine.bldim(&v)?;
        if bl < 1 {
            return Err(Error::input("the bltree adversary needs BL >= 1"));
        }
        let depth = (bl as usize).min(horizon);
        let tree = witness_bltree_depth(&mut engine, &v, depth)?;
        Ok(Self {
            class,
            tree: Arc::new(tree),
        })
    }

    pub fn tree(&self) -> &BLTree {
        &self.tree
    }

    pub fn sample(&self, seed: u64) -> Stream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xs = Vec::with_capacity(self.tree.depth);
        let mut node = &self.tree.root;
        let h = loop {
            match node {
                TreeNode::Leaf(h) => break *h,
                TreeNode::Internal { x, edges } => {
                    xs.push(*x);
                    node = &edges.choose(&mut rng).expect("internal nodes have edges").1;
                }
            }
        };
        let mut stream = Stream::labeled_by(&self.class, h, &xs);
        stream.realizable = Some(true);
        stream
    }
}

/// One sample of [`BlTreeSampler`]; prefer the sampler when drawing many.
pub fn bltree_stream(class: Arc<HypothesisClass>, horizon: usize, seed: u64) -> Result<Stream> {
    Ok(BlTreeSampler::new(class, horizon)?.sample(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{gen_constants, gen_random};
    use crate::dimensions::bldim;

    #[test]
    fn uniform_on_constants() {
        let class = gen_constants(4, 1).unwrap();
        let (x, labels) = uniform_label_target(&class, 10).unwrap();
        assert_eq!(x, InstanceId(0));
        assert_eq!(labels.len(), 4);
        let stream = uniform_label_stream(&class, 10, 5).unwrap();
        assert_eq!(stream.len(), 10);
        assert_eq!(stream.realizable, Some(true));
        assert!(stream.examples.iter().all(|e| e == &stream.examples[0]));
        assert_eq!(uniform_label_target(&class, 1).unwrap().1, vec![LabelId(0)]);
        assert!(uniform_label_stream(&class, 0, 5).unwrap().is_empty());
    }

    #[test]
    fn uniform_covers_all_labels() {
        let class = gen_constants(3, 2).unwrap();
        let mut seen = [false; 3];
        for seed in 0..50 {
            seen[uniform_label_stream(&class, 4, seed).unwrap().examples[0].y.index()] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn bltree_streams_avoid_path_labels() {
        let class = Arc::new(gen_constants(3, 1).unwrap());
        let sampler = BlTreeSampler::new(class.clone(), 10).unwrap();
        assert_eq!(sampler.tree().depth, 2);
        let paths = sampler.tree().root.paths();
        for (steps, h) in paths {
            for (x, y) in steps {
                assert_ne!(class.eval(h, x), y);
            }
        }
        for seed in 0..20 {
            let s = sampler.sample(seed);
            assert_eq!(s.len(), 2);
            assert!(s.is_realizable_by(&class));
        }
        assert_eq!(bltree_stream(class.clone(), 1, 0).unwrap().len(), 1);
        let single = Arc::new(gen_constants(1, 2).unwrap());
        assert!(matches!(BlTreeSampler::new(single, 5), Err(Error::Input(_))));
    }

    #[test]
    fn bltree_on_random_classes() {
        for seed in 0..30 {
            let class = Arc::new(gen_random(3, 3, 6, seed).unwrap());
            if bldim(&VersionSpace::full(class.clone())) < 1 {
                continue;
            }
            let sampler = BlTreeSampler::new(class.clone(), 100).unwrap();
            for s in 0..5 {
                assert!(sampler.sample(s).is_realizable_by(&class));
            }
        }
    }
}
