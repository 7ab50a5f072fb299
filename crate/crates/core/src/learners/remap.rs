//! Per-instance label remapping.
//!
//! At each instance the labels some hypothesis actually uses are renamed, in
//! ascending id order, to `0..|H(x)|`. The remapped class has `C` labels
//! (`C = sup_x |H(x)|`) and the same Littlestone, bandit Littlestone and
//! sequential graph dimensions. A learner for the remapped class is turned
//! back into a learner for the original one by [`RemapWrapper`].

use std::sync::Arc;

use super::{BanditLearner, Predictor, Support};
use crate::class::{HypothesisClass, InstanceId, LabelId, Stream, StreamExample};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemapTable {
    /// `forward[x][y]`: remapped id of original label `y`, if used at `x`.
    forward: Vec<Vec<Option<LabelId>>>,
    /// `inverse[x][i]`: original label renamed to `i` at `x`.
    inverse: Vec<Vec<LabelId>>,
    width: usize,
}

impl RemapTable {
    /// Number of labels of the remapped class.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn forward(&self, x: InstanceId, y: LabelId) -> Option<LabelId> {
        self.forward.get(x.index())?.get(y.index()).copied().flatten()
    }

    pub fn inverse(&self, x: InstanceId, remapped: LabelId) -> Option<LabelId> {
        self.inverse.get(x.index())?.get(remapped.index()).copied()
    }

    /// Labels of the remapped class realizable at each instance.
    pub fn support(&self) -> Support {
        self.inverse
            .iter()
            .map(|ys| (0..ys.len() as u32).map(LabelId).collect())
            .collect()
    }
}

/// Builds the remapped class and the table relating it to `class`.
pub fn remap_build(class: &HypothesisClass) -> Result<(HypothesisClass, RemapTable)> {
    if class.num_hypotheses() == 0 {
        return Err(Error::input("cannot remap an empty class"));
    }
    let all = class.all_members();
    let mut forward = Vec::with_capacity(class.num_instances());
    let mut inverse = Vec::with_capacity(class.num_instances());
    for x in class.instances() {
        let used = class.project_set(&all, x);
        let mut fwd = vec![None; class.num_labels()];
        for (i, y) in used.iter().enumerate() {
            fwd[y.index()] = Some(LabelId(i as u32));
        }
        forward.push(fwd);
        inverse.push(used);
    }
    let width = inverse.iter().map(Vec::len).max().unwrap_or(0);
    let table = RemapTable {
        forward,
        inverse,
        width,
    };
    let rows = (0..class.num_hypotheses())
        .map(|h| {
            class
                .instances()
                .map(|x| table.forward(x, class.eval(h, x)).expect("label used by h"))
                .collect()
        })
        .collect();
    let remapped = HypothesisClass::new(
        class.instance_names().to_vec(),
        (1..=width).map(|i| i.to_string()).collect(),
        class.hypothesis_names().to_vec(),
        rows,
    )
    .map_err(|e| Error::Invariant(format!("remapping collapsed hypotheses: {e}")))?;
    Ok((remapped, table))
}

/// The stream as seen by a learner for the remapped class. A label no
/// hypothesis uses at its instance becomes the extra id `table.width()`, so
/// the result should be scored against the remapped class with one extra
/// label appended.
pub fn remap_stream(stream: &Stream, table: &RemapTable) -> Stream {
    let sentinel = LabelId(table.width() as u32);
    Stream::new(
        stream
            .examples
            .iter()
            .map(|e| StreamExample {
                x: e.x,
                y: table.forward(e.x, e.y).unwrap_or(sentinel),
            })
            .collect(),
    )
}

/// Plays a learner for the remapped class on the original class, mapping its
/// predictions back and passing the loss bit through unchanged.
pub struct RemapWrapper {
    inner: Box<dyn BanditLearner>,
    table: Arc<RemapTable>,
    last: Option<(InstanceId, LabelId)>,
}

impl RemapWrapper {
    pub fn new(inner: Box<dyn BanditLearner>, table: Arc<RemapTable>) -> Self {
        Self {
            inner,
            table,
            last: None,
        }
    }

    pub fn table(&self) -> &Arc<RemapTable> {
        &self.table
    }
}

impl Predictor for RemapWrapper {
    fn name(&self) -> String {
        format!("remap({})", self.inner.name())
    }

    fn is_deterministic(&self) -> bool {
        self.inner.is_deterministic()
    }

    fn predict(&mut self, x: InstanceId) -> Result<LabelId> {
        let remapped = self.inner.predict(x)?;
        let y = self.table.inverse(x, remapped).ok_or_else(|| {
            Error::Contract(format!(
                "inner learner predicted remapped label {} at an instance with {} realizable labels",
                remapped.0 + 1,
                self.table.inverse.get(x.index()).map_or(0, Vec::len)
            ))
        })?;
        self.last = Some((x, remapped));
        Ok(y)
    }
}

impl BanditLearner for RemapWrapper {
    fn observe_loss(&mut self, x: InstanceId, _prediction: LabelId, correct: bool) -> Result<()> {
        match self.last.take() {
            Some((px, remapped)) if px == x => self.inner.observe_loss(x, remapped, correct),
            _ => Err(Error::Contract("feedback without a matching prediction".into())),
        }
    }
}

#[cfg(test)]
fn remapped_agrees(class: &HypothesisClass, remapped: &HypothesisClass, table: &RemapTable) -> bool {
    class.num_hypotheses() == remapped.num_hypotheses()
        && (0..class.num_hypotheses()).all(|h| {
            class
                .instances()
                .all(|x| table.forward(x, class.eval(h, x)) == Some(remapped.eval(h, x)))
        })
        && crate::class::VersionSpace::full(Arc::new(remapped.clone())).max_projection() == table.width()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{gen_constants, gen_random};
    use crate::class::VersionSpace;
    use crate::dimensions::{bldim, ldim};
    use crate::learners::Bsoa;

    #[test]
    fn constants_remap_to_constants() {
        let class = gen_constants(3, 2).unwrap();
        let (bar, table) = remap_build(&class).unwrap();
        assert_eq!(bar.num_labels(), 3);
        assert_eq!(table.width(), 3);
        for h in 0..3 {
            assert_eq!(bar.row(h), &[LabelId(h as u32), LabelId(h as u32)]);
        }
        assert!(remapped_agrees(&class, &bar, &table));
    }

    #[test]
    fn dimensions_preserved_on_random_classes() {
        for seed in 0..40 {
            let class = gen_random(3, 4, 6, seed).unwrap();
            let (bar, table) = remap_build(&class).unwrap();
            assert!(remapped_agrees(&class, &bar, &table));
            for x in class.instances() {
                for (i, &y) in table.inverse[x.index()].iter().enumerate() {
                    assert_eq!(table.forward(x, y), Some(LabelId(i as u32)));
                }
            }
            let v = VersionSpace::full(Arc::new(class));
            let w = VersionSpace::full(Arc::new(bar));
            assert_eq!(ldim(&v), ldim(&w));
            assert_eq!(bldim(&v), bldim(&w));
        }
    }

    #[test]
    fn wrapped_bsoa_matches_direct_bsoa() {
        let class = Arc::new(gen_constants(3, 1).unwrap());
        let (bar, table) = remap_build(&class).unwrap();
        let table = Arc::new(table);
        for truth in 0..3u32 {
            let mut direct = Bsoa::new(class.clone());
            let mut wrapped = RemapWrapper::new(Box::new(Bsoa::new(Arc::new(bar.clone()))), table.clone());
            for _ in 0..4 {
                let a = direct.predict(InstanceId(0)).unwrap();
                let b = wrapped.predict(InstanceId(0)).unwrap();
                assert_eq!(a, b);
                direct.observe_loss(InstanceId(0), a, a.0 == truth).unwrap();
                wrapped.observe_loss(InstanceId(0), b, b.0 == truth).unwrap();
            }
        }
    }

    struct Fixed(LabelId);

    impl Predictor for Fixed {
        fn name(&self) -> String {
            "fixed".into()
        }
        fn is_deterministic(&self) -> bool {
            true
        }
        fn predict(&mut self, _x: InstanceId) -> Result<LabelId> {
            Ok(self.0)
        }
    }

    impl BanditLearner for Fixed {
        fn observe_loss(&mut self, _x: InstanceId, _p: LabelId, _c: bool) -> Result<()> {
            Ok(())
        }
    }

    #[test]
    fn out_of_range_inner_prediction_is_a_contract_error() {
        let class = HypothesisClass::new(
            vec!["a".into(), "b".into()],
            vec!["p".into(), "q".into(), "r".into()],
            vec!["h1".into(), "h2".into(), "h3".into()],
            vec![
                vec![LabelId(0), LabelId(0)],
                vec![LabelId(1), LabelId(0)],
                vec![LabelId(2), LabelId(2)],
            ],
        )
        .unwrap();
        let (_, table) = remap_build(&class).unwrap();
        assert_eq!(table.width(), 3);
        let mut wrapper = RemapWrapper::new(Box::new(Fixed(LabelId(2))), Arc::new(table));
        assert_eq!(wrapper.predict(InstanceId(0)).unwrap(), LabelId(2));
        wrapper.observe_loss(InstanceId(0), LabelId(2), false).unwrap();
        assert!(matches!(wrapper.predict(InstanceId(1)), Err(Error::Contract(_))));
    }

    #[test]
    fn stream_sentinel() {
        let class = HypothesisClass::new(
            vec!["a".into()],
            vec!["p".into(), "q".into(), "r".into()],
            vec!["h1".into(), "h2".into()],
            vec![vec![LabelId(0)], vec![LabelId(2)]],
        )
        .unwrap();
        let (_, table) = remap_build(&class).unwrap();
        let stream = Stream::new(vec![
            StreamExample { x: InstanceId(0), y: LabelId(2) },
            StreamExample { x: InstanceId(0), y: LabelId(1) },
        ]);
        let ys: Vec<u32> = remap_stream(&stream, &table).examples.iter().map(|e| e.y.0).collect();
        assert_eq!(ys, vec![1, 2]);
    }
}
