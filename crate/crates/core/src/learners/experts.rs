//! Expert pool for the agnostic-to-realizable reduction.
//!
//! An expert is a set of at most `L` override rounds with a label for each.
//! It runs full-information SOA on its own predictions: on an override round
//! it predicts the override label, otherwise the SOA choice, and in both
//! cases it then restricts its version space to hypotheses agreeing with
//! what it predicted. The experts therefore never look at feedback.
//!
//! For any hypothesis `h` and instance sequence, the expert that overrides
//! exactly where SOA disagrees with `h` reproduces `h`: each such round
//! lowers the Littlestone dimension of its version space, so it needs at most
//! `L` overrides.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::soa::soa_choice;
use super::Support;
use crate::class::{HypothesisClass, InstanceId, LabelId};
use crate::dimensions::DimensionEngine;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expert {
    /// `(round, label)` pairs, sorted by round, rounds distinct.
    pub overrides: Vec<(usize, LabelId)>,
}

#[derive(Debug, Clone)]
pub struct ExpertPool {
    class: Arc<HypothesisClass>,
    horizon: usize,
    max_overrides: usize,
    experts: Vec<Expert>,
}

impl ExpertPool {
    pub fn class(&self) -> &Arc<HypothesisClass> {
        &self.class
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn max_overrides(&self) -> usize {
        self.max_overrides
    }

    pub fn experts(&self) -> &[Expert] {
        &self.experts
    }

    pub fn len(&self) -> usize {
        self.experts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.experts.is_empty()
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `Σ_{j ≤ min(L, T)} C(T, j) · k^j`, saturating at `u128::MAX`.
pub fn expert_count(horizon: usize, max_overrides: usize, labels: usize) -> u128 {
    let t = horizon as u128;
    let mut total: u128 = 0;
    for j in 0..=max_overrides.min(horizon) as u32 {
        let term = binomial(t, j as u128).and_then(|c| (labels as u128).checked_pow(j).and_then(|p| c.checked_mul(p)));
        match term.and_then(|term| total.checked_add(term)) {
            Some(sum) => total = sum,
            None => return u128::MAX,
        }
    }
    total
}

/// Enumerates every expert with at most `max_overrides` override rounds in
/// `0..horizon`, each labeled by any label of `class`.
pub fn build_expert_pool(
    class: Arc<HypothesisClass>,
    horizon: usize,
    max_overrides: usize,
    cap: usize,
) -> Result<ExpertPool> {
    let k = class.num_labels();
    let count = expert_count(horizon, max_overrides, k);
    if count > cap as u128 {
        return Err(Error::Capacity {
            what: "expert pool",
            requested: count,
            cap: cap as u128,
        });
    }
    let mut experts = Vec::with_capacity(count as usize);
    for j in 0..=max_overrides.min(horizon) {
        let mut rounds: Vec<usize> = (0..j).collect();
        loop {
            let mut labels = vec![0u32; j];
            loop {
                experts.push(Expert {
                    overrides: rounds.iter().zip(&labels).map(|(&r, &y)| (r, LabelId(y))).collect(),
                });
                if !advance_odometer(&mut labels, k as u32) {
                    break;
                }
            }
            if !next_combination(&mut rounds, horizon) {
                break;
            }
        }
    }
    debug_assert_eq!(experts.len() as u128, count);
    Ok(ExpertPool {
        class,
        horizon,
        max_overrides,
        experts,
    })
}

fn advance_odometer(digits: &mut [u32], base: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Simulates every expert of a pool round by round.
///
/// Experts share version spaces heavily, so states are interned and the SOA
/// choice and the transition of each state are cached per instance in flat
/// tables indexed by state id.
#[derive(Debug, Clone)]
pub struct ExpertRunner {
    pool: Arc<ExpertPool>,
    engine: DimensionEngine,
    support: Option<Arc<Support>>,
    round: usize,
    states: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, usize>,
    /// `choice[state * |X| + x]`.
    choice: Vec<Option<LabelId>>,
    /// `step[(state * |X| + x) * |Y| + y]`, `UNKNOWN` until computed.
    step: Vec<usize>,
    current: Vec<usize>,
    cursor: Vec<usize>,
}

const UNKNOWN: usize = usize::MAX;

impl ExpertRunner {
    /// `support`, when given, lists the labels an override may use at each
    /// instance; an override outside it is skipped and the expert follows
    /// SOA that round.
    pub fn new(pool: Arc<ExpertPool>, support: Option<Arc<Support>>) -> Self {
        let class = pool.class.clone();
        let full = class.all_members();
        let n = pool.len();
        let mut runner = Self {
            engine: DimensionEngine::new(class),
            support,
            round: 0,
            states: Vec::new(),
            index: HashMap::new(),
            choice: Vec::new(),
            step: Vec::new(),
            current: vec![0; n],
            cursor: vec![0; n],
            pool,
        };
        runner.intern(full);
        runner
    }

    pub fn pool(&self) -> &Arc<ExpertPool> {
        &self.pool
    }

    pub fn round(&self) -> usize {
        self.round
    }

    fn intern(&mut self, set: FixedBitSet) -> usize {
        if let Some(&id) = self.index.get(&set) {
            return id;
        }
        let id = self.states.len();
        self.states.push(set.clone());
        self.index.insert(set, id);
        let (m, k) = (self.pool.class.num_instances(), self.pool.class.num_labels());
        self.choice.resize(self.choice.len() + m, None);
        self.step.resize(self.step.len() + m * k, UNKNOWN);
        id
    }

    fn soa(&mut self, state: usize, x: InstanceId) -> LabelId {
        let slot = state * self.pool.class.num_instances() + x.index();
        if let Some(y) = self.choice[slot] {
            return y;
        }
        let y = soa_choice(&mut self.engine, &self.states[state], x)
            .expect("interned states are nonempty");
        self.choice[slot] = Some(y);
        y
    }

    fn transition(&mut self, state: usize, x: InstanceId, y: LabelId) -> usize {
        let class = &self.pool.class;
        let slot = (state * class.num_instances() + x.index()) * class.num_labels() + y.index();
        if self.step[slot] != UNKNOWN {
            return self.step[slot];
        }
        let mut set = class.restrict_eq_set(&self.states[state], x, y);
        if set.is_clear() {
            set = class.all_members();
        }
        let next = self.intern(set);
        self.step[slot] = next;
        next
    }

    fn allowed(&self, x: InstanceId, y: LabelId) -> bool {
        match &self.support {
            Some(s) => s[x.index()].contains(&y),
            None => true,
        }
    }

    fn forced(&self, i: usize, x: InstanceId) -> Option<LabelId> {
        self.pool.experts[i]
            .overrides
            .get(self.cursor[i])
            .filter(|(r, _)| *r == self.round)
            .map(|&(_, y)| y)
            .filter(|&y| self.allowed(x, y))
    }

    /// Each expert's prediction on `x` in the current round.
    pub fn advice(&mut self, x: InstanceId) -> Result<Vec<LabelId>> {
        self.pool.class.check_instance(x)?;
        let mut out = Vec::with_capacity(self.pool.len());
        for i in 0..self.pool.len() {
            let y = match self.forced(i, x) {
                Some(y) => y,
                None => self.soa(self.current[i], x),
            };
            out.push(y);
        }
        Ok(out)
    }

    /// Moves every expert past the current round, each conditioning on its
    /// own prediction from `advice`.
    pub fn advance(&mut self, x: InstanceId, advice: &[LabelId]) -> Result<()> {
        if advice.len() != self.pool.len() {
            return Err(Error::Invariant(format!(
                "advice has {} entries for {} experts",
                advice.len(),
                self.pool.len()
            )));
        }
        self.pool.class.check_instance(x)?;
        for (i, &y) in advice.iter().enumerate() {
            self.pool.class.check_label(y)?;
            self.current[i] = self.transition(self.current[i], x, y);
            if self.pool.experts[i]
                .overrides
                .get(self.cursor[i])
                .is_some_and(|(r, _)| *r == self.round)
            {
                self.cursor[i] += 1;
            }
        }
        self.round += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{gen_constants, gen_full, Stream};

    #[test]
    fn counts() {
        assert_eq!(expert_count(3, 1, 2), 7);
        assert_eq!(expert_count(10, 0, 5), 1);
        assert_eq!(expert_count(2, 5, 3), 1 + 2 * 3 + 9);
        assert_eq!(expert_count(200, 1, 3), 601);
        assert_eq!(expert_count(1_000_000, 40, 1000), u128::MAX);
        let class = Arc::new(gen_constants(2, 3).unwrap());
        let pool = build_expert_pool(class.clone(), 3, 1, 100).unwrap();
        assert_eq!(pool.len(), 7);
        assert_eq!(build_expert_pool(class.clone(), 5, 0, 100).unwrap().len(), 1);
        let err = build_expert_pool(class, 100, 2, 1000).unwrap_err();
        assert!(matches!(err, Error::Capacity { requested: 20001, cap: 1000, .. }));
    }

    #[test]
    fn enumeration_is_distinct() {
        let class = Arc::new(gen_constants(3, 1).unwrap());
        let pool = build_expert_pool(class, 4, 2, 1000).unwrap();
        let mut seen = std::collections::HashSet::new();
        for e in pool.experts() {
            assert!(e.overrides.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(seen.insert(e.overrides.clone()));
        }
        assert_eq!(seen.len(), 1 + 4 * 3 + 6 * 9);
    }

    fn expert_mistakes(pool: Arc<ExpertPool>, stream: &Stream) -> Vec<usize> {
        let mut runner = ExpertRunner::new(pool.clone(), None);
        let mut mistakes = vec![0; pool.len()];
        for ex in &stream.examples {
            let advice = runner.advice(ex.x).unwrap();
            for (m, y) in mistakes.iter_mut().zip(&advice) {
                *m += usize::from(*y != ex.y);
            }
            runner.advance(ex.x, &advice).unwrap();
        }
        mistakes
    }

    fn all_streams(class: &HypothesisClass, len: usize) -> Vec<Stream> {
        let m = class.num_instances();
        let k = class.num_labels();
        let per = m * k;
        let total = per.pow(len as u32);
        (0..total)
            .map(|mut code| {
                let examples = (0..len)
                    .map(|_| {
                        let c = code % per;
                        code /= per;
                        crate::class::StreamExample {
                            x: InstanceId((c / k) as u32),
                            y: LabelId((c % k) as u32),
                        }
                    })
                    .collect();
                Stream::new(examples)
            })
            .collect()
    }

    #[test]
    fn cover_on_full_two_by_two() {
        let class = Arc::new(gen_full(2, 2, 4096).unwrap());
        for t in 1..=4 {
            let pool = Arc::new(build_expert_pool(class.clone(), t, 2, 20_000).unwrap());
            for stream in all_streams(&class, t) {
                let best_h = (0..class.num_hypotheses())
                    .map(|h| stream.examples.iter().filter(|e| class.eval(h, e.x) != e.y).count())
                    .min()
                    .unwrap();
                let best_expert = *expert_mistakes(pool.clone(), &stream).iter().min().unwrap();
                assert!(best_expert <= best_h, "stream {stream:?}");
                if best_h == 0 {
                    assert_eq!(best_expert, 0);
                }
            }
        }
    }

    #[test]
    fn cover_on_constants_with_one_override() {
        let class = Arc::new(gen_constants(3, 1).unwrap());
        let pool = Arc::new(build_expert_pool(class.clone(), 6, 1, 20_000).unwrap());
        for stream in all_streams(&class, 6) {
            let best_h = (0..3)
                .map(|h| stream.examples.iter().filter(|e| class.eval(h, e.x) != e.y).count())
                .min()
                .unwrap();
            assert!(*expert_mistakes(pool.clone(), &stream).iter().min().unwrap() <= best_h);
        }
    }

    #[test]
    fn support_filters_overrides() {
        let class = Arc::new(gen_constants(2, 1).unwrap());
        let pool = Arc::new(build_expert_pool(class, 1, 1, 100).unwrap());
        let support = Arc::new(vec![vec![LabelId(0)]]);
        let mut runner = ExpertRunner::new(pool, Some(support));
        let advice = runner.advice(InstanceId(0)).unwrap();
        assert!(advice.iter().all(|&y| y == LabelId(0)));
    }
}
