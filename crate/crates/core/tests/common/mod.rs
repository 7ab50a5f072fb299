//! Test-only oracles. Kept independent of the library's recursions: they
//! work on plain row tables and search trees literally.

#![allow(dead_code)]

use bandit_ldim::class::{gen_random, HypothesisClass, Stream};
use bandit_ldim::seed::mix;
use bandit_ldim::InstanceId;

/// Plain table: `rows[h][x]` is a label index.
#[derive(Debug, Clone)]
pub struct Table {
    pub rows: Vec<Vec<usize>>,
    pub num_instances: usize,
    pub num_labels: usize,
}

impl Table {
    pub fn of(class: &HypothesisClass) -> Self {
        Table {
            rows: (0..class.num_hypotheses())
                .map(|h| class.row(h).iter().map(|y| y.index()).collect())
                .collect(),
            num_instances: class.num_instances(),
            num_labels: class.num_labels(),
        }
    }

    /// The 0/1 loss table over the product domain, duplicates removed.
    pub fn loss_table(&self) -> Table {
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for row in &self.rows {
            let mut loss = Vec::new();
            for x in 0..self.num_instances {
                for y in 0..self.num_labels {
                    loss.push(usize::from(row[x] != y));
                }
            }
            if !rows.contains(&loss) {
                rows.push(loss);
            }
        }
        Table {
            rows,
            num_instances: self.num_instances * self.num_labels,
            num_labels: 2,
        }
    }
}

/// Does some binary tree of `depth` with distinct edge labels get shattered
/// by the hypotheses in `alive` (indices into `t.rows`)? Every node tries
/// every instance and every ordered pair of distinct labels from the whole
/// universe.
fn ltree_exists(t: &Table, alive: &[usize], depth: usize) -> bool {
    if depth == 0 {
        return !alive.is_empty();
    }
    for x in 0..t.num_instances {
        for y1 in 0..t.num_labels {
            for y2 in 0..t.num_labels {
                if y1 == y2 {
                    continue;
                }
                let left: Vec<usize> = alive.iter().copied().filter(|&h| t.rows[h][x] == y1).collect();
                let right: Vec<usize> = alive.iter().copied().filter(|&h| t.rows[h][x] == y2).collect();
                if ltree_exists(t, &left, depth - 1) && ltree_exists(t, &right, depth - 1) {
                    return true;
                }
            }
        }
    }
    false
}

/// Littlestone dimension by literal tree search; −1 for the empty table.
pub fn brute_ldim(t: &Table) -> i32 {
    let all: Vec<usize> = (0..t.rows.len()).collect();
    if all.is_empty() {
        return -1;
    }
    let mut d = 0;
    while ltree_exists(t, &all, d + 1) {
        d += 1;
    }
    d as i32
}

pub fn brute_sgdim(t: &Table) -> i32 {
    if t.rows.is_empty() {
        return -1;
    }
    brute_ldim(&t.loss_table())
}

/// Binomial coefficient as f64.
pub fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Seeded random classes with `|X| <= 4`, `|Y| <= 4`, `|H| <= 10`.
pub fn fuzz_corpus(count: usize, master: u64) -> Vec<HypothesisClass> {
    (0..count as u64)
        .map(|i| {
            let s = mix(master, i);
            let m = 1 + (s % 4) as usize;
            let k = 1 + ((s >> 8) % 4) as usize;
            let max_n = k.pow(m as u32).min(10);
            let n = 1 + ((s >> 16) as usize % max_n);
            gen_random(m, k, n, s).expect("parameters are in range")
        })
        .collect()
}

/// Every instance sequence of the given length.
pub fn instance_sequences(num_instances: usize, len: usize) -> Vec<Vec<InstanceId>> {
    let total = num_instances.pow(len as u32);
    (0..total)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let x = code % num_instances;
                    code /= num_instances;
                    InstanceId(x as u32)
                })
                .collect()
        })
        .collect()
}

/// Every realizable stream of the given length, as `(labeling hypothesis, stream)`.
pub fn realizable_streams(class: &HypothesisClass, len: usize) -> Vec<(usize, Stream)> {
    let mut out = Vec::new();
    for xs in instance_sequences(class.num_instances(), len) {
        for h in 0..class.num_hypotheses() {
            out.push((h, Stream::labeled_by(class, h, &xs)));
        }
    }
    out
}
