//! Class families: constants, all functions, and seeded random tables.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HypothesisClass, LabelId};
use crate::error::{Error, Result};

fn instance_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

fn label_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| i.to_string()).collect()
}

fn hypothesis_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("h{i}")).collect()
}

/// `n` constant functions `h_a(x) = a` over `m` instances.
pub fn gen_constants(n: usize, m: usize) -> Result<HypothesisClass> {
    if n < 1 || m < 1 {
        return Err(Error::input(format!("constants family needs n, m >= 1 (got n={n}, m={m})")));
    }
    let rows = (0..n).map(|a| vec![LabelId(a as u32); m]).collect();
    HypothesisClass::new(instance_names(m), label_names(n), hypothesis_names(n), rows)
}

fn checked_pow(k: usize, m: usize) -> Option<u128> {
    (k as u128).checked_pow(u32::try_from(m).ok()?)
}

/// Every function from `m` instances to `k` labels, rows in lexicographic
/// order (first instance most significant).
pub fn gen_full(m: usize, k: usize, cap: usize) -> Result<HypothesisClass> {
    if m < 1 || k < 1 {
        return Err(Error::input(format!("full family needs m, k >= 1 (got m={m}, k={k})")));
    }
    let count = checked_pow(k, m).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::Capacity {
            what: "full class size k^m",
            requested: count,
            cap: cap as u128,
        });
    }
    let rows = (0..count as usize).map(|r| decode_row(r, m, k)).collect::<Vec<_>>();
    HypothesisClass::new(instance_names(m), label_names(k), hypothesis_names(rows.len()), rows)
}

fn decode_row(mut r: usize, m: usize, k: usize) -> Vec<LabelId> {
    let mut row = vec![LabelId(0); m];
    for slot in row.iter_mut().rev() {
        *slot = LabelId((r % k) as u32);
        r /= k;
    }
    row
}

/// `n` distinct functions drawn uniformly from `k^m`, deterministic in `seed`.
///
/// The label universe is compacted to the labels some hypothesis outputs.
pub fn gen_random(m: usize, k: usize, n: usize, seed: u64) -> Result<HypothesisClass> {
    if m < 1 || k < 1 {
        return Err(Error::input(format!("random family needs m, k >= 1 (got m={m}, k={k})")));
    }
    let total = checked_pow(k, m).unwrap_or(u128::MAX);
    if n as u128 > total {
        return Err(Error::input(format!("cannot draw {n} distinct functions from {total}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<LabelId>> = if total <= 4 * n as u128 {
        let mut all: Vec<usize> = (0..total as usize).collect();
        all.shuffle(&mut rng);
        all.truncate(n);
        all.into_iter().map(|r| decode_row(r, m, k)).collect()
    } else {
        let mut seen = HashSet::with_capacity(n);
        let mut rows = Vec::with_capacity(n);
        while rows.len() < n {
            let row: Vec<LabelId> = (0..m).map(|_| LabelId(rng.gen_range(0..k as u32))).collect();
            if seen.insert(row.clone()) {
                rows.push(row);
            }
        }
        rows
    };

    let mut used = vec![false; k];
    for y in rows.iter().flatten() {
        used[y.index()] = true;
    }
    if rows.is_empty() {
        used[0] = true;
    }
    let mut remap = vec![u32::MAX; k];
    let mut labels = Vec::new();
    for (y, &u) in used.iter().enumerate() {
        if u {
            remap[y] = labels.len() as u32;
            labels.push((y + 1).to_string());
        }
    }
    let rows = rows
        .into_iter()
        .map(|row| row.into_iter().map(|y| LabelId(remap[y.index()])).collect())
        .collect::<Vec<_>>();
    HypothesisClass::new(instance_names(m), labels, hypothesis_names(n), rows)
}

/// Appends `extra` labels that no hypothesis outputs.
pub fn with_extra_labels(class: &HypothesisClass, extra: usize) -> Result<HypothesisClass> {
    let mut labels = class.label_names().to_vec();
    let mut next = labels.len() + 1;
    for _ in 0..extra {
        let mut name = next.to_string();
        while labels.contains(&name) {
            next += 1;
            name = next.to_string();
        }
        labels.push(name);
        next += 1;
    }
    let rows = (0..class.num_hypotheses()).map(|h| class.row(h).to_vec()).collect();
    HypothesisClass::new(
        class.instance_names().to_vec(),
        labels,
        class.hypothesis_names().to_vec(),
        rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_table() {
        let c = gen_constants(3, 2).unwrap();
        let rows: Vec<Vec<&str>> = (0..3)
            .map(|h| c.row(h).iter().map(|&y| c.label_name(y)).collect())
            .collect();
        assert_eq!(rows, vec![vec!["1", "1"], vec!["2", "2"], vec!["3", "3"]]);
        assert_eq!(gen_constants(1, 1).unwrap().num_hypotheses(), 1);
        assert!(gen_constants(0, 1).is_err());
        assert!(gen_constants(2, 0).is_err());
    }

    #[test]
    fn full_sizes() {
        assert_eq!(gen_full(2, 2, 4096).unwrap().num_hypotheses(), 4);
        assert_eq!(gen_full(3, 2, 4096).unwrap().num_hypotheses(), 8);
        let one = gen_full(1, 3, 4096).unwrap();
        assert_eq!(one.num_hypotheses(), 3);
        assert_eq!(one, gen_constants(3, 1).unwrap());
        assert!(matches!(gen_full(13, 2, 4096), Err(Error::Capacity { .. })));
        assert!(matches!(gen_full(200, 3, 4096), Err(Error::Capacity { .. })));
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let a = gen_random(3, 3, 5, 11).unwrap();
        let b = gen_random(3, 3, 5, 11).unwrap();
        assert_eq!(a, b);
        assert!(gen_random(2, 2, 5, 0).is_err());

        let forced = gen_random(2, 2, 4, 99).unwrap();
        let mut rows: Vec<Vec<LabelId>> = (0..4).map(|h| forced.row(h).to_vec()).collect();
        rows.sort();
        let full = gen_full(2, 2, 4096).unwrap();
        let expected: Vec<Vec<LabelId>> = (0..4).map(|h| full.row(h).to_vec()).collect();
        assert_eq!(rows, expected);
    }

    #[test]
    fn extra_labels_are_unused() {
        let c = with_extra_labels(&gen_constants(2, 1).unwrap(), 2).unwrap();
        assert_eq!(c.label_names(), &["1", "2", "3", "4"]);
        assert_eq!(c.max_projection_of(&c.all_members()), 2);
    }
}
