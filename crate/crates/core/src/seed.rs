//! Deterministic seed splitting.
//!
//! Trial `i` of a run with master seed `m` uses `mix(m, i)`, where `mix` is
//! the SplitMix64 finalizer applied to `m + (i + 1) · 0x9E3779B97F4A7C15`
//! (wrapping). Sub-seeds for the adversary and learner of a trial are
//! `mix(trial_seed, 0)` and `mix(trial_seed, 1)`.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // SplitMix64 seeded with 0 produces 0xE220A8397B1DCDAF first.
        assert_eq!(mix(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_ne!(mix(7, 0), mix(7, 1));
        assert_eq!(mix(7, 3), mix(7, 3));
    }
}
