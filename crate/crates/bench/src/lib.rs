//! Shared fixtures for the benchmarks.

use sfstkit::gen::sample_trim_with_rng;
use sfstkit::rng::{rng_for, stream};
use sfstkit::{generate, random_walk, GenConfig, Pair, Sfst, WalkConfig};

pub fn config(n_states: usize, seed: u64) -> GenConfig {
    GenConfig {
        n_states,
        input_alphabet_size: 10,
        seed,
        ..GenConfig::default()
    }
}

/// A trim machine before minimization.
pub fn raw_machine(n_states: usize, seed: u64) -> Sfst {
    let cfg = config(n_states, seed);
    sample_trim_with_rng(&cfg, &mut rng_for(seed, stream::GENERATE)).expect("generation")
}

pub fn machine(n_states: usize, seed: u64) -> Sfst {
    generate(&config(n_states, seed)).expect("generation")
}

pub fn pairs(m: &Sfst, n: usize, seed: u64) -> Vec<Pair> {
    let cfg = WalkConfig {
        target_pairs: n,
        seed,
        ..WalkConfig::default()
    };
    random_walk(m, &cfg).expect("walks").pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_consistent() {
        let m = machine(10, 1);
        let ps = pairs(&m, 100, 1);
        assert_eq!(ps.len(), 100);
        assert!(ps.iter().all(|(i, o)| m.transduce(i).unwrap().as_ref() == Some(o)));
        assert!(raw_machine(10, 1).num_states() >= m.num_states());
    }
}
