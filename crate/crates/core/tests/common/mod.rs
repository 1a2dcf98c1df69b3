//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracles here deliberately avoid `Sfst::transduce`, `minimize` and
//! `equivalent`: they work from the raw transition listing only.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfstkit::{GenConfig, Sfst, StateId, Symbol, TokenString};

pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_7e57)
}

/// A random partial machine with multi-token outputs, random finality and
/// random final outputs. Not necessarily trim.
pub fn rich_machine(rng: &mut ChaCha8Rng, n: usize, sigma: u32, gamma: u32) -> Sfst {
    let mut b = Sfst::builder(n).input_alphabet((0..sigma).map(Symbol));
    let word = |rng: &mut ChaCha8Rng, max: usize| -> TokenString {
        let len = rng.gen_range(0..=max);
        (0..len).map(|_| Symbol(rng.gen_range(0..gamma))).collect()
    };
    for q in 0..n {
        for a in 0..sigma {
            if rng.gen_bool(0.75) {
                let out = word(rng, 3);
                let dst = rng.gen_range(0..n);
                b.add_transition(q, Symbol(a), out, dst).unwrap();
            }
        }
        if rng.gen_bool(0.6) {
            let w = word(rng, 2);
            b.set_final(q, w).unwrap();
        }
    }
    b.build().unwrap()
}

/// A minimized uniform random machine with all-final states.
pub fn gen_machine(n: usize, sigma: usize, seed: u64) -> Sfst {
    sfstkit::generate(&GenConfig {
        n_states: n,
        input_alphabet_size: sigma,
        output_alphabet_size: 10,
        seed,
        ..GenConfig::default()
    })
    .unwrap()
}

/// Every string over `0..sigma` of length at most `max_len`, shortest first.
pub fn all_strings(sigma: u32, max_len: usize) -> Vec<TokenString> {
    let mut out = vec![TokenString::empty()];
    let mut layer = vec![TokenString::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * sigma as usize);
        for w in &layer {
            for a in 0..sigma {
                let mut v = w.clone();
                v.push(Symbol(a));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Table-driven interpreter built only from the transition listing.
pub struct Reference {
    delta: HashMap<(StateId, Symbol), (StateId, Vec<Symbol>)>,
    omega: HashMap<StateId, Vec<Symbol>>,
    start: StateId,
}

impl Reference {
    pub fn new(m: &Sfst) -> Self {
        Reference {
            delta: m
                .transitions()
                .map(|(q, a, arc)| ((q, a), (arc.target, arc.output.to_vec())))
                .collect(),
            omega: m.finals().map(|(q, w)| (q, w.to_vec())).collect(),
            start: m.start(),
        }
    }

    /// Per-step replay: the visited (state, symbol) pairs, the reached state
    /// and the accumulated edge output.
    pub fn replay(&self, input: &[Symbol]) -> Option<(Vec<(StateId, Symbol)>, StateId, Vec<Symbol>)> {
        let mut q = self.start;
        let mut out = Vec::new();
        let mut visited = Vec::with_capacity(input.len());
        for &a in input {
            let (dst, o) = self.delta.get(&(q, a))?;
            visited.push((q, a));
            out.extend_from_slice(o);
            q = *dst;
        }
        Some((visited, q, out))
    }

    pub fn transduce(&self, input: &[Symbol]) -> Option<TokenString> {
        let (_, q, mut out) = self.replay(input)?;
        out.extend_from_slice(self.omega.get(&q)?);
        Some(TokenString::from(out))
    }
}

/// Exhaustive comparison on every string up to `max_len`.
pub fn agree_up_to(a: &Sfst, b: &Sfst, sigma: u32, max_len: usize) -> bool {
    let (ra, rb) = (Reference::new(a), Reference::new(b));
    all_strings(sigma, max_len)
        .iter()
        .all(|w| ra.transduce(w) == rb.transduce(w))
}

/// A uniformly random path from the start that ends in a final state, or
/// `None` if the attempt got stuck.
pub fn random_accepted_input(m: &Sfst, rng: &mut ChaCha8Rng, max_len: usize) -> Option<TokenString> {
    let mut q = m.start();
    let mut w = TokenString::empty();
    let target_len = rng.gen_range(0..=max_len);
    loop {
        if w.len() >= target_len && m.is_final(q) {
            return Some(w);
        }
        let arcs: Vec<_> = m.arcs(q).collect();
        if arcs.is_empty() || w.len() > max_len * 4 {
            return m.is_final(q).then_some(w);
        }
        let (a, arc) = arcs[rng.gen_range(0..arcs.len())];
        w.push(a);
        q = arc.target;
    }
}

/// Random permutation of `0..n`.
pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<StateId> {
    use rand::seq::SliceRandom;
    let mut p: Vec<StateId> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Reference SCAN semantics for `prim [opposite|around] [left|right]
/// [twice|thrice]`, written from the grammar rather than the machine.
pub fn scan_reference(command: &str) -> Option<String> {
    let words: Vec<&str> = command.split_whitespace().collect();
    let (&prim, mut rest) = words.split_first()?;
    let action = match prim {
        "jump" => "JUMP",
        "walk" => "WALK",
        "run" => "RUN",
        "look" => "LOOK",
        _ => return None,
    };
    let mut reps = 1;
    if let Some((&last, init)) = rest.split_last() {
        reps = match last {
            "twice" => 2,
            "thrice" => 3,
            _ => 1,
        };
        if reps > 1 {
            rest = init;
        }
    }
    let turn = |d: &str| match d {
        "left" => Some("LTURN"),
        "right" => Some("RTURN"),
        _ => None,
    };
    let once: Vec<&str> = match rest {
        [] => vec![action],
        [d] => vec![turn(d)?, action],
        ["opposite", d] => vec![turn(d)?, turn(d)?, action],
        ["around", d] => [turn(d)?, action].repeat(4),
        _ => return None,
    };
    Some(once.repeat(reps).join(" "))
}
