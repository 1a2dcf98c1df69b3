//! Input/output pair datasets sampled by random walks over a machine.

mod coverage;
mod io;
mod split;

pub use coverage::{compare_split_coverage, coverage, CoverageReport, DEFAULT_COVERAGE_THRESHOLD};
pub use io::{parse_dataset, print_dataset};
pub use split::{split, Split, SplitKind};

use std::collections::HashSet;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::format::content_hash;
use crate::rng::{rng_for, stream, Rng, RNG_ALGORITHM};
use crate::sfst::Sfst;
use crate::symbol::TokenString;

pub type Pair = (TokenString, TokenString);

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    /// Chance of stopping (and emitting ω) at each visited final state.
    pub stop_probability: f64,
    /// Walks that would take more steps are discarded.
    pub max_steps: usize,
    pub target_pairs: usize,
    pub seed: u64,
    /// Budget of walks, including discarded and duplicate ones.
    pub max_attempts: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            stop_probability: 0.10,
            max_steps: 50,
            target_pairs: 20_000,
            seed: 0,
            max_attempts: 1_000_000,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.stop_probability > 0.0 && self.stop_probability <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "stop_probability must lie in (0, 1], got {}",
                self.stop_probability
            )));
        }
        if self.max_steps == 0 || self.target_pairs == 0 || self.max_attempts == 0 {
            return Err(Error::InvalidConfig(
                "max_steps, target_pairs and max_attempts must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn to_kv(&self) -> Vec<(String, String)> {
        vec![
            ("stop_probability".into(), self.stop_probability.to_string()),
            ("max_steps".into(), self.max_steps.to_string()),
            ("target_pairs".into(), self.target_pairs.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("max_attempts".into(), self.max_attempts.to_string()),
            ("rng".into(), RNG_ALGORITHM.into()),
        ]
    }

    /// Reads back [`WalkConfig::to_kv`]. Missing keys keep their defaults,
    /// unknown keys are ignored.
    pub fn from_kv(kv: &[(String, String)]) -> Result<Self> {
        let mut cfg = WalkConfig::default();
        for (k, v) in kv {
            let bad = || Error::InvalidConfig(format!("bad value `{v}` for `{k}`"));
            match k.as_str() {
                "stop_probability" => cfg.stop_probability = v.parse().map_err(|_| bad())?,
                "max_steps" => cfg.max_steps = v.parse().map_err(|_| bad())?,
                "target_pairs" => cfg.target_pairs = v.parse().map_err(|_| bad())?,
                "seed" => cfg.seed = v.parse().map_err(|_| bad())?,
                "max_attempts" => cfg.max_attempts = v.parse().map_err(|_| bad())?,
                _ => {}
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Unique input/output pairs plus their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub pairs: Vec<Pair>,
    /// [`content_hash`] of the generating machine.
    pub machine_id: String,
    pub config: WalkConfig,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub(crate) fn with_pairs(&self, pairs: Vec<Pair>) -> Dataset {
        Dataset {
            pairs,
            machine_id: self.machine_id.clone(),
            config: self.config.clone(),
        }
    }

    pub fn max_input_len(&self) -> usize {
        self.pairs.iter().map(|(i, _)| i.len()).max().unwrap_or(0)
    }

    /// Checks that inputs are unique and that every pair agrees with `m`.
    pub fn verify(&self, m: &Sfst) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.pairs.len());
        for (input, output) in &self.pairs {
            if !seen.insert(input) {
                return Err(Error::InconsistentSample {
                    input: input.clone(),
                });
            }
            if m.transduce(input)?.as_ref() != Some(output) {
                return Err(Error::Consistency {
                    input: input.clone(),
                    output: output.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Single random walks over a machine.
///
/// At each state the walk stops with the configured probability if the state
/// is final; otherwise it follows an outgoing edge chosen uniformly. A walk
/// ending in a state without edges stops there if that state is final. Walks
/// that exceed the step cap or die in a non-final dead end yield `None`.
pub struct Walker<'a> {
    machine: &'a Sfst,
    stop_probability: f64,
    max_steps: usize,
}

impl<'a> Walker<'a> {
    pub fn new(machine: &'a Sfst, stop_probability: f64, max_steps: usize) -> Self {
        Walker {
            machine,
            stop_probability,
            max_steps,
        }
    }

    pub fn walk(&self, rng: &mut Rng) -> Option<Pair> {
        let m = self.machine;
        let mut q = m.start();
        let mut input = TokenString::empty();
        let mut output = TokenString::empty();
        loop {
            let fin = m.final_output(q);
            if fin.is_some() && rng.gen_bool(self.stop_probability) {
                break;
            }
            let n_arcs = m.states[q].arcs.len();
            if n_arcs == 0 {
                if fin.is_some() {
                    break;
                }
                return None;
            }
            if input.len() == self.max_steps {
                return None;
            }
            let (sym, arc) = m.arcs(q).nth(rng.gen_range(0..n_arcs)).expect("index in range");
            input.push(sym);
            output.extend_from(&arc.output);
            q = arc.target;
        }
        output.extend_from(m.final_output(q).expect("walks stop at final states"));
        Some((input, output))
    }
}

/// Collects `cfg.target_pairs` unique pairs by repeated random walks from the
/// start state, deduplicating on the input string.
pub fn random_walk(m: &Sfst, cfg: &WalkConfig) -> Result<Dataset> {
    cfg.validate()?;
    let mut rng = rng_for(cfg.seed, stream::WALK);
    let walker = Walker::new(m, cfg.stop_probability, cfg.max_steps);
    let mut seen: HashSet<TokenString> = HashSet::with_capacity(cfg.target_pairs);
    let mut pairs = Vec::with_capacity(cfg.target_pairs);
    let mut attempts = 0;
    while pairs.len() < cfg.target_pairs {
        if attempts == cfg.max_attempts {
            return Err(Error::WalkExhausted {
                attempts,
                collected: pairs.len(),
                target: cfg.target_pairs,
            });
        }
        attempts += 1;
        if let Some((input, output)) = walker.walk(&mut rng) {
            if seen.insert(input.clone()) {
                pairs.push((input, output));
            }
        }
    }
    Ok(Dataset {
        pairs,
        machine_id: content_hash(m),
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GenConfig};
    use crate::symbol::Symbol;

    fn self_loop() -> Sfst {
        let mut b = Sfst::builder(1);
        b.add_transition(0, Symbol(0), [9], 0).unwrap();
        b.set_final(0, TokenString::empty()).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn self_loop_yields_powers() {
        let m = self_loop();
        let cfg = WalkConfig {
            target_pairs: 51,
            max_steps: 50,
            max_attempts: 1_000_000,
            stop_probability: 0.05,
            ..WalkConfig::default()
        };
        let d = random_walk(&m, &cfg).unwrap();
        assert_eq!(d.len(), 51);
        for (i, o) in &d.pairs {
            assert!(i.len() <= 50);
            assert!(i.iter().all(|s| *s == Symbol(0)));
            assert_eq!(o.len(), i.len());
            assert!(o.iter().all(|s| *s == Symbol(9)));
        }
    }

    #[test]
    fn too_few_strings_exhausts() {
        let m = self_loop();
        let cfg = WalkConfig {
            target_pairs: 60,
            max_attempts: 5_000,
            ..WalkConfig::default()
        };
        match random_walk(&m, &cfg) {
            Err(Error::WalkExhausted { collected, target, attempts }) => {
                assert!(collected <= 51);
                assert_eq!(target, 60);
                assert_eq!(attempts, 5_000);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn defaults_produce_consistent_unique_pairs() {
        let m = generate(&GenConfig { seed: 11, ..GenConfig::default() }).unwrap();
        let cfg = WalkConfig { target_pairs: 2_000, seed: 3, ..WalkConfig::default() };
        let d = random_walk(&m, &cfg).unwrap();
        assert_eq!(d.len(), 2_000);
        d.verify(&m).unwrap();
        assert!(d.max_input_len() <= 50);
        assert_eq!(d, random_walk(&m, &cfg).unwrap());
        assert_eq!(d.machine_id, content_hash(&m));
    }

    #[test]
    fn walk_config_validation() {
        for bad in [
            WalkConfig { stop_probability: 0.0, ..WalkConfig::default() },
            WalkConfig { stop_probability: 1.5, ..WalkConfig::default() },
            WalkConfig { max_steps: 0, ..WalkConfig::default() },
            WalkConfig { target_pairs: 0, ..WalkConfig::default() },
        ] {
            assert!(random_walk(&self_loop(), &bad).is_err());
        }
        let c = WalkConfig { seed: 5, stop_probability: 0.25, ..WalkConfig::default() };
        assert_eq!(WalkConfig::from_kv(&c.to_kv()).unwrap(), c);
    }
}
