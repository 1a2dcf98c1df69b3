//! Uniform sampling of random subsequential transducers.
//!
//! For each input symbol σ an N×N 0/1 matrix is drawn in which every row has
//! at most one non-zero entry, uniformly over all such matrices: each row is
//! independently either the zero row or one of the N unit vectors. Entry
//! (i, j) of the matrix for σ is the edge `q_i --σ--> q_j`. Every edge then
//! gets an output symbol drawn uniformly from Γ (optionally extended by λ).
//! Samples that are not accessible and co-accessible are rejected, and the
//! survivor is minimized into canonical form.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::minimize::{is_accessible, is_coaccessible, minimize};
use crate::rng::{rng_for, stream, Rng, RNG_ALGORITHM};
use crate::sfst::{Sfst, StateId};
use crate::symbol::{Symbol, TokenString};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n_states: usize,
    pub input_alphabet_size: usize,
    pub output_alphabet_size: usize,
    /// Adds λ as one extra equiprobable edge output.
    pub allow_empty_emission: bool,
    pub seed: u64,
    pub max_rejections: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_states: 10,
            input_alphabet_size: 10,
            output_alphabet_size: 30,
            allow_empty_emission: false,
            seed: 0,
            max_rejections: 1000,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(format!("{what} must be at least 1")));
        if self.n_states == 0 {
            return bad("n_states");
        }
        if self.input_alphabet_size == 0 {
            return bad("input_alphabet_size");
        }
        if self.output_alphabet_size == 0 {
            return bad("output_alphabet_size");
        }
        if self.max_rejections == 0 {
            return bad("max_rejections");
        }
        Ok(())
    }

    /// `key=value` form, embedded in machine file headers.
    pub fn to_kv(&self) -> Vec<(String, String)> {
        vec![
            ("n_states".into(), self.n_states.to_string()),
            ("input_alphabet_size".into(), self.input_alphabet_size.to_string()),
            ("output_alphabet_size".into(), self.output_alphabet_size.to_string()),
            ("allow_empty_emission".into(), self.allow_empty_emission.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("max_rejections".into(), self.max_rejections.to_string()),
            ("rng".into(), RNG_ALGORITHM.into()),
        ]
    }

    /// Reads back [`GenConfig::to_kv`]. Missing keys keep their defaults.
    pub fn from_kv(kv: &[(String, String)]) -> Result<Self> {
        let mut cfg = GenConfig::default();
        for (k, v) in kv {
            let bad = || Error::InvalidConfig(format!("bad value `{v}` for `{k}`"));
            match k.as_str() {
                "n_states" => cfg.n_states = v.parse().map_err(|_| bad())?,
                "input_alphabet_size" => cfg.input_alphabet_size = v.parse().map_err(|_| bad())?,
                "output_alphabet_size" => cfg.output_alphabet_size = v.parse().map_err(|_| bad())?,
                "allow_empty_emission" => cfg.allow_empty_emission = v.parse().map_err(|_| bad())?,
                "seed" => cfg.seed = v.parse().map_err(|_| bad())?,
                "max_rejections" => cfg.max_rejections = v.parse().map_err(|_| bad())?,
                _ => {}
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One boolean matrix per input symbol, stored row-wise as the column of the
/// single non-zero entry (if any). The at-most-one-entry-per-row constraint is
/// therefore structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrixSet {
    n_states: usize,
    // rows[σ][i] = Some(j) iff b^(σ)_ij = 1
    rows: Vec<Vec<Option<StateId>>>,
}

impl TransitionMatrixSet {
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_symbols(&self) -> usize {
        self.rows.len()
    }

    /// Column of the non-zero entry in row `i` of the matrix for `sigma`.
    pub fn target(&self, sigma: usize, i: StateId) -> Option<StateId> {
        self.rows[sigma][i]
    }

    pub fn entry(&self, sigma: usize, i: StateId, j: StateId) -> bool {
        self.rows[sigma][i] == Some(j)
    }

    pub fn dense(&self, sigma: usize) -> Vec<Vec<u8>> {
        (0..self.n_states)
            .map(|i| {
                (0..self.n_states)
                    .map(|j| u8::from(self.entry(sigma, i, j)))
                    .collect()
            })
            .collect()
    }
}

/// Draws the matrices. Rows are sampled symbol-major, then by state.
pub fn sample_matrices(cfg: &GenConfig, rng: &mut Rng) -> TransitionMatrixSet {
    let n = cfg.n_states;
    let rows = (0..cfg.input_alphabet_size)
        .map(|_| {
            (0..n)
                .map(|_| {
                    // n + 1 equiprobable rows: e_0 .. e_{n-1}, then the zero row
                    let k = rng.gen_range(0..=n);
                    (k < n).then_some(k)
                })
                .collect()
        })
        .collect();
    TransitionMatrixSet { n_states: n, rows }
}

/// Turns the matrices into a machine with uniformly drawn edge outputs.
///
/// Start state is 0 and every state is final with ω = λ. Outputs are drawn in
/// (state, symbol) order.
pub fn attach_outputs(t: &TransitionMatrixSet, cfg: &GenConfig, rng: &mut Rng) -> Sfst {
    let gamma = cfg.output_alphabet_size as u32;
    let outcomes = gamma + u32::from(cfg.allow_empty_emission);
    let mut b = Sfst::builder(t.n_states())
        .input_alphabet((0..t.n_symbols() as u32).map(Symbol))
        .output_alphabet((0..gamma).map(Symbol));
    for i in 0..t.n_states() {
        for sigma in 0..t.n_symbols() {
            let Some(j) = t.target(sigma, i) else {
                continue;
            };
            let k = rng.gen_range(0..outcomes);
            let out = if k == gamma {
                TokenString::empty()
            } else {
                TokenString::from(vec![Symbol(k)])
            };
            b.add_transition(i, Symbol(sigma as u32), out, j)
                .expect("one edge per matrix row");
        }
        b.set_final(i, TokenString::empty()).expect("state in range");
    }
    b.build().expect("at least one state")
}

/// Rejection-samples an accessible, co-accessible machine and returns its
/// canonical minimal form. Draws from the generation stream of `cfg.seed`.
pub fn generate(cfg: &GenConfig) -> Result<Sfst> {
    let mut rng = rng_for(cfg.seed, stream::GENERATE);
    generate_with_rng(cfg, &mut rng)
}

pub fn generate_with_rng(cfg: &GenConfig, rng: &mut Rng) -> Result<Sfst> {
    sample_trim_with_rng(cfg, rng).and_then(|m| minimize(&m))
}

/// Like [`generate_with_rng`] but without the final minimization.
pub fn sample_trim_with_rng(cfg: &GenConfig, rng: &mut Rng) -> Result<Sfst> {
    cfg.validate()?;
    for _ in 0..cfg.max_rejections {
        let t = sample_matrices(cfg, rng);
        let m = attach_outputs(&t, cfg, rng);
        if is_accessible(&m) && is_coaccessible(&m) {
            return Ok(m);
        }
    }
    Err(Error::GenerationExhausted {
        attempts: cfg.max_rejections,
    })
}
