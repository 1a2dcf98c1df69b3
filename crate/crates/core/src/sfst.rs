//! Subsequential finite-state transducers.
//!
//! A machine is a tuple of states, a start state, a partial final-output
//! function and an input-deterministic transition function carrying an output
//! string on every edge. Input determinism is structural: each state stores
//! its outgoing edges in a map keyed by input symbol.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::symbol::{Symbol, TokenString};

pub type StateId = usize;

/// An outgoing edge: emitted string and target state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub output: TokenString,
    pub target: StateId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub(crate) struct State {
    pub(crate) final_output: Option<TokenString>,
    pub(crate) arcs: BTreeMap<Symbol, Arc>,
}

/// An immutable subsequential finite-state transducer with dense state ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sfst {
    pub(crate) states: Vec<State>,
    pub(crate) start: StateId,
    pub(crate) input_alphabet: BTreeSet<Symbol>,
    pub(crate) output_alphabet: BTreeSet<Symbol>,
}

impl Sfst {
    pub fn builder(n_states: usize) -> SfstBuilder {
        SfstBuilder::new(n_states)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.states.iter().map(|s| s.arcs.len()).sum()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.states[q].final_output.is_some()
    }

    /// ω(q), or `None` if `q` is not final.
    pub fn final_output(&self, q: StateId) -> Option<&TokenString> {
        self.states[q].final_output.as_ref()
    }

    pub fn finals(&self) -> impl Iterator<Item = (StateId, &TokenString)> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter_map(|(q, s)| s.final_output.as_ref().map(|w| (q, w)))
    }

    pub fn arc(&self, q: StateId, symbol: Symbol) -> Option<&Arc> {
        self.states[q].arcs.get(&symbol)
    }

    /// Outgoing edges of `q` in ascending symbol order.
    pub fn arcs(&self, q: StateId) -> impl Iterator<Item = (Symbol, &Arc)> + '_ {
        self.states[q].arcs.iter().map(|(s, a)| (*s, a))
    }

    /// All transitions as `(source, symbol, arc)` in (source, symbol) order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, &Arc)> + '_ {
        self.states
            .iter()
            .enumerate()
            .flat_map(|(q, s)| s.arcs.iter().map(move |(sym, a)| (q, *sym, a)))
    }

    pub fn input_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.output_alphabet
    }

    fn check_alphabet(&self, input: &[Symbol]) -> Result<()> {
        match input.iter().find(|s| !self.input_alphabet.contains(s)) {
            Some(&symbol) => Err(Error::Alphabet { symbol }),
            None => Ok(()),
        }
    }

    /// δ* and o* from an arbitrary state. `None` if an edge is missing.
    pub fn run_from(
        &self,
        from: StateId,
        input: &[Symbol],
    ) -> Result<Option<(StateId, TokenString)>> {
        self.check_alphabet(input)?;
        let mut q = from;
        let mut out = TokenString::empty();
        for sym in input {
            match self.states[q].arcs.get(sym) {
                Some(arc) => {
                    out.extend_from(&arc.output);
                    q = arc.target;
                }
                None => return Ok(None),
            }
        }
        Ok(Some((q, out)))
    }

    /// The state reached from the start on `input` together with the
    /// accumulated edge output, without the final output.
    pub fn run_to_state(&self, input: &[Symbol]) -> Result<Option<(StateId, TokenString)>> {
        self.run_from(self.start, input)
    }

    /// The transduction: edge outputs followed by ω of the reached state.
    ///
    /// `Ok(None)` means the function is undefined on `input`; an input symbol
    /// outside Σ is an error.
    pub fn transduce(&self, input: &[Symbol]) -> Result<Option<TokenString>> {
        Ok(self.run_to_state(input)?.and_then(|(q, mut out)| {
            let w = self.states[q].final_output.as_ref()?;
            out.extend_from(w);
            Some(out)
        }))
    }

    /// Checks `o*(q0, xy) = o*(q0, x) ∘ o*(δ*(q0, x), y)` for `input = xy`
    /// split at `split`.
    pub fn check_path_homomorphism(&self, input: &[Symbol], split: usize) -> Result<bool> {
        if split > input.len() {
            return Err(Error::InvalidArgument(format!(
                "split {split} exceeds input length {}",
                input.len()
            )));
        }
        let undefined = || Error::UndefinedPath {
            input: input.into(),
        };
        let (_, whole) = self.run_to_state(input)?.ok_or_else(undefined)?;
        let (mid, left) = self.run_to_state(&input[..split])?.ok_or_else(undefined)?;
        let (_, right) = self.run_from(mid, &input[split..])?.ok_or_else(undefined)?;
        Ok(whole == left.concat(&right))
    }

    /// Returns a copy with state `q` renamed to `perm[q]`.
    pub fn permute_states(&self, perm: &[StateId]) -> Result<Sfst> {
        let n = self.num_states();
        if perm.len() != n || perm.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidArgument("not a permutation of the states".into()));
        }
        if let Some(&bad) = perm.iter().find(|&&p| p >= n) {
            return Err(Error::StateOutOfRange {
                state: bad,
                n_states: n,
            });
        }
        let mut states = vec![State::default(); n];
        for (q, s) in self.states.iter().enumerate() {
            let new = &mut states[perm[q]];
            new.final_output = s.final_output.clone();
            new.arcs = s
                .arcs
                .iter()
                .map(|(sym, a)| {
                    (
                        *sym,
                        Arc {
                            output: a.output.clone(),
                            target: perm[a.target],
                        },
                    )
                })
                .collect();
        }
        Ok(Sfst {
            states,
            start: perm[self.start],
            input_alphabet: self.input_alphabet.clone(),
            output_alphabet: self.output_alphabet.clone(),
        })
    }

    /// Structural equality ignoring the declared alphabets.
    pub fn same_structure(&self, other: &Sfst) -> bool {
        self.start == other.start && self.states == other.states
    }
}

/// Incremental constructor for [`Sfst`]. Alphabets grow to include every
/// symbol used; extra symbols may be declared up front.
#[derive(Debug, Clone)]
pub struct SfstBuilder {
    states: Vec<State>,
    start: StateId,
    input_alphabet: BTreeSet<Symbol>,
    output_alphabet: BTreeSet<Symbol>,
}

impl SfstBuilder {
    pub fn new(n_states: usize) -> Self {
        SfstBuilder {
            states: vec![State::default(); n_states],
            start: 0,
            input_alphabet: BTreeSet::new(),
            output_alphabet: BTreeSet::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Appends a fresh state and returns its id.
    pub fn add_state(&mut self) -> StateId {
        self.states.push(State::default());
        self.states.len() - 1
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q < self.states.len() {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                state: q,
                n_states: self.states.len(),
            })
        }
    }

    pub fn start(mut self, q: StateId) -> Self {
        self.start = q;
        self
    }

    pub fn set_start(&mut self, q: StateId) {
        self.start = q;
    }

    pub fn input_alphabet(mut self, symbols: impl IntoIterator<Item = Symbol>) -> Self {
        self.input_alphabet.extend(symbols);
        self
    }

    pub fn output_alphabet(mut self, symbols: impl IntoIterator<Item = Symbol>) -> Self {
        self.output_alphabet.extend(symbols);
        self
    }

    pub fn declare_inputs(&mut self, symbols: impl IntoIterator<Item = Symbol>) {
        self.input_alphabet.extend(symbols);
    }

    pub fn declare_outputs(&mut self, symbols: impl IntoIterator<Item = Symbol>) {
        self.output_alphabet.extend(symbols);
    }

    /// Makes `q` final with ω(q) = `output`, replacing any previous value.
    pub fn set_final(&mut self, q: StateId, output: impl Into<TokenString>) -> Result<()> {
        self.check_state(q)?;
        let output = output.into();
        self.output_alphabet.extend(output.iter().copied());
        self.states[q].final_output = Some(output);
        Ok(())
    }

    pub fn add_transition(
        &mut self,
        src: StateId,
        symbol: Symbol,
        output: impl Into<TokenString>,
        dst: StateId,
    ) -> Result<()> {
        self.check_state(src)?;
        self.check_state(dst)?;
        let output = output.into();
        let arcs = &mut self.states[src].arcs;
        if arcs.contains_key(&symbol) {
            return Err(Error::DuplicateTransition { state: src, symbol });
        }
        self.input_alphabet.insert(symbol);
        self.output_alphabet.extend(output.iter().copied());
        arcs.insert(
            symbol,
            Arc {
                output,
                target: dst,
            },
        );
        Ok(())
    }

    pub fn build(self) -> Result<Sfst> {
        if self.states.is_empty() {
            return Err(Error::InvalidArgument("a machine needs at least one state".into()));
        }
        self.check_state(self.start)?;
        Ok(Sfst {
            states: self.states,
            start: self.start,
            input_alphabet: self.input_alphabet,
            output_alphabet: self.output_alphabet,
        })
    }
}
