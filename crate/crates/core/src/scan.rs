//! SCAN fragments as transducers, and structural augmentations.
//!
//! The core block encodes a primitive command with an optional direction,
//! `around` or `opposite` modifier:
//!
//! ```text
//! 0 --jump--> 1 --right--> 2          ω(1) = JUMP
//!             1 --left---> 3          ω(2) = RTURN JUMP
//!             1 --around-> 4 --right--> 6   ω(6) = (RTURN JUMP) x4
//!                          4 --left---> 7
//!             1 --opposite-> 5 --right--> 8 ω(8) = RTURN RTURN JUMP
//!                            5 --left---> 9
//! ```
//!
//! All edges emit λ. Because SCAN reverses modifier order, the action sequence
//! is only known once the command ends, so it is produced by the final-output
//! function of the state the command ends in.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::minimize::is_trim;
use crate::sfst::{Sfst, StateId};
use crate::symbol::{Symbol, TokenString};

/// Bidirectional map between token ids and words.
///
/// Text form: one `token_id word` line per entry in ascending id order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    by_id: BTreeMap<u32, String>,
    by_word: HashMap<String, u32>,
}

pub const SCAN_PRIMITIVES: [&str; 4] = ["jump", "walk", "run", "look"];

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The SCAN vocabulary with fixed ids: command words 0-9, actions 10-15.
    pub fn scan() -> Self {
        let mut t = SymbolTable::new();
        for w in [
            "jump", "walk", "run", "look", "left", "right", "around", "opposite", "twice",
            "thrice", "JUMP", "WALK", "RUN", "LOOK", "LTURN", "RTURN",
        ] {
            t.intern(w);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    /// Id of `word`, assigning the next free id if it is new.
    pub fn intern(&mut self, word: &str) -> Symbol {
        if let Some(&id) = self.by_word.get(word) {
            return Symbol(id);
        }
        let id = self.by_id.keys().next_back().map_or(0, |k| k + 1);
        self.by_id.insert(id, word.to_string());
        self.by_word.insert(word.to_string(), id);
        Symbol(id)
    }

    pub fn insert(&mut self, id: u32, word: &str) -> Result<()> {
        if word.is_empty() || word.contains(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!("bad token word `{word}`")));
        }
        if self.by_id.contains_key(&id) || self.by_word.contains_key(word) {
            return Err(Error::InvalidArgument(format!(
                "duplicate symbol table entry `{id} {word}`"
            )));
        }
        self.by_id.insert(id, word.to_string());
        self.by_word.insert(word.to_string(), id);
        Ok(())
    }

    pub fn symbol(&self, word: &str) -> Option<Symbol> {
        self.by_word.get(word).map(|&id| Symbol(id))
    }

    pub fn word(&self, s: Symbol) -> Option<&str> {
        self.by_id.get(&s.0).map(String::as_str)
    }

    /// Encodes whitespace separated words.
    pub fn encode(&self, text: &str) -> Result<TokenString> {
        text.split_whitespace()
            .map(|w| {
                self.symbol(w)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown word `{w}`")))
            })
            .collect()
    }

    pub fn decode(&self, s: &[Symbol]) -> String {
        s.iter()
            .map(|&sym| self.word(sym).map_or_else(|| sym.to_string(), str::to_string))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, w) in &self.by_id {
            let _ = writeln!(out, "{id} {w}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = SymbolTable::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [id, word] = fields[..] else {
                return Err(Error::parse(line_no, "expected `token_id word`"));
            };
            let id = id
                .parse::<u32>()
                .map_err(|_| Error::parse(line_no, format!("`{id}` is not a token id")))?;
            t.insert(id, word)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        Ok(t)
    }
}

/// A SCAN machine together with the vocabulary its ids come from.
#[derive(Debug, Clone)]
pub struct ScanBlock {
    pub machine: Sfst,
    pub symbols: SymbolTable,
}

impl ScanBlock {
    pub fn transduce_words(&self, command: &str) -> Result<Option<String>> {
        let input = self.symbols.encode(command)?;
        Ok(self
            .machine
            .transduce(&input)?
            .map(|out| self.symbols.decode(&out)))
    }

    /// Adds `twice` and `thrice` after every complete command.
    pub fn with_repetition(&self) -> Result<ScanBlock> {
        let twice = self.symbols.symbol("twice").expect("scan vocabulary");
        let thrice = self.symbols.symbol("thrice").expect("scan vocabulary");
        Ok(ScanBlock {
            machine: augment_with_repetition(&self.machine, &[(twice, 2), (thrice, 3)])?,
            symbols: self.symbols.clone(),
        })
    }
}

fn action_word(primitive: &str) -> Result<String> {
    if SCAN_PRIMITIVES.contains(&primitive) {
        Ok(primitive.to_uppercase())
    } else {
        Err(Error::InvalidArgument(format!(
            "unknown primitive `{primitive}` (expected one of {SCAN_PRIMITIVES:?})"
        )))
    }
}

/// Adds the nine states of one primitive's block below `root`.
fn add_block(
    b: &mut crate::sfst::SfstBuilder,
    root: StateId,
    primitive: &str,
    t: &SymbolTable,
) -> Result<()> {
    let sym = |w: &str| t.symbol(w).expect("scan vocabulary");
    let action = sym(&action_word(primitive)?);
    let (l, r) = (sym("LTURN"), sym("RTURN"));
    let lambda = TokenString::empty;

    let cmd = b.add_state();
    b.add_transition(root, sym(primitive), lambda(), cmd)?;
    b.set_final(cmd, vec![action])?;

    let mut leaf = |from: StateId, word: &str, out: Vec<Symbol>| -> Result<StateId> {
        let q = b.add_state();
        b.add_transition(from, sym(word), lambda(), q)?;
        if !out.is_empty() {
            b.set_final(q, out)?;
        }
        Ok(q)
    };
    leaf(cmd, "right", vec![r, action])?;
    leaf(cmd, "left", vec![l, action])?;
    let around = leaf(cmd, "around", vec![])?;
    let opposite = leaf(cmd, "opposite", vec![])?;
    leaf(around, "right", [r, action].repeat(4))?;
    leaf(around, "left", [l, action].repeat(4))?;
    leaf(opposite, "right", vec![r, r, action])?;
    leaf(opposite, "left", vec![l, l, action])?;
    Ok(())
}

/// The core block for one primitive (`jump`, `walk`, `run` or `look`).
pub fn build_scan_block(primitive: &str) -> Result<ScanBlock> {
    build_scan_fragment(&[primitive])
}

/// Several core blocks sharing one start state, one block per primitive.
pub fn build_scan_fragment(primitives: &[&str]) -> Result<ScanBlock> {
    let distinct: BTreeSet<&&str> = primitives.iter().collect();
    if primitives.is_empty() || distinct.len() != primitives.len() {
        return Err(Error::InvalidArgument(
            "need a non-empty list of distinct primitives".into(),
        ));
    }
    let symbols = SymbolTable::scan();
    let mut b = Sfst::builder(1);
    for p in primitives {
        add_block(&mut b, 0, p, &symbols)?;
    }
    Ok(ScanBlock {
        machine: b.build()?,
        symbols,
    })
}

/// Adds, for every final state `q` with ω(q) = v and every `(symbol, n)`, an
/// edge `q --symbol/λ--> q'` into a fresh final state with ω(q') = vⁿ.
pub fn augment_with_repetition(m: &Sfst, reps: &[(Symbol, usize)]) -> Result<Sfst> {
    if !is_trim(m) {
        return Err(Error::NotTrim);
    }
    let mut seen = BTreeSet::new();
    for &(sym, n) in reps {
        if m.input_alphabet().contains(&sym) || !seen.insert(sym) {
            return Err(Error::InvalidArgument(format!(
                "repetition symbol {sym} is not fresh"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("repetition count must be positive".into()));
        }
    }
    let mut b = builder_from(m);
    let finals: Vec<(StateId, TokenString)> = m.finals().map(|(q, w)| (q, w.clone())).collect();
    for (q, w) in finals {
        for &(sym, n) in reps {
            let fresh = b.add_state();
            b.add_transition(q, sym, TokenString::empty(), fresh)?;
            b.set_final(fresh, w.repeat(n))?;
        }
    }
    b.build()
}

/// A fresh start state branching on `entry_symbols[i]` into the i-th of
/// `copies` isomorphic copies of `m`. Copy `i` occupies states
/// `1 + i·|Q| .. 1 + (i+1)·|Q|`.
pub fn replicate_subgraph(m: &Sfst, copies: usize, entry_symbols: &[Symbol]) -> Result<Sfst> {
    if copies == 0 {
        return Err(Error::InvalidArgument("need at least one copy".into()));
    }
    let distinct: BTreeSet<&Symbol> = entry_symbols.iter().collect();
    if entry_symbols.len() < copies
        || distinct.len() != entry_symbols.len()
        || entry_symbols.iter().any(|s| m.input_alphabet().contains(s))
    {
        return Err(Error::InvalidArgument(format!(
            "need {copies} distinct entry symbols outside the input alphabet"
        )));
    }
    let n = m.num_states();
    let mut b = Sfst::builder(1 + copies * n)
        .input_alphabet(m.input_alphabet().iter().copied())
        .output_alphabet(m.output_alphabet().iter().copied());
    for (i, &entry) in entry_symbols.iter().take(copies).enumerate() {
        let base = 1 + i * n;
        b.add_transition(0, entry, TokenString::empty(), base + m.start())?;
        for (q, w) in m.finals() {
            b.set_final(base + q, w.clone())?;
        }
        for (q, sym, arc) in m.transitions() {
            b.add_transition(base + q, sym, arc.output.clone(), base + arc.target)?;
        }
    }
    b.build()
}

fn builder_from(m: &Sfst) -> crate::sfst::SfstBuilder {
    let mut b = Sfst::builder(m.num_states())
        .start(m.start())
        .input_alphabet(m.input_alphabet().iter().copied())
        .output_alphabet(m.output_alphabet().iter().copied());
    for (q, w) in m.finals() {
        b.set_final(q, w.clone()).expect("state in range");
    }
    for (q, sym, arc) in m.transitions() {
        b.add_transition(q, sym, arc.output.clone(), arc.target)
            .expect("copied from a valid machine");
    }
    b
}
