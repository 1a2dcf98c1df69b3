//! Trimming, onward normalization and canonical minimization.
//!
//! Minimization follows the classical route for subsequential transducers:
//! make the machine onward (every non-start state emits its output as early
//! as possible), merge states with identical behaviour by Moore partition
//! refinement, then renumber states breadth first with symbols visited in
//! ascending order. Two machines compute the same function iff their
//! minimized forms are identical.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::sfst::{Arc, Sfst, State, StateId};
use crate::symbol::{lcp_len, Symbol, TokenString};

/// Depth-first reachability from the start state.
pub fn accessible_states(m: &Sfst) -> Vec<bool> {
    let mut seen = vec![false; m.num_states()];
    let mut stack = vec![m.start()];
    seen[m.start()] = true;
    while let Some(q) = stack.pop() {
        for (_, arc) in m.arcs(q) {
            if !seen[arc.target] {
                seen[arc.target] = true;
                stack.push(arc.target);
            }
        }
    }
    seen
}

/// Depth-first search over reversed edges from the final states.
pub fn coaccessible_states(m: &Sfst) -> Vec<bool> {
    let n = m.num_states();
    let mut preds = vec![Vec::new(); n];
    for (q, _, arc) in m.transitions() {
        preds[arc.target].push(q);
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<StateId> = m.finals().map(|(q, _)| q).collect();
    for &q in &stack {
        seen[q] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

pub fn is_accessible(m: &Sfst) -> bool {
    accessible_states(m).into_iter().all(|b| b)
}

pub fn is_coaccessible(m: &Sfst) -> bool {
    coaccessible_states(m).into_iter().all(|b| b)
}

pub fn is_trim(m: &Sfst) -> bool {
    is_accessible(m) && is_coaccessible(m)
}

/// True iff the machine accepts no string at all.
pub fn is_empty_language(m: &Sfst) -> bool {
    !coaccessible_states(m)[m.start()]
}

/// Removes every state that is not both accessible and co-accessible.
///
/// When the start state itself is useless the function is nowhere defined and
/// the result is a single non-final state with no edges.
pub fn trim(m: &Sfst) -> Sfst {
    let acc = accessible_states(m);
    let coacc = coaccessible_states(m);
    let keep: Vec<bool> = acc.iter().zip(&coacc).map(|(a, c)| *a && *c).collect();
    let alphabets = (m.input_alphabet.clone(), m.output_alphabet.clone());
    if !keep[m.start()] {
        return Sfst {
            states: vec![State::default()],
            start: 0,
            input_alphabet: alphabets.0,
            output_alphabet: alphabets.1,
        };
    }
    let mut remap = vec![usize::MAX; m.num_states()];
    let mut next = 0;
    for q in 0..m.num_states() {
        if keep[q] {
            remap[q] = next;
            next += 1;
        }
    }
    let states = m
        .states
        .iter()
        .enumerate()
        .filter(|(q, _)| keep[*q])
        .map(|(_, s)| State {
            final_output: s.final_output.clone(),
            arcs: s
                .arcs
                .iter()
                .filter(|(_, a)| keep[a.target])
                .map(|(sym, a)| {
                    (
                        *sym,
                        Arc {
                            output: a.output.clone(),
                            target: remap[a.target],
                        },
                    )
                })
                .collect(),
        })
        .collect();
    Sfst {
        states,
        start: remap[m.start()],
        input_alphabet: alphabets.0,
        output_alphabet: alphabets.1,
    }
}

/// For every state, the longest common prefix of all outputs produced from it
/// on accepted suffixes (`None` for states that reach no final state).
///
/// Computed as the greatest fixpoint of
/// `P(q) = lcp({ω(q)} ∪ {o(q,a)·P(δ(q,a))})`, iterating down from "undefined".
/// Values only ever shrink, so the loop terminates.
pub fn output_prefixes(m: &Sfst) -> Vec<Option<TokenString>> {
    let n = m.num_states();
    let mut prefix: Vec<Option<TokenString>> = vec![None; n];
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..n {
            let state = &m.states[q];
            let mut acc: Option<TokenString> = state.final_output.clone();
            for arc in state.arcs.values() {
                let Some(p) = &prefix[arc.target] else {
                    continue;
                };
                acc = Some(match acc {
                    None => arc.output.concat(p),
                    Some(cur) => {
                        let k = lcp_len(&cur, &arc.output.concat(p));
                        TokenString::from(&cur[..k])
                    }
                });
            }
            if acc != prefix[q] {
                prefix[q] = acc;
                changed = true;
            }
        }
    }
    prefix
}

/// Onward normal form: every non-start state's outgoing outputs and final
/// output share no common prefix.
///
/// The prefix a state would emit unconditionally is hoisted onto its incoming
/// edges. When the start state has incoming edges and a non-empty prefix, it
/// is split: a fresh start keeps the unstripped outputs and the old start
/// becomes an ordinary state.
pub fn make_onward(m: &Sfst) -> Result<Sfst> {
    if !is_trim(m) {
        return Err(Error::NotTrim);
    }
    let prefix: Vec<TokenString> = output_prefixes(m)
        .into_iter()
        .map(|p| p.expect("trim machine: every state reaches a final state"))
        .collect();
    let start = m.start();
    let start_has_incoming = m.transitions().any(|(_, _, a)| a.target == start);
    let split_start = start_has_incoming && !prefix[start].is_empty();

    let strip = |q: StateId, is_new_start: bool, s: &TokenString| -> TokenString {
        let cut = if is_new_start { 0 } else { prefix[q].len() };
        debug_assert!(s.starts_with(&prefix[q][..cut]));
        TokenString::from(&s[cut..])
    };
    let rewrite = |q: StateId, is_new_start: bool| -> State {
        let s = &m.states[q];
        State {
            final_output: s
                .final_output
                .as_ref()
                .map(|w| strip(q, is_new_start, w)),
            arcs: s
                .arcs
                .iter()
                .map(|(sym, a)| {
                    let full = a.output.concat(&prefix[a.target]);
                    (
                        *sym,
                        Arc {
                            output: strip(q, is_new_start, &full),
                            target: a.target,
                        },
                    )
                })
                .collect(),
        }
    };

    let mut states: Vec<State> = (0..m.num_states())
        .map(|q| rewrite(q, q == start && !split_start))
        .collect();
    let new_start = if split_start {
        states.push(rewrite(start, true));
        states.len() - 1
    } else {
        start
    };
    Ok(Sfst {
        states,
        start: new_start,
        input_alphabet: m.input_alphabet.clone(),
        output_alphabet: m.output_alphabet.clone(),
    })
}

/// True iff every non-start state has λ as the longest common prefix of its
/// outgoing outputs and final output.
pub fn is_onward(m: &Sfst) -> bool {
    (0..m.num_states()).filter(|&q| q != m.start()).all(|q| {
        let s = &m.states[q];
        let mut strings = s
            .arcs
            .values()
            .map(|a| a.output.as_slice())
            .chain(s.final_output.as_deref());
        let Some(first) = strings.next() else {
            return true;
        };
        let mut len = first.len();
        for other in strings {
            len = len.min(lcp_len(first, other));
        }
        len == 0
    })
}

/// Moore-style partition refinement. Returns the block index of every state.
fn refine_partition(m: &Sfst) -> Vec<usize> {
    let n = m.num_states();
    let mut ids: HashMap<Option<&TokenString>, usize> = HashMap::new();
    let mut block: Vec<usize> = (0..n)
        .map(|q| {
            let next = ids.len();
            *ids.entry(m.states[q].final_output.as_ref()).or_insert(next)
        })
        .collect();
    let mut n_blocks = ids.len();
    loop {
        let mut sigs: HashMap<(usize, Vec<(Symbol, &TokenString, usize)>), usize> = HashMap::new();
        let next_block: Vec<usize> = (0..n)
            .map(|q| {
                let sig = (
                    block[q],
                    m.states[q]
                        .arcs
                        .iter()
                        .map(|(sym, a)| (*sym, &a.output, block[a.target]))
                        .collect(),
                );
                let next = sigs.len();
                *sigs.entry(sig).or_insert(next)
            })
            .collect();
        let stable = sigs.len() == n_blocks;
        block = next_block;
        n_blocks = sigs.len();
        if stable {
            return block;
        }
    }
}

fn quotient(m: &Sfst, block: &[usize]) -> Sfst {
    let n_blocks = block.iter().max().map_or(0, |b| b + 1);
    let mut states: Vec<Option<State>> = vec![None; n_blocks];
    for q in 0..m.num_states() {
        let b = block[q];
        if states[b].is_some() {
            continue;
        }
        let s = &m.states[q];
        states[b] = Some(State {
            final_output: s.final_output.clone(),
            arcs: s
                .arcs
                .iter()
                .map(|(sym, a)| {
                    (
                        *sym,
                        Arc {
                            output: a.output.clone(),
                            target: block[a.target],
                        },
                    )
                })
                .collect(),
        });
    }
    Sfst {
        states: states.into_iter().map(|s| s.expect("non-empty block")).collect(),
        start: block[m.start()],
        input_alphabet: m.input_alphabet.clone(),
        output_alphabet: m.output_alphabet.clone(),
    }
}

/// Renumbers states in breadth-first discovery order from the start, taking
/// edges in ascending symbol order. Unreachable states are dropped.
pub fn canonicalize(m: &Sfst) -> Sfst {
    let n = m.num_states();
    let mut order = vec![usize::MAX; n];
    let mut visit = Vec::with_capacity(n);
    let mut queue = VecDeque::from([m.start()]);
    order[m.start()] = 0;
    visit.push(m.start());
    while let Some(q) = queue.pop_front() {
        for (_, arc) in m.arcs(q) {
            if order[arc.target] == usize::MAX {
                order[arc.target] = visit.len();
                visit.push(arc.target);
                queue.push_back(arc.target);
            }
        }
    }
    let states = visit
        .iter()
        .map(|&q| {
            let s = &m.states[q];
            State {
                final_output: s.final_output.clone(),
                arcs: s
                    .arcs
                    .iter()
                    .map(|(sym, a)| {
                        (
                            *sym,
                            Arc {
                                output: a.output.clone(),
                                target: order[a.target],
                            },
                        )
                    })
                    .collect(),
            }
        })
        .collect();
    Sfst {
        states,
        start: 0,
        input_alphabet: m.input_alphabet.clone(),
        output_alphabet: m.output_alphabet.clone(),
    }
}

/// The canonical minimal onward machine computing the same function.
///
/// Requires a trim machine; see [`trim`].
pub fn minimize(m: &Sfst) -> Result<Sfst> {
    let onward = make_onward(m)?;
    let block = refine_partition(&onward);
    Ok(canonicalize(&quotient(&onward, &block)))
}

/// True iff both machines compute the same partial function.
///
/// Declared alphabets are ignored; only the transduction matters.
pub fn equivalent(a: &Sfst, b: &Sfst) -> bool {
    let (ta, tb) = (trim(a), trim(b));
    match (is_empty_language(&ta), is_empty_language(&tb)) {
        (true, true) => true,
        (false, false) => {
            let ma = minimize(&ta).expect("trimmed");
            let mb = minimize(&tb).expect("trimmed");
            ma.same_structure(&mb)
        }
        _ => false,
    }
}
