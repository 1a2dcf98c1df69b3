//! OSTIA, the onward subsequential transducer inference algorithm.
//!
//! The learner builds a prefix-tree transducer from the training pairs, makes
//! it onward, and then walks the frontier of "blue" states (children of
//! consolidated "red" states) in prefix order. Each blue state is folded into
//! the first red state it is compatible with; otherwise it is promoted to red.
//! A fold merges the blue subtree into the red state recursively, pushing
//! output suffixes down into unshared tree nodes when edge outputs disagree.
//! Failed folds are rolled back from a per-attempt copy of every touched node.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::sfst::{Arc, Sfst, StateId};
use crate::symbol::{lcp_len, longest_common_prefix, Symbol, TokenString};

/// What a prefix-tree node without a final output means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FinalityPolicy {
    /// The node's string is outside the domain; a fold may not change
    /// finality in either direction.
    #[default]
    Strict,
    /// The node's output is unknown; a fold may give it the other side's
    /// final output (the textbook reading for total functions).
    Classic,
}

#[derive(Debug, Clone, Default)]
pub struct OstiaConfig {
    pub finality: FinalityPolicy,
    /// Optional domain automaton (edge outputs ignored). When given, only
    /// states reached through the same domain state may merge, so the learned
    /// domain stays inside the automaton's.
    pub domain: Option<Sfst>,
}

/// Work counters of one inference run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OstiaStats {
    pub ptt_states: usize,
    pub learned_states: usize,
    pub merge_attempts: usize,
    pub merges: usize,
    pub promotions: usize,
    pub folds: usize,
    pub comparisons: usize,
    pub elapsed: Duration,
}

impl OstiaStats {
    pub fn to_kv(&self) -> Vec<(String, String)> {
        vec![
            ("ptt_states".into(), self.ptt_states.to_string()),
            ("learned_states".into(), self.learned_states.to_string()),
            ("merge_attempts".into(), self.merge_attempts.to_string()),
            ("merges".into(), self.merges.to_string()),
            ("promotions".into(), self.promotions.to_string()),
            ("folds".into(), self.folds.to_string()),
            ("comparisons".into(), self.comparisons.to_string()),
            ("wall_time_secs".into(), format!("{:.6}", self.elapsed.as_secs_f64())),
        ]
    }
}

#[derive(Debug, Clone)]
struct Node {
    parent: Option<(StateId, Symbol)>,
    final_output: Option<TokenString>,
    arcs: BTreeMap<Symbol, Arc>,
}

/// Prefix-tree transducer and the working hypothesis of OSTIA.
///
/// Node ids follow the length-lexicographic order of the access strings they
/// were created for; the root is 0.
#[derive(Debug, Clone)]
pub struct Ptt {
    nodes: Vec<Node>,
    red: BTreeSet<StateId>,
    is_red: Vec<bool>,
}

impl Ptt {
    pub fn num_states(&self) -> usize {
        self.nodes.len()
    }

    pub fn final_output(&self, q: StateId) -> Option<&TokenString> {
        self.nodes[q].final_output.as_ref()
    }

    pub fn arc(&self, q: StateId, symbol: Symbol) -> Option<&Arc> {
        self.nodes[q].arcs.get(&symbol)
    }

    /// The prefix-tree string leading to `q`.
    pub fn access(&self, q: StateId) -> TokenString {
        let mut rev = Vec::new();
        let mut cur = q;
        while let Some((p, sym)) = self.nodes[cur].parent {
            rev.push(sym);
            cur = p;
        }
        rev.reverse();
        TokenString::from(rev)
    }

    /// Node for the string `w`, following edges from the root.
    pub fn node_for(&self, w: &[Symbol]) -> Option<StateId> {
        w.iter()
            .try_fold(0, |q, sym| self.nodes[q].arcs.get(sym).map(|a| a.target))
    }

    pub fn red(&self) -> impl Iterator<Item = StateId> + '_ {
        self.red.iter().copied()
    }

    /// Non-red targets of edges leaving red states, in id order.
    pub fn blue(&self) -> BTreeSet<StateId> {
        self.red
            .iter()
            .flat_map(|&r| self.nodes[r].arcs.values().map(|a| a.target))
            .filter(|&t| !self.is_red[t])
            .collect()
    }

    /// True iff every non-root state has λ as the longest common prefix of
    /// its outgoing outputs and final output.
    pub fn is_onward(&self) -> bool {
        self.nodes.iter().skip(1).all(|n| {
            let strings = n
                .arcs
                .values()
                .map(|a| a.output.as_slice())
                .chain(n.final_output.as_deref());
            longest_common_prefix(strings).map_or(true, |p| p.is_empty())
        })
    }

    /// The machine formed by the states reachable from the root, numbered
    /// breadth first.
    pub fn to_sfst(&self) -> Sfst {
        let mut order: HashMap<StateId, StateId> = HashMap::from([(0, 0)]);
        let mut visit = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(q) = queue.pop_front() {
            for a in self.nodes[q].arcs.values() {
                if !order.contains_key(&a.target) {
                    order.insert(a.target, visit.len());
                    visit.push(a.target);
                    queue.push_back(a.target);
                }
            }
        }
        let mut b = Sfst::builder(visit.len());
        for (new, &old) in visit.iter().enumerate() {
            let node = &self.nodes[old];
            if let Some(w) = &node.final_output {
                b.set_final(new, w.clone()).expect("state in range");
            }
            for (sym, a) in &node.arcs {
                b.add_transition(new, *sym, a.output.clone(), order[&a.target])
                    .expect("deterministic node");
            }
        }
        b.build().expect("root exists")
    }
}

/// One state per distinct input prefix; the state of each full input carries
/// the whole output as its final output, and every edge emits λ.
pub fn build_ptt(pairs: &[(TokenString, TokenString)]) -> Result<Ptt> {
    // trie in insertion order, renumbered breadth first below
    let mut children: Vec<BTreeMap<Symbol, usize>> = vec![BTreeMap::new()];
    let mut finals: Vec<Option<TokenString>> = vec![None];
    for (input, output) in pairs {
        let mut q = 0;
        for &sym in input.iter() {
            let next = children.len();
            q = *children[q].entry(sym).or_insert(next);
            if q == next {
                children.push(BTreeMap::new());
                finals.push(None);
            }
        }
        match &finals[q] {
            Some(prev) if prev != output => {
                return Err(Error::InconsistentSample {
                    input: input.clone(),
                })
            }
            _ => finals[q] = Some(output.clone()),
        }
    }

    let mut order = vec![usize::MAX; children.len()];
    let mut visit = vec![0];
    order[0] = 0;
    let mut i = 0;
    while i < visit.len() {
        for &c in children[visit[i]].values() {
            order[c] = visit.len();
            visit.push(c);
        }
        i += 1;
    }
    let mut nodes: Vec<Node> = visit
        .iter()
        .map(|&old| Node {
            parent: None,
            final_output: finals[old].take(),
            arcs: children[old]
                .iter()
                .map(|(sym, &c)| {
                    (
                        *sym,
                        Arc {
                            output: TokenString::empty(),
                            target: order[c],
                        },
                    )
                })
                .collect(),
        })
        .collect();
    for q in 0..nodes.len() {
        let kids: Vec<(Symbol, StateId)> =
            nodes[q].arcs.iter().map(|(s, a)| (*s, a.target)).collect();
        for (sym, c) in kids {
            nodes[c].parent = Some((q, sym));
        }
    }
    let n = nodes.len();
    Ok(Ptt {
        nodes,
        red: BTreeSet::new(),
        is_red: vec![false; n],
    })
}

/// Hoists, bottom up, the longest common prefix of each non-root node's
/// outgoing outputs and final output onto its incoming edge.
pub fn make_onward(mut t: Ptt) -> Ptt {
    // children have larger ids than their parents
    for q in (1..t.nodes.len()).rev() {
        let node = &t.nodes[q];
        let prefix = longest_common_prefix(
            node.arcs
                .values()
                .map(|a| a.output.as_slice())
                .chain(node.final_output.as_deref()),
        )
        .unwrap_or_default();
        if prefix.is_empty() {
            continue;
        }
        let k = prefix.len();
        let node = &mut t.nodes[q];
        for a in node.arcs.values_mut() {
            a.output = TokenString::from(&a.output[k..]);
        }
        if let Some(w) = node.final_output.as_mut() {
            *w = TokenString::from(&w[k..]);
        }
        let (p, sym) = node.parent.expect("non-root node has a parent");
        let arc = t.nodes[p].arcs.get_mut(&sym).expect("tree edge");
        arc.output.extend_from(&prefix);
    }
    t
}

struct Fold<'a> {
    t: &'a mut Ptt,
    policy: FinalityPolicy,
    saved: Vec<(StateId, Node)>,
    touched: Vec<bool>,
    labels: Option<&'a [StateId]>,
    stats: &'a mut OstiaStats,
}

struct Conflict;

impl Fold<'_> {
    fn node_mut(&mut self, q: StateId) -> &mut Node {
        if !self.touched[q] {
            self.touched[q] = true;
            self.saved.push((q, self.t.nodes[q].clone()));
        }
        &mut self.t.nodes[q]
    }

    fn rollback(&mut self) {
        for (q, node) in self.saved.drain(..).rev() {
            self.t.nodes[q] = node;
            self.touched[q] = false;
        }
    }

    fn commit(&mut self) {
        for (q, _) in self.saved.drain(..) {
            self.touched[q] = false;
        }
    }

    fn push_front(&mut self, q: StateId, prefix: &[Symbol]) {
        let node = self.node_mut(q);
        for a in node.arcs.values_mut() {
            a.output.prepend(prefix);
        }
        if let Some(w) = node.final_output.as_mut() {
            w.prepend(prefix);
        }
    }

    /// Redirects the edge into blue state `b` to red state `r`, then folds.
    fn merge(&mut self, r: StateId, b: StateId) -> Result<(), Conflict> {
        let (p, sym) = self.t.nodes[b].parent.expect("blue state has a parent");
        self.node_mut(p)
            .arcs
            .get_mut(&sym)
            .expect("tree edge")
            .target = r;
        self.fold(r, b)
    }

    fn fold(&mut self, x: StateId, y: StateId) -> Result<(), Conflict> {
        debug_assert_ne!(x, y);
        self.stats.folds += 1;
        if self.labels.is_some_and(|l| l[x] != l[y]) {
            return Err(Conflict);
        }
        let strict = self.policy == FinalityPolicy::Strict;
        let x_final = self.t.nodes[x].final_output.is_some();
        match self.t.nodes[y].final_output.clone() {
            Some(w) if x_final => {
                if self.t.nodes[x].final_output.as_ref() != Some(&w) {
                    return Err(Conflict);
                }
            }
            Some(_) if strict => return Err(Conflict),
            Some(w) => self.node_mut(x).final_output = Some(w),
            None if strict && x_final => return Err(Conflict),
            None => {}
        }
        let y_arcs: Vec<(Symbol, Arc)> = self.t.nodes[y]
            .arcs
            .iter()
            .map(|(s, a)| (*s, a.clone()))
            .collect();
        for (sym, ya) in y_arcs {
            let Some(xa) = self.t.nodes[x].arcs.get(&sym).cloned() else {
                self.node_mut(x).arcs.insert(sym, ya.clone());
                self.node_mut(ya.target).parent = Some((x, sym));
                continue;
            };
            self.stats.comparisons += 1;
            if xa.output != ya.output {
                let k = lcp_len(&xa.output, &ya.output);
                if k < xa.output.len() {
                    // only an unshared tree node may absorb a suffix
                    if self.t.is_red[xa.target] {
                        return Err(Conflict);
                    }
                    self.push_front(xa.target, &xa.output[k..]);
                    self.node_mut(x).arcs.get_mut(&sym).expect("present").output =
                        TokenString::from(&xa.output[..k]);
                }
                if k < ya.output.len() {
                    self.push_front(ya.target, &ya.output[k..]);
                }
            }
            self.fold(xa.target, ya.target)?;
        }
        Ok(())
    }
}

/// Learns an onward subsequential transducer consistent with `pairs`.
pub fn ostia_infer(pairs: &[(TokenString, TokenString)]) -> Result<Sfst> {
    ostia_infer_with(pairs, &OstiaConfig::default()).map(|(m, _)| m)
}

pub fn ostia_infer_with(
    pairs: &[(TokenString, TokenString)],
    cfg: &OstiaConfig,
) -> Result<(Sfst, OstiaStats)> {
    let started = Instant::now();
    let mut t = make_onward(build_ptt(pairs)?);
    let labels = cfg.domain.as_ref().map(|d| domain_labels(&t, d)).transpose()?;
    let mut stats = OstiaStats {
        ptt_states: t.num_states(),
        ..OstiaStats::default()
    };
    t.red.insert(0);
    t.is_red[0] = true;
    let n = t.num_states();
    let mut touched = vec![false; n];

    while let Some(b) = t.blue().first().copied() {
        let reds: Vec<StateId> = t.red.iter().copied().collect();
        let mut merged = false;
        for r in reds {
            stats.merge_attempts += 1;
            let mut fold = Fold {
                t: &mut t,
                policy: cfg.finality,
                saved: Vec::new(),
                touched: std::mem::take(&mut touched),
                labels: labels.as_deref(),
                stats: &mut stats,
            };
            let ok = fold.merge(r, b).is_ok();
            if ok {
                fold.commit();
            } else {
                fold.rollback();
            }
            touched = std::mem::take(&mut fold.touched);
            if ok {
                merged = true;
                break;
            }
        }
        if merged {
            stats.merges += 1;
        } else {
            stats.promotions += 1;
            t.red.insert(b);
            t.is_red[b] = true;
        }
    }
    let m = t.to_sfst();
    stats.learned_states = m.num_states();
    stats.elapsed = started.elapsed();
    Ok((m, stats))
}

/// The domain-automaton state of every tree node.
fn domain_labels(t: &Ptt, d: &Sfst) -> Result<Vec<StateId>> {
    let mut labels = vec![d.start(); t.num_states()];
    // parents precede children in id order
    for q in 1..t.num_states() {
        let (p, sym) = t.nodes[q].parent.expect("non-root node has a parent");
        labels[q] = d
            .arc(labels[p], sym)
            .map(|a| a.target)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "training input prefix {} lies outside the domain",
                    t.access(q)
                ))
            })?;
    }
    Ok(labels)
}
