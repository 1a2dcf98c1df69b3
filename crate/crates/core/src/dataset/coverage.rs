use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::split::{split, SplitKind};
use super::Dataset;
use crate::error::{Error, Result};
use crate::sfst::{Sfst, StateId};
use crate::symbol::Symbol;

/// Training crossings per transition below which learnability degrades.
pub const DEFAULT_COVERAGE_THRESHOLD: usize = 400;

/// How often each transition is crossed by the training inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub per_transition: BTreeMap<(StateId, Symbol), usize>,
    pub min_count: usize,
    pub mean_count: f64,
    pub uncovered: Vec<(StateId, Symbol)>,
    pub threshold: usize,
    /// `min_count >= threshold`
    pub threshold_met: bool,
}

impl CoverageReport {
    pub fn covered_fraction(&self) -> f64 {
        if self.per_transition.is_empty() {
            return 1.0;
        }
        1.0 - self.uncovered.len() as f64 / self.per_transition.len() as f64
    }

    /// `key=value` summary followed by one `TRANS <src> <sym> <count>` row
    /// per transition.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "transitions={}", self.per_transition.len());
        let _ = writeln!(s, "min_count={}", self.min_count);
        let _ = writeln!(s, "mean_count={:.3}", self.mean_count);
        let _ = writeln!(s, "uncovered={}", self.uncovered.len());
        let _ = writeln!(s, "threshold={}", self.threshold);
        let _ = writeln!(s, "threshold_met={}", self.threshold_met);
        for ((q, sym), n) in &self.per_transition {
            let _ = writeln!(s, "TRANS {q} {sym} {n}");
        }
        s
    }
}

/// Replays every training input through the machine and counts crossings.
pub fn coverage(m: &Sfst, train: &Dataset, threshold: usize) -> Result<CoverageReport> {
    let mut counts: BTreeMap<(StateId, Symbol), usize> =
        m.transitions().map(|(q, sym, _)| ((q, sym), 0)).collect();
    for (input, output) in &train.pairs {
        let inconsistent = || Error::Consistency {
            input: input.clone(),
            output: output.clone(),
        };
        if m.transduce(input)?.as_ref() != Some(output) {
            return Err(inconsistent());
        }
        let mut q = m.start();
        for &sym in input.iter() {
            *counts.get_mut(&(q, sym)).ok_or_else(inconsistent)? += 1;
            q = m.arc(q, sym).ok_or_else(inconsistent)?.target;
        }
    }
    let min_count = counts.values().copied().min().unwrap_or(0);
    let mean_count = if counts.is_empty() {
        0.0
    } else {
        counts.values().sum::<usize>() as f64 / counts.len() as f64
    };
    let uncovered = counts
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(k, _)| *k)
        .collect();
    Ok(CoverageReport {
        per_transition: counts,
        min_count,
        mean_count,
        uncovered,
        threshold,
        threshold_met: min_count >= threshold,
    })
}

/// Coverage of a length split against a size-matched random split.
///
/// With `cutoff = None` the smallest cutoff whose train side holds at least
/// `fraction` of the pairs is used. Returns `(by_length, random)`.
pub fn compare_split_coverage(
    m: &Sfst,
    d: &Dataset,
    cutoff: Option<usize>,
    fraction: f64,
    seed: u64,
    threshold: usize,
) -> Result<(CoverageReport, CoverageReport)> {
    let cutoff = match cutoff {
        Some(c) => c,
        None => length_quantile(d, fraction)?,
    };
    let by_length = split(d, SplitKind::ByLength { cutoff }, seed)?;
    let random = split(
        d,
        SplitKind::RandomSize {
            train_size: by_length.train.len(),
        },
        seed,
    )?;
    Ok((
        coverage(m, &by_length.train, threshold)?,
        coverage(m, &random.train, threshold)?,
    ))
}

fn length_quantile(d: &Dataset, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Split(format!("fraction {fraction} outside (0, 1)")));
    }
    let mut lens: Vec<usize> = d.pairs.iter().map(|(i, _)| i.len()).collect();
    lens.sort_unstable();
    let want = ((fraction * lens.len() as f64).ceil() as usize).max(1);
    lens.get(want - 1)
        .copied()
        .ok_or_else(|| Error::Split("empty dataset".into()))
}
