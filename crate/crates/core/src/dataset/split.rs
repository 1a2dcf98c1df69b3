use rand::seq::SliceRandom;

use super::Dataset;
use crate::error::{Error, Result};
use crate::rng::{rng_for, stream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitKind {
    /// Uniformly random train share of `fraction`, rounded to the nearest pair.
    Random { fraction: f64 },
    /// Uniformly random train set of exactly `train_size` pairs.
    RandomSize { train_size: usize },
    /// Train on inputs of length ≤ `cutoff`, test on the rest.
    ByLength { cutoff: usize },
}

#[derive(Debug, Clone)]
pub struct Split {
    pub train: Dataset,
    pub test: Dataset,
    pub kind: SplitKind,
}

/// Partitions `d` into train and test. Both sides keep the original pair order.
/// Random splits draw from the split stream of `seed`.
pub fn split(d: &Dataset, kind: SplitKind, seed: u64) -> Result<Split> {
    let n = d.len();
    let in_train: Vec<bool> = match kind {
        SplitKind::Random { fraction } => {
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(Error::Split(format!("fraction {fraction} outside (0, 1)")));
            }
            random_mask(n, (fraction * n as f64).round() as usize, seed)
        }
        SplitKind::RandomSize { train_size } => random_mask(n, train_size.min(n), seed),
        SplitKind::ByLength { cutoff } => d.pairs.iter().map(|(i, _)| i.len() <= cutoff).collect(),
    };
    let n_train = in_train.iter().filter(|&&b| b).count();
    if n_train == 0 {
        return Err(Error::Split("train side is empty".into()));
    }
    if n_train == n {
        return Err(Error::Split("test side is empty".into()));
    }
    let (train, test): (Vec<_>, Vec<_>) = d
        .pairs
        .iter()
        .zip(&in_train)
        .partition(|(_, &keep)| keep);
    let strip = |v: Vec<(&super::Pair, &bool)>| v.into_iter().map(|(p, _)| p.clone()).collect();
    Ok(Split {
        train: d.with_pairs(strip(train)),
        test: d.with_pairs(strip(test)),
        kind,
    })
}

fn random_mask(n: usize, n_train: usize, seed: u64) -> Vec<bool> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng_for(seed, stream::SPLIT));
    let mut mask = vec![false; n];
    for &i in &idx[..n_train] {
        mask[i] = true;
    }
    mask
}
