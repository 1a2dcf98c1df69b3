//! Subsequential finite-state transducers for learnability benchmarks.
//!
//! The crate covers the whole pipeline:
//!
//! * [`sfst`]: the transducer type and its transduction semantics,
//! * [`format`]: the line-oriented machine file format,
//! * [`gen`] and [`minimize`]: uniform random sampling, trimming and
//!   canonical minimization,
//! * [`dataset`]: random-walk datasets, train/test splits and transition
//!   coverage,
//! * [`ostia`]: the OSTIA state-merging learner,
//! * [`scan`]: hand-built SCAN fragments plus repetition and sub-graph
//!   replication.

pub mod dataset;
pub mod error;
pub mod format;
pub mod gen;
pub mod minimize;
pub mod ostia;
pub mod rng;
pub mod scan;
pub mod sfst;
pub mod symbol;

pub use dataset::{
    compare_split_coverage, coverage, random_walk, split, CoverageReport, Dataset, Pair, Split,
    SplitKind, WalkConfig,
};
pub use error::{Error, Result};
pub use format::{content_hash, parse_machine, print_machine};
pub use gen::{generate, GenConfig, TransitionMatrixSet};
pub use minimize::{equivalent, is_accessible, is_coaccessible, minimize, trim};
pub use ostia::{ostia_infer, ostia_infer_with, FinalityPolicy, OstiaConfig, OstiaStats};
pub use scan::{ScanBlock, SymbolTable};
pub use sfst::{Arc, Sfst, SfstBuilder, StateId};
pub use symbol::{Symbol, TokenString};
