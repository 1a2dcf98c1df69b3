use thiserror::Error;

use crate::sfst::StateId;
use crate::symbol::{Symbol, TokenString};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol {symbol} is not in the input alphabet")]
    Alphabet { symbol: Symbol },

    #[error("state {state} is out of range for a machine with {n_states} states")]
    StateOutOfRange { state: StateId, n_states: usize },

    #[error("duplicate transition from state {state} on symbol {symbol}")]
    DuplicateTransition { state: StateId, symbol: Symbol },

    #[error("no path for input `{input}`")]
    UndefinedPath { input: TokenString },

    #[error("machine is not trim (every state must be accessible and co-accessible)")]
    NotTrim,

    #[error("generation failed: no accessible and co-accessible sample in {attempts} attempts")]
    GenerationExhausted { attempts: usize },

    #[error("random walk exhausted after {attempts} walks: collected {collected} of {target} unique pairs")]
    WalkExhausted {
        attempts: usize,
        collected: usize,
        target: usize,
    },

    #[error("degenerate split: {0}")]
    Split(String),

    #[error("pair `{input}` -> `{output}` is not consistent with the machine")]
    Consistency {
        input: TokenString,
        output: TokenString,
    },

    #[error("input `{input}` is mapped to two different outputs")]
    InconsistentSample { input: TokenString },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
