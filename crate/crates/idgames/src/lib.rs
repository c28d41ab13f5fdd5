//! Identity games: distributed computation of a total function with no
//! communication between the players.
//!
//! An identity game is specified by a total function `f` from joint inputs to
//! joint outputs. Each player receives a private input and must produce an
//! output so that the output tuple equals `f` of the input tuple exactly. The
//! crate computes the optimal winning probability of such games under three
//! resource theories:
//!
//! * classical shared randomness ([`classical`]), by exhaustive search over
//!   deterministic strategies,
//! * general no-signaling boxes ([`ns`]), by exact rational linear
//!   programming over the no-signaling polytope,
//! * finite-dimensional quantum strategies ([`quantum`]), by explicit
//!   constructions and seesaw alternating optimization (lower bounds).
//!
//! On top of the per-game solvers, [`symmetry`] implements the relabelling
//! group that leaves optimal values invariant and [`census`] enumerates whole
//! game spaces up to equivalence, producing statistics over all equivalence
//! classes. [`counting`] contains the entropy-based counting bound showing
//! that for most functions classical resources barely beat random guessing
//! while no-signaling boxes always reach twice the random-guessing floor.

pub mod census;
pub mod classical;
pub mod counting;
pub mod exact;
pub mod game;
pub mod games;
pub mod io;
mod lp;
pub mod ns;
pub mod quantum;
pub mod symmetry;
mod util;

pub use exact::Rational;
pub use game::{
    Behavior, DeterministicStrategy, ExactBox, FloatBox, GameFunction, InputDistribution, Scenario,
};

use thiserror::Error;

/// Errors shared by the game model and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),
    #[error("{what} {value} out of range (< {bound} required)")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("box is not normalized")]
    UnnormalizedBox,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("operation requires binary outputs (m_o = 2), got {0}")]
    NonBinaryOutputs(usize),
    #[error("operation requires a {expected}-player scenario, got {got}")]
    WrongPlayerCount { expected: usize, got: usize },
    #[error("invalid quantum strategy: {0}")]
    InvalidStrategy(String),
    #[error("map is not a bijection")]
    NotBijective,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
