//! Adversarial synchronization games on deterministic finite automata.

pub mod automaton;
pub mod cli;
pub mod error;
pub mod families;
pub mod oracle;
pub mod potential;
pub mod sim;
pub mod solver;
pub mod suites;

pub use automaton::{Dfa, PairAutomaton, StateSet, Word};
pub use error::{Error, Result};
