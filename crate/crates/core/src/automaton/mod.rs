//! Automata, words, state sets and the derived automata used by the solvers.

mod dfa;
mod graph;
pub mod io;
mod iterate;
mod pairs;
mod stateset;

pub use dfa::{Dfa, Word, MAX_STATES};
pub use graph::{sccs, Sccs};
pub use io::{export_dot, parse_dfa, serialize_dfa};
pub use iterate::{
    iterate, iterate_with_cap, iteration_alphabet_size, iteration_words, DEFAULT_ITERATION_CAP,
};
pub use pairs::{greedy_reset_word, is_synchronizing, num_pairs, pair_index, PairAutomaton, DEFAULT_PAIR_CAP};
pub use stateset::StateSet;
