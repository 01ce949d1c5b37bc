//! Playing games: strategies, the game loop and replayable transcripts.

mod exhaustive;
mod strategy;
mod transcript;

pub use exhaustive::{worst_case_alice_moves, DEFAULT_POSITION_CAP};
pub use strategy::{
    alice_characteristic, alice_escape, alice_from_certificate, alice_optimal, bob_optimal,
    AliceStrategy, BobStrategy, CertificateAlice, CharacteristicAlice, EchoPowerBob, EscapeAlice,
    FixedLettersAlice, FixedWordBob, OptimalBob, PassBob, RandomAlice, RandomBob,
};
pub use transcript::{Move, Outcome, Transcript};

use std::fmt;

use crate::automaton::{num_pairs, Dfa, StateSet, Word};
use crate::error::Result;
use crate::solver::KBound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mover {
    Alice,
    Bob,
}

impl Mover {
    pub fn other(self) -> Mover {
        match self {
            Mover::Alice => Mover::Bob,
            Mover::Bob => Mover::Alice,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Mover::Alice => "A",
            Mover::Bob => "B",
        }
    }
}

impl fmt::Display for Mover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Tokens left on the board, whose turn it is, and everything played so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub tokens: StateSet,
    pub to_move: Mover,
    pub history: Word,
}

impl Position {
    pub fn start(n: usize, first: Mover) -> Self {
        Position {
            tokens: StateSet::full(n),
            to_move: first,
            history: Word::empty(),
        }
    }

    pub fn is_won(&self) -> bool {
        self.tokens.len() <= 1
    }
}

/// Number of Alice moves after which a game counts as survived by Bob.
pub fn default_horizon(n: usize) -> usize {
    num_pairs(n) * n.saturating_sub(2) + 1
}

/// Default cap on Bob's word length in the ω-game.
pub fn default_bob_word_cap(n: usize) -> usize {
    n * num_pairs(n)
}

/// Game settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub k: KBound,
    pub first: Mover,
    pub horizon: usize,
    /// Longest word Bob may play in the ω-game.
    pub bob_word_cap: usize,
}

impl GameConfig {
    pub fn new(n: usize, k: KBound) -> Self {
        GameConfig {
            k,
            first: Mover::Bob,
            horizon: default_horizon(n),
            bob_word_cap: default_bob_word_cap(n),
        }
    }

    pub fn first(mut self, first: Mover) -> Self {
        self.first = first;
        self
    }

    pub fn horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    fn bob_limit(&self) -> usize {
        match self.k {
            KBound::Finite(k) => k as usize - 1,
            KBound::Omega => self.bob_word_cap,
        }
    }
}

/// Plays one game from the full position.
pub fn simulate(
    dfa: &Dfa,
    config: &GameConfig,
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
) -> Result<Transcript> {
    let seed = bob.seed().or(alice.seed()).unwrap_or(0);
    let mut pos = Position::start(dfa.n(), config.first);
    let mut moves: Vec<Move> = Vec::new();
    let mut alice_moves = 0;
    let outcome = loop {
        if pos.is_won() {
            break Outcome::AliceWon { alice_moves };
        }
        let (word, mover) = match pos.to_move {
            Mover::Alice => {
                if alice_moves >= config.horizon {
                    break Outcome::BobSurvived {
                        horizon: config.horizon,
                    };
                }
                let x = alice.choose(&pos, &moves)?;
                if x >= dfa.num_letters() {
                    break Outcome::Illegal {
                        mover: Mover::Alice,
                        word: Word::new(vec![x]),
                        reason: format!("letter index {x} out of range"),
                    };
                }
                alice_moves += 1;
                (Word::new(vec![x]), Mover::Alice)
            }
            Mover::Bob => {
                let w = bob.respond(&pos, &moves)?;
                if let Some(&bad) = w.iter().find(|&&a| a >= dfa.num_letters()) {
                    break Outcome::Illegal {
                        mover: Mover::Bob,
                        word: w,
                        reason: format!("letter index {bad} out of range"),
                    };
                }
                if w.len() > config.bob_limit() {
                    break Outcome::Illegal {
                        mover: Mover::Bob,
                        reason: format!(
                            "word of length {} exceeds the limit {}",
                            w.len(),
                            config.bob_limit()
                        ),
                        word: w,
                    };
                }
                (w, Mover::Bob)
            }
        };
        pos.tokens = dfa.apply_set(&pos.tokens, &word);
        pos.history.extend_from(&word);
        pos.to_move = mover.other();
        moves.push(Move {
            mover,
            word,
            after: pos.tokens.clone(),
        });
    };
    Ok(Transcript {
        k: config.k,
        first: config.first,
        seed,
        n: dfa.n(),
        moves,
        outcome,
    })
}
