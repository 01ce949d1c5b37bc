use std::fmt::Write as _;

use super::Mover;
use crate::automaton::{Dfa, StateSet, Word};
use crate::error::{Error, Result};
use crate::solver::{KBound, Winner};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub mover: Mover,
    pub word: Word,
    /// Tokens after the move.
    pub after: StateSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The history reset the automaton after Alice's `alice_moves`-th move
    /// (or after a Bob move that followed it).
    AliceWon { alice_moves: usize },
    /// Alice used up the horizon without winning.
    BobSurvived { horizon: usize },
    /// A strategy produced an illegal move; the game stopped before it.
    Illegal {
        mover: Mover,
        word: Word,
        reason: String,
    },
}

/// A finished game, replayable from the full position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub k: KBound,
    pub first: Mover,
    pub seed: u64,
    pub n: usize,
    pub moves: Vec<Move>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn winner(&self) -> Option<Winner> {
        match self.outcome {
            Outcome::AliceWon { .. } => Some(Winner::Alice),
            Outcome::BobSurvived { .. } => Some(Winner::Bob),
            Outcome::Illegal { .. } => None,
        }
    }

    pub fn alice_moves(&self) -> usize {
        self.moves.iter().filter(|m| m.mover == Mover::Alice).count()
    }

    pub fn history(&self) -> Word {
        let mut w = Word::empty();
        for m in &self.moves {
            w.extend_from(&m.word);
        }
        w
    }

    pub fn final_tokens(&self) -> StateSet {
        self.moves
            .last()
            .map(|m| m.after.clone())
            .unwrap_or_else(|| StateSet::full(self.n))
    }

    /// Checks the recorded positions, move legality and outcome against `dfa`.
    pub fn replay(&self, dfa: &Dfa) -> bool {
        if dfa.n() != self.n {
            return false;
        }
        let mut tokens = StateSet::full(self.n);
        let mut expected = self.first;
        for m in &self.moves {
            if m.mover != expected || m.word.iter().any(|&a| a >= dfa.num_letters()) {
                return false;
            }
            let legal = match m.mover {
                Mover::Alice => m.word.len() == 1,
                Mover::Bob => self.k.allows(m.word.len()),
            };
            if !legal || tokens.len() <= 1 {
                return false;
            }
            tokens = dfa.apply_set(&tokens, &m.word);
            if tokens != m.after {
                return false;
            }
            expected = expected.other();
        }
        let reset = dfa.is_reset_word(&self.history());
        match self.outcome {
            Outcome::AliceWon { alice_moves } => reset && alice_moves == self.alice_moves(),
            Outcome::BobSurvived { horizon } => !reset && self.alice_moves() == horizon,
            Outcome::Illegal { .. } => !reset,
        }
    }

    /// Text form: a header line, one line per move, and a footer.
    pub fn dump(&self, dfa: &Dfa) -> String {
        let mut out = String::new();
        writeln!(out, "game k={} first={} seed={}", self.k, self.first, self.seed).unwrap();
        for m in &self.moves {
            writeln!(out, "{} {} -> {}", m.mover, dfa.format_word(&m.word), m.after).unwrap();
        }
        match &self.outcome {
            Outcome::AliceWon { alice_moves } => writeln!(out, "winner alice@{alice_moves}"),
            Outcome::BobSurvived { horizon } => writeln!(out, "winner bob@{horizon}"),
            Outcome::Illegal { mover, reason, .. } => writeln!(out, "illegal {mover}: {reason}"),
        }
        .unwrap();
        out
    }

    /// Parses [`dump`](Self::dump) output. The word of an illegal move is not
    /// part of the text form and comes back empty.
    pub fn parse(dfa: &Dfa, text: &str) -> Result<Transcript> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, message: String| Error::Parse {
            line,
            column: 1,
            message,
        };
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty transcript".into()))?;
        let mut k = None;
        let mut first = None;
        let mut seed = None;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("game") {
            return Err(err(hl, "expected header starting with 'game'".into()));
        }
        for field in fields {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(hl, format!("malformed header field {field:?}")))?;
            match key {
                "k" => k = Some(value.parse::<KBound>().map_err(|e| err(hl, e.to_string()))?),
                "first" => first = Some(parse_mover(value).ok_or_else(|| err(hl, format!("bad mover {value:?}")))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| err(hl, e.to_string()))?),
                _ => return Err(err(hl, format!("unknown header field {key:?}"))),
            }
        }
        let k = k.ok_or_else(|| err(hl, "header lacks k".into()))?;
        let first = first.ok_or_else(|| err(hl, "header lacks first".into()))?;
        let seed = seed.unwrap_or(0);

        let mut moves = Vec::new();
        let mut outcome = None;
        for (ln, line) in lines {
            if outcome.is_some() {
                return Err(err(ln, "content after the footer".into()));
            }
            if let Some(rest) = line.strip_prefix("winner ") {
                let (who, count) = rest
                    .split_once('@')
                    .ok_or_else(|| err(ln, "expected winner <alice|bob>@<count>".into()))?;
                let count: usize = count.parse().map_err(|_| err(ln, format!("bad count {count:?}")))?;
                outcome = Some(match who {
                    "alice" => Outcome::AliceWon { alice_moves: count },
                    "bob" => Outcome::BobSurvived { horizon: count },
                    _ => return Err(err(ln, format!("unknown winner {who:?}"))),
                });
                continue;
            }
            if let Some(rest) = line.strip_prefix("illegal ") {
                let (who, reason) = rest
                    .split_once(": ")
                    .ok_or_else(|| err(ln, "expected illegal <A|B>: <reason>".into()))?;
                outcome = Some(Outcome::Illegal {
                    mover: parse_mover(who).ok_or_else(|| err(ln, format!("bad mover {who:?}")))?,
                    word: Word::empty(),
                    reason: reason.to_string(),
                });
                continue;
            }
            let (left, set) = line
                .split_once(" -> ")
                .ok_or_else(|| err(ln, "expected '<A|B> <word> -> {tokens}'".into()))?;
            let (who, word) = left.split_once(' ').unwrap_or((left, "-"));
            let mover = parse_mover(who).ok_or_else(|| err(ln, format!("bad mover {who:?}")))?;
            let word = dfa.parse_word(word).map_err(|e| err(ln, e.to_string()))?;
            let after = parse_set(set, dfa.n()).ok_or_else(|| err(ln, format!("bad token set {set:?}")))?;
            moves.push(Move { mover, word, after });
        }
        let outcome = outcome.ok_or_else(|| err(text.lines().count().max(1), "missing footer".into()))?;
        Ok(Transcript {
            k,
            first,
            seed,
            n: dfa.n(),
            moves,
            outcome,
        })
    }
}

fn parse_mover(s: &str) -> Option<Mover> {
    match s {
        "A" => Some(Mover::Alice),
        "B" => Some(Mover::Bob),
        _ => None,
    }
}

fn parse_set(s: &str, n: usize) -> Option<StateSet> {
    let inner = s.trim().strip_prefix('{')?.strip_suffix('}')?;
    let mut set = StateSet::empty(n);
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let q: usize = part.parse().ok()?;
        if q >= n {
            return None;
        }
        set.insert(q);
    }
    Some(set)
}
