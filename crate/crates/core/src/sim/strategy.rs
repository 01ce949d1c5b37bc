use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Move, Mover, Position};
use crate::automaton::{pair_index, sccs, Dfa, PairAutomaton, StateSet, Word};
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::solver::{
    decide_k_pairs, decide_omega_pairs, trapped_states, Certificate, EscapeCertificate, KBound,
    MarkingCertificate,
};

pub trait AliceStrategy {
    /// The letter to play. Called only while at least two tokens remain.
    fn choose(&mut self, pos: &Position, moves: &[Move]) -> Result<usize>;

    fn seed(&self) -> Option<u64> {
        None
    }
}

pub trait BobStrategy {
    fn respond(&mut self, pos: &Position, moves: &[Move]) -> Result<Word>;

    fn seed(&self) -> Option<u64> {
        None
    }
}

fn pairs_of(tokens: &StateSet) -> Vec<usize> {
    let members = tokens.to_vec();
    let mut out = Vec::with_capacity(members.len() * members.len() / 2);
    for (j, &q) in members.iter().enumerate() {
        for &p in &members[..j] {
            out.push(pair_index(p, q));
        }
    }
    out.sort_unstable();
    out
}

/// Alice following a marking certificate: take the live pair marked earliest
/// and send it into a firmly marked pair of an earlier round.
#[derive(Clone, Debug)]
pub struct CertificateAlice {
    pairs: PairAutomaton,
    cert: MarkingCertificate,
}

pub fn alice_from_certificate(cert: MarkingCertificate, pairs: PairAutomaton) -> Result<CertificateAlice> {
    if !cert.all_firm() || cert.firm.len() != pairs.dfa().n() {
        return Err(Error::Precondition(
            "certificate does not mark every pair state".into(),
        ));
    }
    Ok(CertificateAlice { pairs, cert })
}

impl AliceStrategy for CertificateAlice {
    fn choose(&mut self, pos: &Position, _moves: &[Move]) -> Result<usize> {
        let pd = self.pairs.dfa();
        let (round, pair) = pairs_of(&pos.tokens)
            .into_iter()
            .map(|i| (self.cert.preliminary[i].expect("all pairs marked"), i))
            .min()
            .expect("at least two tokens");
        (0..pd.num_letters())
            .find(|&a| self.cert.firm[pd.step(pair, a)].is_some_and(|f| f < round))
            .ok_or_else(|| Error::Precondition("certificate has no descending letter".into()))
    }
}

/// Alice in the ω-game on the 2-subset automaton: push the live pair in the
/// lowest strongly connected component out of it.
#[derive(Clone, Debug)]
pub struct EscapeAlice {
    cert: EscapeCertificate,
}

pub fn alice_escape(pairs: &PairAutomaton) -> Result<EscapeAlice> {
    match decide_omega_pairs(pairs).certificate {
        Certificate::Escape(cert) => Ok(EscapeAlice { cert }),
        _ => Err(Error::Precondition("Alice does not win the ω-game".into())),
    }
}

impl AliceStrategy for EscapeAlice {
    fn choose(&mut self, pos: &Position, _moves: &[Move]) -> Result<usize> {
        let (_, pair) = pairs_of(&pos.tokens)
            .into_iter()
            .map(|i| (self.cert.component[i], i))
            .min()
            .expect("at least two tokens");
        Ok(self.cert.escape[pair].expect("non-sink pair has an escape letter"))
    }
}

/// Alice playing letters whose image avoids the current characteristic.
#[derive(Clone, Debug)]
pub struct CharacteristicAlice {
    potential: Potential,
}

pub fn alice_characteristic(dfa: &Dfa) -> Result<CharacteristicAlice> {
    Ok(CharacteristicAlice {
        potential: Potential::new(dfa)?,
    })
}

impl CharacteristicAlice {
    pub fn potential(&self) -> &Potential {
        &self.potential
    }
}

impl AliceStrategy for CharacteristicAlice {
    fn choose(&mut self, pos: &Position, _moves: &[Move]) -> Result<usize> {
        self.potential.avoiding_letter(&pos.tokens)
    }
}

/// A winning Alice for the given game: certificate-driven for finite `k`,
/// characteristic-driven for ω.
pub fn alice_optimal(dfa: &Dfa, k: KBound) -> Result<Box<dyn AliceStrategy>> {
    match k {
        KBound::Omega => Ok(Box::new(alice_characteristic(dfa)?)),
        KBound::Finite(k) => {
            let pairs = PairAutomaton::new(dfa)?;
            match decide_k_pairs(&pairs, k)?.certificate {
                Certificate::Marking(cert) if cert.all_firm() => {
                    Ok(Box::new(alice_from_certificate(cert, pairs)?))
                }
                _ => Err(Error::Precondition(format!("Alice does not win the {k}-game"))),
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomAlice {
    seed: u64,
    rng: ChaCha8Rng,
    num_letters: usize,
}

impl RandomAlice {
    pub fn new(num_letters: usize, seed: u64) -> Self {
        RandomAlice {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            num_letters,
        }
    }
}

impl AliceStrategy for RandomAlice {
    fn choose(&mut self, _pos: &Position, _moves: &[Move]) -> Result<usize> {
        Ok(self.rng.random_range(0..self.num_letters))
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Plays the letters of a fixed word in order, starting over at the end.
#[derive(Clone, Debug)]
pub struct FixedLettersAlice {
    word: Word,
    next: usize,
}

impl FixedLettersAlice {
    pub fn new(word: Word) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("Alice's script is empty".into()));
        }
        Ok(FixedLettersAlice { word, next: 0 })
    }
}

impl AliceStrategy for FixedLettersAlice {
    fn choose(&mut self, _pos: &Position, _moves: &[Move]) -> Result<usize> {
        let x = self.word[self.next % self.word.len()];
        self.next += 1;
        Ok(x)
    }
}

/// Bob keeping a pair of tokens outside Alice's winning region.
///
/// For finite `k` the region is the final preliminary set of the marking
/// procedure: whenever every live pair is inside it, some live pair is
/// preliminarily but not firmly marked and a word shorter than `k` leads it out.
/// For ω the region's complement is the set of trapped pairs, and Bob walks a
/// live pair back into one inside its strongly connected component. Passes when
/// Alice wins.
#[derive(Clone, Debug)]
pub struct OptimalBob {
    pairs: Option<PairAutomaton>,
    /// Pair states Bob is happy to leave a pair in.
    safe: StateSet,
    /// Pair states from which a pair can be brought back into `safe`.
    recoverable: StateSet,
    limit: usize,
}

pub fn bob_optimal(dfa: &Dfa, k: KBound) -> Result<OptimalBob> {
    let passive = OptimalBob {
        pairs: None,
        safe: StateSet::empty(0),
        recoverable: StateSet::empty(0),
        limit: 0,
    };
    if dfa.n() < 2 {
        return Ok(passive);
    }
    let pairs = PairAutomaton::new(dfa)?;
    let pd = pairs.dfa();
    let states = pd.n();
    let (safe, recoverable, limit) = match k {
        KBound::Finite(k) => match decide_k_pairs(&pairs, k)?.certificate {
            Certificate::Marking(cert) if !cert.all_firm() => {
                let safe = StateSet::from_states(states, cert.outside_preliminary());
                let recoverable = StateSet::from_states(
                    states,
                    (0..states).filter(|&q| cert.preliminary[q].is_some() && cert.firm[q].is_none()),
                );
                (safe, recoverable, k as usize - 1)
            }
            _ => return Ok(passive),
        },
        KBound::Omega => {
            if decide_omega_pairs(&pairs).alice_wins() {
                return Ok(passive);
            }
            let safe = trapped_states(pd, pairs.sink());
            let comps = sccs(pd);
            let recoverable = StateSet::from_states(
                states,
                (0..states).filter(|&q| safe.iter().any(|t| comps.same(q, t))),
            );
            (safe, recoverable, usize::MAX)
        }
    };
    Ok(OptimalBob {
        pairs: Some(pairs),
        safe,
        recoverable,
        limit,
    })
}

impl BobStrategy for OptimalBob {
    fn respond(&mut self, pos: &Position, _moves: &[Move]) -> Result<Word> {
        let Some(pairs) = &self.pairs else {
            return Ok(Word::empty());
        };
        let live = pairs_of(&pos.tokens);
        if live.iter().any(|&i| self.safe.contains(i)) {
            return Ok(Word::empty());
        }
        let word = live
            .iter()
            .find(|&&i| self.recoverable.contains(i))
            .and_then(|&i| pairs.dfa().shortest_word_into(i, &self.safe));
        Ok(match word {
            Some(w) if w.len() <= self.limit => w,
            _ => Word::empty(),
        })
    }
}

/// Answers Alice's letter `x` with `x^k`.
#[derive(Clone, Debug)]
pub struct EchoPowerBob {
    pub power: usize,
}

impl BobStrategy for EchoPowerBob {
    fn respond(&mut self, _pos: &Position, moves: &[Move]) -> Result<Word> {
        let last = moves.iter().rev().find(|m| m.mover == Mover::Alice);
        Ok(match last {
            Some(m) => Word::repeat_letter(m.word[0], self.power),
            None => Word::empty(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct FixedWordBob {
    pub word: Word,
}

impl BobStrategy for FixedWordBob {
    fn respond(&mut self, _pos: &Position, _moves: &[Move]) -> Result<Word> {
        Ok(self.word.clone())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PassBob;

impl BobStrategy for PassBob {
    fn respond(&mut self, _pos: &Position, _moves: &[Move]) -> Result<Word> {
        Ok(Word::empty())
    }
}

/// Uniformly random word lengths up to `max_len`, then uniform letters.
#[derive(Clone, Debug)]
pub struct RandomBob {
    seed: u64,
    rng: ChaCha8Rng,
    num_letters: usize,
    max_len: usize,
}

impl RandomBob {
    /// For ω the longest word is `n` letters.
    pub fn new(dfa: &Dfa, k: KBound, seed: u64) -> Self {
        let max_len = match k {
            KBound::Finite(k) => k as usize - 1,
            KBound::Omega => dfa.n(),
        };
        RandomBob {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            num_letters: dfa.num_letters(),
            max_len,
        }
    }
}

impl BobStrategy for RandomBob {
    fn respond(&mut self, _pos: &Position, _moves: &[Move]) -> Result<Word> {
        let len = self.rng.random_range(0..=self.max_len);
        Ok((0..len)
            .map(|_| self.rng.random_range(0..self.num_letters))
            .collect())
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

impl<T: AliceStrategy + ?Sized> AliceStrategy for Box<T> {
    fn choose(&mut self, pos: &Position, moves: &[Move]) -> Result<usize> {
        (**self).choose(pos, moves)
    }

    fn seed(&self) -> Option<u64> {
        (**self).seed()
    }
}

impl<T: BobStrategy + ?Sized> BobStrategy for Box<T> {
    fn respond(&mut self, pos: &Position, moves: &[Move]) -> Result<Word> {
        (**self).respond(pos, moves)
    }

    fn seed(&self) -> Option<u64> {
        (**self).seed()
    }
}
