//! Winner decision for k-games, ω-games and m/ω-games.
//!
//! Decisions assume Bob moves first. Bob may always pass (play the empty word).
//! Games on an arbitrary automaton are decided on its 2-subset automaton, which
//! has a unique sink exactly when no pair other than the merged one is fixed by
//! every letter.

use std::fmt;
use std::str::FromStr;

use crate::automaton::{iterate, num_pairs, sccs, Dfa, PairAutomaton, StateSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    Alice,
    Bob,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Alice => "alice",
            Winner::Bob => "bob",
        })
    }
}

/// The bound on Bob's word length: `Finite(k)` lets Bob play words shorter than
/// `k`, `Omega` lets him play any word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KBound {
    Finite(u32),
    Omega,
}

impl KBound {
    pub fn finite(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        Ok(KBound::Finite(k))
    }

    /// Whether Bob may play a word of this length.
    pub fn allows(&self, len: usize) -> bool {
        match *self {
            KBound::Finite(k) => len < k as usize,
            KBound::Omega => true,
        }
    }
}

impl fmt::Display for KBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KBound::Finite(k) => write!(f, "{k}"),
            KBound::Omega => f.write_str("omega"),
        }
    }
}

impl FromStr for KBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("omega") || s == "ω" {
            return Ok(KBound::Omega);
        }
        let k: u32 = s
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("k must be a positive integer or `omega`, got {s:?}")))?;
        KBound::finite(k)
    }
}

/// Result of the marking procedure for a finite k on a sink automaton.
///
/// `firm[q] = Some(i)` when `q` joined the firmly marked set in iteration `i`;
/// `preliminary[q] = Some(i)` when `q` joined the preliminary set `P` in
/// iteration `i`. The sink has both rounds equal to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkingCertificate {
    pub k: u32,
    pub sink: usize,
    pub firm: Vec<Option<u32>>,
    pub preliminary: Vec<Option<u32>>,
    /// Number of iterations run; for a Bob outcome, the iteration that stalled.
    pub iterations: u32,
}

impl MarkingCertificate {
    pub fn all_firm(&self) -> bool {
        self.firm.iter().all(Option::is_some)
    }

    /// States outside the final preliminary set; Bob keeps a token pair there.
    pub fn outside_preliminary(&self) -> Vec<usize> {
        (0..self.preliminary.len())
            .filter(|&q| self.preliminary[q].is_none())
            .collect()
    }

    /// Replays the certificate against the transition table: every state firmly
    /// marked in round `i` can only reach states preliminarily marked by round
    /// `i` with words shorter than `k`, and every state preliminarily marked in
    /// round `i` has a letter into a state firmly marked before round `i`.
    pub fn check(&self, dfa: &Dfa) -> bool {
        let n = dfa.n();
        if self.firm.len() != n || self.preliminary.len() != n {
            return false;
        }
        if self.firm[self.sink] != Some(0) || self.preliminary[self.sink] != Some(0) {
            return false;
        }
        let depth = (self.k as usize - 1).min(n - 1);
        for q in 0..n {
            if q == self.sink {
                continue;
            }
            if let Some(i) = self.preliminary[q] {
                let ok = (0..dfa.num_letters())
                    .any(|a| self.firm[dfa.step(q, a)].is_some_and(|r| r < i));
                if !ok {
                    return false;
                }
            }
            if let Some(i) = self.firm[q] {
                if !self.preliminary[q].is_some_and(|p| p <= i) {
                    return false;
                }
                let ball = dfa.reach_within(q, depth);
                if !ball.iter().all(|r| self.preliminary[r].is_some_and(|p| p <= i)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Evidence for the ω-game criterion on a sink automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeCertificate {
    pub sink: usize,
    /// Component id per state; ids decrease along every edge between components.
    pub component: Vec<u32>,
    /// For each non-sink state, the lowest letter leaving its component.
    pub escape: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// One-state automaton: nothing to synchronize.
    Trivial,
    /// Finite k, either winner.
    Marking(MarkingCertificate),
    /// ω, Alice wins.
    Escape(EscapeCertificate),
    /// ω, Bob wins: every letter keeps `state` inside its component.
    Trapped { state: usize },
    /// Bob wins because the automaton does not have exactly one sink.
    SinkCount { sinks: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameOutcome {
    pub winner: Winner,
    pub certificate: Certificate,
    /// For games decided through the 2-subset automaton: a pair of base states
    /// from which Bob keeps the tokens apart.
    pub witness_pair: Option<(usize, usize)>,
}

impl GameOutcome {
    fn new(winner: Winner, certificate: Certificate) -> Self {
        GameOutcome {
            winner,
            certificate,
            witness_pair: None,
        }
    }

    pub fn alice_wins(&self) -> bool {
        self.winner == Winner::Alice
    }

    /// A state of the decided automaton from which Bob survives.
    pub fn bob_witness_state(&self) -> Option<usize> {
        if self.winner == Winner::Alice {
            return None;
        }
        match &self.certificate {
            Certificate::Trapped { state } => Some(*state),
            Certificate::Marking(m) => m.outside_preliminary().first().copied(),
            Certificate::SinkCount { sinks } => sinks.get(1).copied(),
            _ => None,
        }
    }
}

/// Game level: the largest `k` for which Alice wins the k-game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    NotSynchronizing,
    Finite(u32),
    Omega,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::NotSynchronizing => f.write_str("none"),
            Level::Finite(k) => write!(f, "{k}"),
            Level::Omega => f.write_str("omega"),
        }
    }
}

fn unique_sink(dfa: &Dfa) -> std::result::Result<usize, Vec<usize>> {
    let sinks = dfa.sinks();
    if sinks.len() == 1 {
        Ok(sinks[0])
    } else {
        Err(sinks)
    }
}

/// ω-game on an automaton with a sink: Alice wins iff the sink is unique and
/// every other state has a letter leaving its strongly connected component.
/// `O(n·m)`.
pub fn decide_omega_sink(dfa: &Dfa) -> GameOutcome {
    let sink = match unique_sink(dfa) {
        Ok(s) => s,
        Err(sinks) => {
            return GameOutcome::new(Winner::Bob, Certificate::SinkCount { sinks })
        }
    };
    let comps = sccs(dfa);
    let mut escape = vec![None; dfa.n()];
    for q in 0..dfa.n() {
        if q == sink {
            continue;
        }
        let c = comps.component(q);
        match dfa.row(q).iter().position(|&t| comps.component(t as usize) != c) {
            Some(a) => escape[q] = Some(a),
            None => return GameOutcome::new(Winner::Bob, Certificate::Trapped { state: q }),
        }
    }
    let component = (0..dfa.n()).map(|q| comps.component(q) as u32).collect();
    GameOutcome::new(
        Winner::Alice,
        Certificate::Escape(EscapeCertificate {
            sink,
            component,
            escape,
        }),
    )
}

/// The iterative marking procedure for finite `k`, run on any automaton with a
/// designated sink. Counts `|R[q]|` and decrements it by a depth-bounded
/// backward search whenever a state joins `P`; `O(n²·m)` overall.
pub(crate) fn marking(dfa: &Dfa, sink: usize, k: u32) -> MarkingCertificate {
    let n = dfa.n();
    let depth = (k as usize - 1).min(n - 1);
    let (offsets, sources) = dfa.reverse_edges();

    let mut remaining = vec![0usize; n];
    for (q, slot) in remaining.iter_mut().enumerate() {
        if q != sink {
            let ball = dfa.reach_within(q, depth);
            *slot = ball.len() - usize::from(ball.contains(sink));
        }
    }

    let mut firm = vec![None; n];
    let mut preliminary = vec![None; n];
    firm[sink] = Some(0);
    preliminary[sink] = Some(0);
    let mut firm_count = 1;
    let mut newly_firm = vec![sink];
    let mut pending: Vec<usize> = Vec::new(); // in P \ F
    let mut iteration = 0u32;

    // Scratch space for the backward searches.
    let mut stamp = vec![0u32; n];
    let mut search = 0u32;
    let mut frontier = Vec::new();
    let mut next = Vec::new();

    while firm_count < n {
        iteration += 1;
        for &f in &newly_firm {
            for &p in &sources[offsets[f]..offsets[f + 1]] {
                let p = p as usize;
                if preliminary[p].is_some() {
                    continue;
                }
                preliminary[p] = Some(iteration);
                pending.push(p);
                // Strike p from every R[q] with p in q·Σ^{<k}.
                search += 1;
                stamp[p] = search;
                remaining[p] -= 1;
                frontier.clear();
                frontier.push(p);
                for _ in 0..depth {
                    next.clear();
                    for &r in &frontier {
                        for &q in &sources[offsets[r]..offsets[r + 1]] {
                            let q = q as usize;
                            if stamp[q] != search {
                                stamp[q] = search;
                                remaining[q] -= 1;
                                next.push(q);
                            }
                        }
                    }
                    if next.is_empty() {
                        break;
                    }
                    std::mem::swap(&mut frontier, &mut next);
                }
            }
        }
        newly_firm.clear();
        pending.retain(|&q| {
            if remaining[q] == 0 {
                newly_firm.push(q);
                false
            } else {
                true
            }
        });
        if newly_firm.is_empty() {
            break;
        }
        newly_firm.sort_unstable();
        for &q in &newly_firm {
            firm[q] = Some(iteration);
        }
        firm_count += newly_firm.len();
    }

    MarkingCertificate {
        k,
        sink,
        firm,
        preliminary,
        iterations: iteration,
    }
}

/// k-game on an automaton with a unique sink.
pub fn decide_k_sink(dfa: &Dfa, k: u32) -> Result<GameOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let sink = match unique_sink(dfa) {
        Ok(s) => s,
        Err(sinks) => {
            return Ok(GameOutcome::new(Winner::Bob, Certificate::SinkCount { sinks }))
        }
    };
    let cert = marking(dfa, sink, k);
    let winner = if cert.all_firm() {
        Winner::Alice
    } else {
        Winner::Bob
    };
    Ok(GameOutcome::new(winner, Certificate::Marking(cert)))
}

fn trivial() -> GameOutcome {
    GameOutcome::new(Winner::Alice, Certificate::Trivial)
}

fn decode(pairs: &PairAutomaton, mut outcome: GameOutcome) -> GameOutcome {
    outcome.witness_pair = outcome.bob_witness_state().and_then(|i| pairs.pair(i));
    outcome
}

/// ω-game on an arbitrary automaton. `O(n²·m)`.
pub fn decide_omega(dfa: &Dfa) -> Result<GameOutcome> {
    if dfa.n() == 1 {
        return Ok(trivial());
    }
    let pairs = PairAutomaton::new(dfa)?;
    Ok(decide_omega_pairs(&pairs))
}

pub fn decide_omega_pairs(pairs: &PairAutomaton) -> GameOutcome {
    decode(pairs, decide_omega_sink(pairs.dfa()))
}

/// k-game on an arbitrary automaton. `O(n⁴·m)`.
pub fn decide_k(dfa: &Dfa, k: u32) -> Result<GameOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if dfa.n() == 1 {
        return Ok(trivial());
    }
    let pairs = PairAutomaton::new(dfa)?;
    decide_k_pairs(&pairs, k)
}

pub fn decide_k_pairs(pairs: &PairAutomaton, k: u32) -> Result<GameOutcome> {
    Ok(decode(pairs, decide_k_sink(pairs.dfa(), k)?))
}

/// Decides the game for either kind of bound.
pub fn decide(dfa: &Dfa, k: KBound) -> Result<GameOutcome> {
    match k {
        KBound::Finite(k) => decide_k(dfa, k),
        KBound::Omega => decide_omega(dfa),
    }
}

/// Largest k with Alice winning the k-game. Uses monotonicity in k and the fact
/// that winning the `C(n,2)`-game already implies winning the ω-game, so the
/// search range is `1..C(n,2)`.
pub fn game_level(dfa: &Dfa) -> Result<Level> {
    if dfa.n() == 1 {
        return Ok(Level::Omega);
    }
    let pairs = PairAutomaton::new(dfa)?;
    if decide_omega_pairs(&pairs).alice_wins() {
        return Ok(Level::Omega);
    }
    let wins = |k: u32| -> Result<bool> { Ok(decide_k_pairs(&pairs, k)?.alice_wins()) };
    if !wins(1)? {
        return Ok(Level::NotSynchronizing);
    }
    let (mut lo, mut hi) = (1u32, (num_pairs(dfa.n()) - 1).max(1) as u32);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if wins(mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(Level::Finite(lo))
}

/// m/ω-game: the ω-game on the iteration automaton.
pub fn decide_m_omega(dfa: &Dfa, m: usize) -> Result<GameOutcome> {
    decide_omega(&iterate(dfa, m)?)
}

/// States of a sink automaton that Bob can hold forever in the ω-game: every
/// letter keeps them in their component. Extra sinks count as trapped.
pub fn trapped_states(dfa: &Dfa, sink: usize) -> StateSet {
    let comps = sccs(dfa);
    StateSet::from_states(
        dfa.n(),
        (0..dfa.n()).filter(|&q| {
            q != sink
                && dfa
                    .row(q)
                    .iter()
                    .all(|&t| comps.same(q, t as usize))
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sink automaton with states 0..=5, sink 0, letters a_1..a_5 (three sink
    /// letters and two shift letters).
    fn l_2_3() -> Dfa {
        let (k, m) = (3usize, 2usize);
        Dfa::from_fn(k + m + 1, (1..=k + m).map(|i| format!("a_{i}")), |q, a| {
            let i = a + 1;
            if i <= k {
                if q == i { 0 } else { q }
            } else {
                let j = i - k;
                if j <= q && q < k + j {
                    q + 1
                } else if q == k + j {
                    j
                } else {
                    q
                }
            }
        })
        .unwrap()
    }

    fn cerny(n: usize) -> Dfa {
        Dfa::from_fn(n, ["a", "b"], |q, a| match (q, a) {
            (0, 0) => 1,
            (q, 0) => q,
            (q, _) => (q + 1) % n,
        })
        .unwrap()
    }

    #[test]
    fn marking_trace_matches_table() {
        let d = l_2_3();
        let out = decide_k_sink(&d, 3).unwrap();
        assert_eq!(out.winner, Winner::Alice);
        let Certificate::Marking(m) = &out.certificate else { panic!() };
        assert_eq!(
            m.firm,
            vec![Some(0), Some(1), Some(2), Some(3), Some(3), Some(3)]
        );
        assert_eq!(m.iterations, 3);
        assert!(m.check(&d));

        let out = decide_k_sink(&d, 4).unwrap();
        assert_eq!(out.winner, Winner::Bob);
        let Certificate::Marking(m) = &out.certificate else { panic!() };
        assert_eq!(m.iterations, 1);
        assert_eq!(m.preliminary[1..4], [Some(1), Some(1), Some(1)]);
        assert_eq!(m.outside_preliminary(), vec![4, 5]);
    }

    #[test]
    fn omega_sink_criterion() {
        let line = Dfa::from_fn(5, ["a"], |q, _| q.saturating_sub(1)).unwrap();
        assert!(decide_omega_sink(&line).alice_wins());
        let two_sinks = Dfa::from_fn(3, ["a"], |q, _| if q == 2 { 1 } else { q }).unwrap();
        assert!(matches!(
            decide_omega_sink(&two_sinks).certificate,
            Certificate::SinkCount { .. }
        ));
        assert!(!decide_omega_sink(&l_2_3()).alice_wins());
    }

    #[test]
    fn cerny_hierarchy() {
        for n in 3..6 {
            let c = cerny(n);
            assert!(decide_k(&c, 1).unwrap().alice_wins());
            let bob = decide_k(&c, 2).unwrap();
            assert_eq!(bob.winner, Winner::Bob);
            assert!(bob.witness_pair.is_some());
            assert_eq!(game_level(&c).unwrap(), Level::Finite(1));
        }
    }

    #[test]
    fn level_of_non_synchronizing() {
        let perm = Dfa::from_fn(3, ["a"], |q, _| (q + 1) % 3).unwrap();
        assert_eq!(game_level(&perm).unwrap(), Level::NotSynchronizing);
        let line = Dfa::from_fn(4, ["a"], |q, _| q.saturating_sub(1)).unwrap();
        assert_eq!(game_level(&line).unwrap(), Level::Omega);
    }

    #[test]
    fn kbound_parsing() {
        assert_eq!("omega".parse::<KBound>().unwrap(), KBound::Omega);
        assert_eq!("3".parse::<KBound>().unwrap(), KBound::Finite(3));
        assert!("0".parse::<KBound>().is_err());
        assert!("x".parse::<KBound>().is_err());
        assert!(KBound::Finite(1).allows(0));
        assert!(!KBound::Finite(1).allows(1));
    }

    #[test]
    fn large_k_saturates() {
        let c = cerny(4);
        let a = decide_k(&c, 6).unwrap();
        let b = decide_k(&c, 1000).unwrap();
        assert_eq!(a.winner, b.winner);
    }
}
