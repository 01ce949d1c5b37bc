//! Brute-force ground truth, kept independent of the solver: nothing here uses
//! the pair automaton, the marking procedure or the SCC code.

use std::collections::VecDeque;

use rand::{Rng, RngExt};

use crate::automaton::{Dfa, PairAutomaton, Word};
use crate::error::{Error, Result};
use crate::solver::{KBound, Winner};

/// Default bound on `n` for subset searches.
pub const DEFAULT_RT_CAP: usize = 20;
/// Default bound on the number of pair positions for [`decide_k_bruteforce`].
pub const DEFAULT_PAIR_POSITION_CAP: usize = 2048;
/// Largest `n` accepted by [`decide_full_position_bruteforce`].
pub const FULL_POSITION_CAP: usize = 10;
/// Default bound on the number of automata [`enumerate_dfas`] may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetBfsResult {
    pub rt: usize,
    /// Lexicographically least among the shortest reset words.
    pub witness: Word,
}

fn image_mask(dfa: &Dfa, mask: u32, a: usize) -> u32 {
    let mut out = 0u32;
    let mut rest = mask;
    while rest != 0 {
        let q = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << dfa.step(q, a);
    }
    out
}

/// Exact reset threshold by breadth-first search over subsets, starting from
/// the full state set.
pub fn rt_exact(dfa: &Dfa) -> Result<SubsetBfsResult> {
    rt_exact_with_cap(dfa, DEFAULT_RT_CAP)
}

pub fn rt_exact_with_cap(dfa: &Dfa, cap: usize) -> Result<SubsetBfsResult> {
    let n = dfa.n();
    if n > cap.min(30) {
        return Err(Error::cap("subset search states", n as u128, cap.min(30) as u128));
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![UNSEEN; 1usize << n];
    let mut via = vec![0u32; 1usize << n];
    parent[full as usize] = full;
    let mut queue = VecDeque::from([full]);
    while let Some(s) = queue.pop_front() {
        if s.count_ones() == 1 {
            let mut letters = Vec::new();
            let mut cur = s;
            while cur != full {
                letters.push(via[cur as usize] as usize);
                cur = parent[cur as usize];
            }
            letters.reverse();
            return Ok(SubsetBfsResult {
                rt: letters.len(),
                witness: Word::new(letters),
            });
        }
        for a in 0..dfa.num_letters() {
            let t = image_mask(dfa, s, a);
            if parent[t as usize] == UNSEEN {
                parent[t as usize] = s;
                via[t as usize] = a as u32;
                queue.push_back(t);
            }
        }
    }
    Err(Error::NotSynchronizing)
}

/// Ordered-pair encoding `p * n + q` with `p < q`; `n * n` stands for a merged
/// pair.
struct PairGame {
    n: usize,
    /// Reachable positions of each pair, including itself.
    ids: Vec<usize>,
}

impl PairGame {
    fn merged(&self) -> usize {
        self.n * self.n
    }

    fn step(&self, dfa: &Dfa, x: usize, a: usize) -> usize {
        if x == self.merged() {
            return x;
        }
        let (p, q) = (dfa.step(x / self.n, a), dfa.step(x % self.n, a));
        match p.cmp(&q) {
            std::cmp::Ordering::Equal => self.merged(),
            std::cmp::Ordering::Less => p * self.n + q,
            std::cmp::Ordering::Greater => q * self.n + p,
        }
    }

    fn ball(&self, dfa: &Dfa, x: usize, depth: Option<usize>) -> Vec<usize> {
        let mut seen = vec![false; self.merged() + 1];
        seen[x] = true;
        let mut out = vec![x];
        let mut layer = vec![x];
        let mut steps = 0;
        while !layer.is_empty() && depth.is_none_or(|d| steps < d) {
            let mut next = Vec::new();
            for &y in &layer {
                for a in 0..dfa.num_letters() {
                    let z = self.step(dfa, y, a);
                    if !seen[z] {
                        seen[z] = true;
                        out.push(z);
                        next.push(z);
                    }
                }
            }
            layer = next;
            steps += 1;
        }
        out
    }
}

fn bob_depth(k: KBound) -> Option<usize> {
    match k {
        KBound::Finite(k) => Some(k as usize - 1),
        KBound::Omega => None,
    }
}

/// Solves the game on two-token positions by a plain least fixpoint, Bob to
/// move first. Alice wins the whole game iff she wins from every two-token
/// position.
pub fn decide_k_bruteforce(dfa: &Dfa, k: KBound) -> Result<Winner> {
    decide_k_bruteforce_with_cap(dfa, k, DEFAULT_PAIR_POSITION_CAP)
}

pub fn decide_k_bruteforce_with_cap(dfa: &Dfa, k: KBound, cap: usize) -> Result<Winner> {
    if let KBound::Finite(0) = k {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = dfa.n();
    if n == 1 {
        return Ok(Winner::Alice);
    }
    let positions = n * (n - 1) / 2 + 1;
    if positions > cap {
        return Err(Error::cap("pair positions", positions as u128, cap as u128));
    }
    let game = PairGame {
        n,
        ids: (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| p * n + q))
            .collect(),
    };
    let size = game.merged() + 1;
    let depth = bob_depth(k);
    let balls: Vec<Vec<usize>> = (0..size)
        .map(|x| {
            if x == game.merged() || game.ids.binary_search(&x).is_ok() {
                game.ball(dfa, x, depth)
            } else {
                Vec::new()
            }
        })
        .collect();

    let mut alice_to_move = vec![false; size];
    let mut bob_to_move = vec![false; size];
    alice_to_move[game.merged()] = true;
    bob_to_move[game.merged()] = true;
    loop {
        let mut changed = false;
        for &x in &game.ids {
            if !alice_to_move[x]
                && (0..dfa.num_letters()).any(|a| bob_to_move[game.step(dfa, x, a)])
            {
                alice_to_move[x] = true;
                changed = true;
            }
        }
        for &x in &game.ids {
            if !bob_to_move[x] && balls[x].iter().all(|&y| alice_to_move[y]) {
                bob_to_move[x] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(if game.ids.iter().all(|&x| bob_to_move[x]) {
        Winner::Alice
    } else {
        Winner::Bob
    })
}

/// Solves the game on all token positions (subsets), Bob to move first from the
/// full set. `n ≤ 10`.
pub fn decide_full_position_bruteforce(dfa: &Dfa, k: KBound) -> Result<Winner> {
    if let KBound::Finite(0) = k {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = dfa.n();
    if n > FULL_POSITION_CAP {
        return Err(Error::cap("full-position states", n as u128, FULL_POSITION_CAP as u128));
    }
    let size = 1usize << n;
    let full = size - 1;
    let depth = bob_depth(k);
    let m = dfa.num_letters();
    let succ: Vec<Vec<u32>> = (0..size)
        .map(|s| (0..m).map(|a| image_mask(dfa, s as u32, a)).collect())
        .collect();
    let balls: Vec<Vec<usize>> = (1..size)
        .map(|s| {
            let mut seen = vec![false; size];
            seen[s] = true;
            let mut out = vec![s];
            let mut layer = vec![s];
            let mut steps = 0;
            while !layer.is_empty() && depth.is_none_or(|d| steps < d) {
                let mut next = Vec::new();
                for &t in &layer {
                    for &u in &succ[t] {
                        if !seen[u as usize] {
                            seen[u as usize] = true;
                            out.push(u as usize);
                            next.push(u as usize);
                        }
                    }
                }
                layer = next;
                steps += 1;
            }
            out
        })
        .collect();
    let ball = |s: usize| &balls[s - 1];

    let mut alice_to_move = vec![false; size];
    let mut bob_to_move = vec![false; size];
    for s in 1..size {
        if (s as u32).count_ones() == 1 {
            alice_to_move[s] = true;
            bob_to_move[s] = true;
        }
    }
    loop {
        let mut changed = false;
        for s in 1..size {
            if !alice_to_move[s] && succ[s].iter().any(|&t| bob_to_move[t as usize]) {
                alice_to_move[s] = true;
                changed = true;
            }
        }
        for s in 1..size {
            if !bob_to_move[s] && ball(s).iter().all(|&t| alice_to_move[t]) {
                bob_to_move[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(if bob_to_move[full] {
        Winner::Alice
    } else {
        Winner::Bob
    })
}

/// Letter names `a`, `b`, … used by enumeration and sampling.
pub fn default_letters(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x_{i}")
            }
        })
        .collect()
}

/// Number of transition tables on `n` states and `m` letters, `n^(n·m)`.
pub fn dfa_count(n: usize, m: usize) -> Option<u128> {
    (n as u128).checked_pow(u32::try_from(n * m).ok()?)
}

/// The automaton at position `index` of the enumeration order: the row-major
/// table read as a base-`n` numeral, last entry least significant.
pub fn dfa_at(n: usize, m: usize, index: u128) -> Dfa {
    let len = n * m;
    let mut table = vec![0usize; len];
    let mut rest = index;
    for slot in table.iter_mut().rev() {
        *slot = (rest % n as u128) as usize;
        rest /= n as u128;
    }
    Dfa::new(n, default_letters(m), table).expect("enumerated table is valid")
}

/// Every complete automaton on `n` states and `m` letters exactly once, in
/// lexicographic order of the row-major table.
pub fn enumerate_dfas(n: usize, m: usize) -> Result<impl Iterator<Item = Dfa>> {
    enumerate_dfas_with_budget(n, m, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_dfas_with_budget(
    n: usize,
    m: usize,
    budget: u128,
) -> Result<impl Iterator<Item = Dfa>> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and m >= 1".into()));
    }
    let count = dfa_count(n, m).filter(|&c| c <= budget).ok_or_else(|| {
        Error::cap("enumerated automata", dfa_count(n, m).unwrap_or(u128::MAX), budget)
    })?;
    let letters = default_letters(m);
    let len = n * m;
    let mut table = vec![0usize; len];
    let mut produced = 0u128;
    Ok(std::iter::from_fn(move || {
        if produced == count {
            return None;
        }
        let dfa = Dfa::new(n, letters.clone(), table.clone()).expect("valid table");
        produced += 1;
        for slot in table.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
        Some(dfa)
    }))
}

/// A uniformly random complete automaton.
pub fn random_dfa<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Dfa {
    let table = (0..n * m).map(|_| rng.random_range(0..n)).collect();
    Dfa::new(n, default_letters(m), table).expect("valid table")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamiltonVariant {
    /// The visited pairs are distinct, avoid the sink, and cover every pair.
    Forward,
    /// The walk ends at the sink after visiting every pair exactly once.
    Backward,
}

/// Checks that reading `w` from the pair at index `start` walks a Hamiltonian
/// path through the pairs of `pairs.base()`.
pub fn verify_hamiltonian(
    pairs: &PairAutomaton,
    start: usize,
    w: &[usize],
    variant: HamiltonVariant,
) -> bool {
    let base = pairs.base();
    let n = base.n();
    let total = n * (n - 1) / 2;
    let Some((p0, q0)) = pairs.pair(start) else {
        return false;
    };
    let mut visited = vec![false; n * n];
    let mut current = Some((p0.min(q0), p0.max(q0)));
    let mut distinct = 0usize;
    let mut trail = Vec::with_capacity(w.len() + 1);
    trail.push(current);
    for &a in w {
        current = current.and_then(|(p, q)| {
            let (x, y) = (base.step(p, a), base.step(q, a));
            (x != y).then(|| (x.min(y), x.max(y)))
        });
        trail.push(current);
    }
    let (body, end_ok) = match variant {
        HamiltonVariant::Forward => (&trail[..], true),
        HamiltonVariant::Backward => (&trail[..trail.len() - 1], trail.last() == Some(&None)),
    };
    for state in body {
        match state {
            None => return false,
            Some((p, q)) => {
                if std::mem::replace(&mut visited[p * n + q], true) {
                    return false;
                }
                distinct += 1;
            }
        }
    }
    end_ok && distinct == total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn rt_values() {
        assert_eq!(rt_exact(&families::cerny(5).unwrap()).unwrap().rt, 16);
        assert_eq!(rt_exact(&families::flower(6).unwrap()).unwrap().rt, 9);
        assert_eq!(rt_exact(&families::l_series(2, 2).unwrap()).unwrap().rt, 6);
        let r = rt_exact(&families::cerny(4).unwrap()).unwrap();
        assert_eq!(r.witness, families::cerny_reset_word(4));
        let perm = Dfa::from_fn(3, ["a"], |q, _| (q + 1) % 3).unwrap();
        assert_eq!(rt_exact(&perm), Err(Error::NotSynchronizing));
        let one = Dfa::from_fn(1, ["a"], |_, _| 0).unwrap();
        assert_eq!(rt_exact(&one).unwrap().rt, 0);
    }

    #[test]
    fn game_values() {
        let c3 = families::cerny(3).unwrap();
        assert_eq!(decide_k_bruteforce(&c3, KBound::Finite(1)).unwrap(), Winner::Alice);
        assert_eq!(decide_k_bruteforce(&c3, KBound::Finite(2)).unwrap(), Winner::Bob);
        assert_eq!(
            decide_full_position_bruteforce(&c3, KBound::Finite(2)).unwrap(),
            Winner::Bob
        );
        let e4 = families::e_series(4).unwrap();
        assert_eq!(decide_k_bruteforce(&e4, KBound::Finite(3)).unwrap(), Winner::Alice);
        assert_eq!(decide_k_bruteforce(&e4, KBound::Finite(4)).unwrap(), Winner::Bob);
        let b2 = families::b2();
        assert_eq!(decide_k_bruteforce(&b2, KBound::Omega).unwrap(), Winner::Alice);
        assert_eq!(decide_full_position_bruteforce(&b2, KBound::Omega).unwrap(), Winner::Alice);
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_dfas(2, 2).unwrap().count(), 16);
        assert_eq!(enumerate_dfas(3, 2).unwrap().count(), 729);
        let all: Vec<Dfa> = enumerate_dfas(2, 1).unwrap().collect();
        let rows: Vec<Vec<usize>> = all
            .iter()
            .map(|d| (0..2).map(|q| d.step(q, 0)).collect())
            .collect();
        assert_eq!(rows, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for (i, d) in enumerate_dfas(3, 1).unwrap().enumerate() {
            assert_eq!(d, dfa_at(3, 1, i as u128));
        }
        assert!(enumerate_dfas_with_budget(4, 2, 1000).is_err());
    }

    #[test]
    fn hamiltonian_words() {
        for n in 3..8 {
            let pairs = PairAutomaton::new(&families::cerny(n).unwrap()).unwrap();
            let wf = families::w_forward(n).unwrap();
            let wb = families::w_backward(n).unwrap();
            let sf = pairs.index(0, 1);
            let sb = pairs.index(n / 2 + 1, 1);
            assert!(verify_hamiltonian(&pairs, sf, &wf, HamiltonVariant::Forward));
            assert!(verify_hamiltonian(&pairs, sb, &wb, HamiltonVariant::Backward));
            assert!(!verify_hamiltonian(&pairs, sf, &wf[..wf.len() - 1], HamiltonVariant::Forward));
        }
    }
}
