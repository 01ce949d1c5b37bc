use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;

use super::StateSet;
use crate::error::{Error, Result};

/// Largest state count accepted by [`Dfa::new`].
pub const MAX_STATES: usize = 1 << 16;

/// A sequence of letter indices. The empty word is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    /// `letter` repeated `times` times.
    pub fn repeat_letter(letter: usize, times: usize) -> Self {
        Word(vec![letter; times])
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    /// `self` repeated `times` times.
    pub fn power(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for Word {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl FromIterator<usize> for Word {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A complete deterministic finite automaton over states `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    n: usize,
    letters: Vec<String>,
    /// Row-major: `delta[q * m + a]`.
    delta: Vec<u32>,
}

fn check_letter_name(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::InvalidDfa("empty letter name".into()));
    }
    if name == "-" {
        return Err(Error::InvalidDfa("`-` is reserved for the empty word".into()));
    }
    if name.chars().any(|c| c.is_whitespace() || c == '#') {
        return Err(Error::InvalidDfa(format!(
            "letter name {name:?} contains whitespace or '#'"
        )));
    }
    Ok(())
}

impl Dfa {
    /// Builds an automaton from a row-major table `delta[q * letters.len() + a]`.
    pub fn new(n: usize, letters: Vec<String>, delta: Vec<usize>) -> Result<Self> {
        Self::new_with_limit(n, letters, delta, MAX_STATES)
    }

    pub(crate) fn new_with_limit(
        n: usize,
        letters: Vec<String>,
        delta: Vec<usize>,
        max_states: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDfa("automaton needs at least one state".into()));
        }
        if n > max_states {
            return Err(Error::cap("state count", n as u128, max_states as u128));
        }
        if letters.is_empty() {
            return Err(Error::InvalidDfa("automaton needs at least one letter".into()));
        }
        for (i, name) in letters.iter().enumerate() {
            check_letter_name(name)?;
            if letters[..i].contains(name) {
                return Err(Error::InvalidDfa(format!("duplicate letter name {name:?}")));
            }
        }
        let m = letters.len();
        if delta.len() != n * m {
            return Err(Error::InvalidDfa(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                n * m
            )));
        }
        if let Some(pos) = delta.iter().position(|&t| t >= n) {
            return Err(Error::InvalidDfa(format!(
                "state {} letter {}: target {} out of range",
                pos / m,
                letters[pos % m],
                delta[pos]
            )));
        }
        Ok(Dfa {
            n,
            letters,
            delta: delta.into_iter().map(|t| t as u32).collect(),
        })
    }

    /// Builds an automaton from a transition function.
    pub fn from_fn<S: Into<String>>(
        n: usize,
        letters: impl IntoIterator<Item = S>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        let m = letters.len();
        let delta = (0..n * m).map(|i| f(i / m, i % m)).collect();
        Self::new(n, letters, delta)
    }

    /// Internal constructor for derived automata whose table is valid by
    /// construction; skips the state limit.
    pub(crate) fn from_raw(n: usize, letters: Vec<String>, delta: Vec<u32>) -> Self {
        debug_assert_eq!(delta.len(), n * letters.len());
        debug_assert!(delta.iter().all(|&t| (t as usize) < n));
        Dfa { n, letters, delta }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter_name(&self, a: usize) -> &str {
        &self.letters[a]
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    #[inline]
    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.letters.len() + a] as usize
    }

    /// Targets of `q` under every letter, in letter order.
    #[inline]
    pub fn row(&self, q: usize) -> &[u32] {
        let m = self.letters.len();
        &self.delta[q * m..(q + 1) * m]
    }

    pub fn apply(&self, q: usize, w: &[usize]) -> usize {
        w.iter().fold(q, |p, &a| self.step(p, a))
    }

    pub fn step_set(&self, set: &StateSet, a: usize) -> StateSet {
        StateSet::from_states(self.n, set.iter().map(|q| self.step(q, a)))
    }

    pub fn apply_set(&self, set: &StateSet, w: &[usize]) -> StateSet {
        let mut current = set.clone();
        for &a in w {
            current = self.step_set(&current, a);
        }
        current
    }

    /// Whether `w` sends every state to the same state.
    pub fn is_reset_word(&self, w: &[usize]) -> bool {
        let target = self.apply(0, w);
        (1..self.n).all(|q| self.apply(q, w) == target)
    }

    /// States with a one-letter edge into `target`.
    pub fn preimage(&self, target: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for q in 0..self.n {
            if self.row(q).iter().any(|&t| target.contains(t as usize)) {
                out.insert(q);
            }
        }
        out
    }

    /// States `q·w` for all words with `|w| <= depth`.
    pub fn reach_within(&self, q: usize, depth: usize) -> StateSet {
        let mut seen = StateSet::singleton(self.n, q);
        let mut frontier = vec![q];
        let mut next = Vec::new();
        for _ in 0..depth {
            for &p in &frontier {
                for &t in self.row(p) {
                    if seen.insert(t as usize) {
                        next.push(t as usize);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            std::mem::swap(&mut frontier, &mut next);
            next.clear();
        }
        seen
    }

    /// Full forward closure of `q`.
    pub fn reachable_from(&self, q: usize) -> StateSet {
        self.reach_within(q, self.n)
    }

    pub fn is_sink(&self, q: usize) -> bool {
        self.row(q).iter().all(|&t| t as usize == q)
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.is_sink(q)).collect()
    }

    /// For every state, the states with an edge into it (with multiplicity, in
    /// increasing source order). Compressed layout: `(offsets, sources)`.
    pub(crate) fn reverse_edges(&self) -> (Vec<usize>, Vec<u32>) {
        let mut offsets = vec![0usize; self.n + 1];
        for &t in &self.delta {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..self.n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut sources = vec![0u32; self.delta.len()];
        let m = self.letters.len();
        for (i, &t) in self.delta.iter().enumerate() {
            sources[fill[t as usize]] = (i / m) as u32;
            fill[t as usize] += 1;
        }
        (offsets, sources)
    }

    /// Shortest words (BFS, lowest letter first) from `q` to every reachable state.
    pub(crate) fn bfs_paths(&self, q: usize) -> Vec<Option<(usize, usize)>> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.n];
        let mut seen = StateSet::singleton(self.n, q);
        let mut queue = VecDeque::from([q]);
        while let Some(p) = queue.pop_front() {
            for (a, &t) in self.row(p).iter().enumerate() {
                let t = t as usize;
                if seen.insert(t) {
                    parent[t] = Some((p, a));
                    queue.push_back(t);
                }
            }
        }
        parent
    }

    /// A shortest word from `from` into `targets`, if one exists.
    pub fn shortest_word_into(&self, from: usize, targets: &StateSet) -> Option<Word> {
        if targets.contains(from) {
            return Some(Word::empty());
        }
        let parent = self.bfs_paths(from);
        // BFS order is by distance, so pick the target whose path is shortest.
        let mut best: Option<(usize, usize)> = None;
        for t in targets.iter() {
            if parent[t].is_none() {
                continue;
            }
            let mut len = 0;
            let mut cur = t;
            while cur != from {
                cur = parent[cur].expect("path").0;
                len += 1;
            }
            if best.is_none_or(|(l, _)| len < l) {
                best = Some((len, t));
            }
        }
        let (_, mut cur) = best?;
        let mut letters = Vec::new();
        while cur != from {
            let (p, a) = parent[cur].expect("path");
            letters.push(a);
            cur = p;
        }
        letters.reverse();
        Some(Word(letters))
    }

    /// Parses whitespace-separated letter names; `-` alone is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() || tokens == ["-"] {
            return Ok(Word::empty());
        }
        tokens
            .iter()
            .map(|t| {
                self.letter_index(t)
                    .ok_or_else(|| Error::InvalidWord(format!("unknown letter {t:?}")))
            })
            .collect()
    }

    /// Space-separated letter names, or `-` for the empty word.
    pub fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "-".to_string();
        }
        w.iter()
            .map(|&a| self.letters[a].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Letter names concatenated without separators when all are single
    /// characters, space-separated otherwise.
    pub fn format_word_compact(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "-".to_string();
        }
        if self.letters.iter().all(|l| l.chars().count() == 1) {
            w.iter().map(|&a| self.letters[a].as_str()).collect()
        } else {
            self.format_word(w)
        }
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::io::serialize_dfa(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cerny(n: usize) -> Dfa {
        Dfa::from_fn(n, ["a", "b"], |q, a| match (q, a) {
            (0, 0) => 1,
            (q, 0) => q,
            (q, _) => (q + 1) % n,
        })
        .unwrap()
    }

    #[test]
    fn apply_traces_cerny() {
        let c4 = cerny(4);
        let w = c4.parse_word("a b b b a").unwrap();
        assert_eq!(c4.apply(0, &w), 1);
        assert_eq!(c4.apply(2, &Word::empty()), 2);
    }

    #[test]
    fn apply_set_merges() {
        let c5 = cerny(5);
        let p = StateSet::from_states(5, [0, 1]);
        let w = c5.parse_word("a b").unwrap();
        assert_eq!(c5.apply_set(&p, &w).to_vec(), vec![2]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Dfa::new(2, vec!["a".into()], vec![0, 2]).is_err());
        assert!(Dfa::new(2, vec!["a".into(), "a".into()], vec![0; 4]).is_err());
        assert!(Dfa::new(0, vec!["a".into()], vec![]).is_err());
        assert!(Dfa::new(1, vec![], vec![]).is_err());
        assert!(Dfa::new(1, vec!["x#".into()], vec![0]).is_err());
        assert!(Dfa::new(1, vec!["-".into()], vec![0]).is_err());
    }

    #[test]
    fn preimage_and_reach() {
        let c4 = cerny(4);
        let f = StateSet::singleton(4, 1);
        assert_eq!(c4.preimage(&f).to_vec(), vec![0, 1]);
        assert!(c4.preimage(&StateSet::empty(4)).is_empty());
        assert_eq!(c4.preimage(&StateSet::full(4)).len(), 4);
        assert_eq!(c4.reach_within(2, 0).to_vec(), vec![2]);
        assert_eq!(c4.reach_within(2, 1).to_vec(), vec![2, 3]);
        assert_eq!(c4.reach_within(2, 100).len(), 4);
    }

    #[test]
    fn reset_word_and_words() {
        let c4 = cerny(4);
        let w = c4.parse_word("a b b b a b b b a").unwrap();
        assert!(c4.is_reset_word(&w));
        assert_eq!(c4.format_word(&w[..2]), "a b");
        assert_eq!(c4.format_word_compact(&w[..2]), "ab");
        assert_eq!(c4.parse_word("-").unwrap(), Word::empty());
        assert!(c4.parse_word("a z").is_err());
        assert_eq!(
            c4.shortest_word_into(2, &StateSet::singleton(4, 0)).unwrap().len(),
            2
        );
    }

    #[test]
    fn reverse_edges_cover_table() {
        let c3 = cerny(3);
        let (off, src) = c3.reverse_edges();
        assert_eq!(off[3], 6);
        let into1: Vec<u32> = src[off[1]..off[2]].to_vec();
        assert_eq!(into1, vec![0, 0, 1]);
    }
}
