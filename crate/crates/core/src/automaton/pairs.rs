use super::{Dfa, StateSet, Word};
use crate::error::{Error, Result};

/// Default upper bound on the number of pair states `C(n,2)+1`.
pub const DEFAULT_PAIR_CAP: usize = 1 << 22;

/// The 2-subset automaton: states are the unordered pairs `{p,q}` of the base
/// automaton plus a sink `s` receiving every pair that merges.
#[derive(Clone, Debug)]
pub struct PairAutomaton {
    base: Dfa,
    dfa: Dfa,
    decode: Vec<(u32, u32)>,
}

/// Index of the pair `{p,q}`, `p != q`, in colexicographic order.
#[inline]
pub fn pair_index(p: usize, q: usize) -> usize {
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    debug_assert!(lo != hi);
    hi * (hi - 1) / 2 + lo
}

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl PairAutomaton {
    pub fn new(base: &Dfa) -> Result<Self> {
        Self::with_cap(base, DEFAULT_PAIR_CAP)
    }

    pub fn with_cap(base: &Dfa, cap: usize) -> Result<Self> {
        let n = base.n();
        if n < 2 {
            return Err(Error::Precondition(
                "2-subset automaton needs at least two states".into(),
            ));
        }
        let states = num_pairs(n) + 1;
        if states > cap {
            return Err(Error::cap("pair automaton states", states as u128, cap as u128));
        }
        let sink = states - 1;
        let m = base.num_letters();
        let mut decode = Vec::with_capacity(sink);
        for hi in 1..n {
            for lo in 0..hi {
                decode.push((lo as u32, hi as u32));
            }
        }
        let mut delta = Vec::with_capacity(states * m);
        for &(p, q) in &decode {
            for a in 0..m {
                let (x, y) = (base.step(p as usize, a), base.step(q as usize, a));
                let t = if x == y { sink } else { pair_index(x, y) };
                delta.push(t as u32);
            }
        }
        delta.extend(std::iter::repeat_n(sink as u32, m));
        let dfa = Dfa::from_raw(states, base.letters().to_vec(), delta);
        Ok(PairAutomaton {
            base: base.clone(),
            dfa,
            decode,
        })
    }

    pub fn base(&self) -> &Dfa {
        &self.base
    }

    /// The pair automaton as a plain automaton.
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn sink(&self) -> usize {
        self.decode.len()
    }

    pub fn index(&self, p: usize, q: usize) -> usize {
        pair_index(p, q)
    }

    /// The pair at index `i`, or `None` for the sink.
    pub fn pair(&self, i: usize) -> Option<(usize, usize)> {
        self.decode.get(i).map(|&(p, q)| (p as usize, q as usize))
    }

    /// Pair-state of a two-element set, or the sink for a singleton.
    pub fn state_of(&self, set: &StateSet) -> usize {
        let mut it = set.iter();
        let p = it.next().expect("nonempty set");
        match it.next() {
            None => self.sink(),
            Some(q) => {
                debug_assert!(it.next().is_none(), "set has more than two states");
                pair_index(p, q)
            }
        }
    }

    /// All pair-states `{p,q}` with `p, q` in `set`.
    pub fn pairs_within(&self, set: &StateSet) -> Vec<usize> {
        let members = set.to_vec();
        let mut out = Vec::with_capacity(members.len() * members.len() / 2);
        for (i, &q) in members.iter().enumerate() {
            for &p in &members[..i] {
                out.push(pair_index(p, q));
            }
        }
        out
    }

    pub fn describe(&self, i: usize) -> String {
        match self.pair(i) {
            Some((p, q)) => format!("{{{p},{q}}}"),
            None => "s".to_string(),
        }
    }
}

/// Whether some word resets the automaton (every pair can be merged).
pub fn is_synchronizing(dfa: &Dfa) -> Result<bool> {
    if dfa.n() == 1 {
        return Ok(true);
    }
    let pairs = PairAutomaton::new(dfa)?;
    let d = pairs.dfa();
    let (offsets, sources) = d.reverse_edges();
    let mut seen = StateSet::singleton(d.n(), pairs.sink());
    let mut stack = vec![pairs.sink()];
    while let Some(t) = stack.pop() {
        for &p in &sources[offsets[t]..offsets[t + 1]] {
            if seen.insert(p as usize) {
                stack.push(p as usize);
            }
        }
    }
    Ok(seen.len() == d.n())
}

/// Some reset word, built by repeatedly merging the two lowest surviving states
/// along a shortest path in the pair automaton. Not minimal in general.
pub fn greedy_reset_word(dfa: &Dfa) -> Result<Word> {
    let mut word = Word::empty();
    if dfa.n() == 1 {
        return Ok(word);
    }
    let pairs = PairAutomaton::new(dfa)?;
    let sink = StateSet::singleton(pairs.dfa().n(), pairs.sink());
    let mut current = StateSet::full(dfa.n());
    while current.len() > 1 {
        let (p, q) = {
            let mut it = current.iter();
            (it.next().expect("two states"), it.next().expect("two states"))
        };
        let w = pairs
            .dfa()
            .shortest_word_into(pairs.index(p, q), &sink)
            .ok_or(Error::NotSynchronizing)?;
        current = dfa.apply_set(&current, &w);
        word.extend_from(&w);
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_a_bijection() {
        let n = 7;
        let mut seen = vec![false; num_pairs(n)];
        for q in 1..n {
            for p in 0..q {
                let i = pair_index(p, q);
                assert_eq!(i, pair_index(q, p));
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn projection_consistency() {
        let d = Dfa::from_fn(6, ["a", "b"], |q, a| match (q, a) {
            (0, 0) => 1,
            (q, 0) => q,
            (q, _) => (q + 1) % 6,
        })
        .unwrap();
        let pa = PairAutomaton::new(&d).unwrap();
        assert_eq!(pa.dfa().n(), 16);
        for i in 0..pa.sink() {
            let (p, q) = pa.pair(i).unwrap();
            for a in 0..2 {
                let t = pa.dfa().step(i, a);
                let (x, y) = (d.step(p, a), d.step(q, a));
                if x == y {
                    assert_eq!(t, pa.sink());
                } else {
                    assert_eq!(pa.pair(t), Some((x.min(y), x.max(y))));
                }
            }
        }
        assert!(pa.dfa().is_sink(pa.sink()));
        assert!(is_synchronizing(&d).unwrap());
    }

    #[test]
    fn greedy_word_resets() {
        let d = Dfa::from_fn(5, ["a", "b"], |q, a| match (q, a) {
            (0, 0) => 1,
            (q, 0) => q,
            (q, _) => (q + 1) % 5,
        })
        .unwrap();
        let w = greedy_reset_word(&d).unwrap();
        assert!(d.is_reset_word(&w));
        let perm = Dfa::from_fn(3, ["a"], |q, _| (q + 1) % 3).unwrap();
        assert_eq!(greedy_reset_word(&perm), Err(Error::NotSynchronizing));
    }

    #[test]
    fn permutation_is_not_synchronizing() {
        let d = Dfa::from_fn(3, ["a"], |q, _| (q + 1) % 3).unwrap();
        assert!(!is_synchronizing(&d).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let d = Dfa::from_fn(100, ["a"], |q, _| q).unwrap();
        assert!(matches!(
            PairAutomaton::with_cap(&d, 100),
            Err(Error::CapExceeded { .. })
        ));
    }
}
