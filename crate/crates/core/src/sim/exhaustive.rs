use std::collections::{HashMap, HashSet, VecDeque};

use crate::automaton::{Dfa, StateSet};
use crate::error::{Error, Result};
use crate::solver::KBound;

/// Default cap on the number of Bob-to-move positions explored.
pub const DEFAULT_POSITION_CAP: usize = 1 << 16;

enum Mark {
    Open,
    Done(Option<usize>),
}

struct Search<'a, F> {
    dfa: &'a Dfa,
    limit: Option<usize>,
    choose: F,
    cap: usize,
    marks: HashMap<StateSet, Mark>,
}

impl<F: FnMut(&StateSet) -> Result<usize>> Search<'_, F> {
    /// Sets Bob can produce from `from` with a legal word.
    fn bob_options(&self, from: &StateSet) -> Vec<StateSet> {
        let mut seen = HashSet::from([from.clone()]);
        let mut out = vec![from.clone()];
        let mut queue = VecDeque::from([(from.clone(), 0usize)]);
        while let Some((set, depth)) = queue.pop_front() {
            if self.limit.is_some_and(|l| depth >= l) {
                continue;
            }
            for a in 0..self.dfa.num_letters() {
                let next = self.dfa.step_set(&set, a);
                if seen.insert(next.clone()) {
                    out.push(next.clone());
                    queue.push_back((next, depth + 1));
                }
            }
        }
        out
    }

    /// Most Alice moves Bob can force from a Bob-to-move position, `None`
    /// when Bob can avoid losing forever.
    fn value(&mut self, pos: &StateSet) -> Result<Option<usize>> {
        match self.marks.get(pos) {
            Some(Mark::Open) => return Ok(None),
            Some(Mark::Done(v)) => return Ok(*v),
            None => {}
        }
        if self.marks.len() >= self.cap {
            return Err(Error::cap("game positions", self.marks.len() as u128 + 1, self.cap as u128));
        }
        self.marks.insert(pos.clone(), Mark::Open);
        let mut worst = Some(0);
        for b in self.bob_options(pos) {
            if b.len() <= 1 {
                continue;
            }
            let x = (self.choose)(&b)?;
            let c = self.dfa.step_set(&b, x);
            let v = if c.len() <= 1 {
                Some(1)
            } else {
                self.value(&c)?.map(|v| v + 1)
            };
            worst = match (worst, v) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            if worst.is_none() {
                break;
            }
        }
        self.marks.insert(pos.clone(), Mark::Done(worst));
        Ok(worst)
    }
}

/// The largest number of moves a positional Alice strategy needs against every
/// Bob, Bob moving first from the full position; `None` if some Bob survives
/// forever.
pub fn worst_case_alice_moves(
    dfa: &Dfa,
    k: KBound,
    choose: impl FnMut(&StateSet) -> Result<usize>,
    cap: usize,
) -> Result<Option<usize>> {
    let full = StateSet::full(dfa.n());
    if full.len() <= 1 {
        return Ok(Some(0));
    }
    let limit = match k {
        KBound::Finite(k) => Some(k as usize - 1),
        KBound::Omega => None,
    };
    let mut search = Search {
        dfa,
        limit,
        choose,
        cap,
        marks: HashMap::new(),
    };
    search.value(&full)
}
