//! Level function `d`, its component tree, the characteristic `χ(A) = (C_A, γ(A))`
//! and the avoiding-letter strategy for Alice in the ω-game.

mod profile;
pub mod steiner;
mod tree;

pub use profile::{level_profile, LevelProfile};
pub use tree::{component_tree, ComponentTree, Node};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::automaton::{greedy_reset_word, iterate, iteration_words, pair_index, Dfa, StateSet, Word};
use crate::error::{Error, Result};
use crate::solver::decide_m_omega;

/// Largest terminal count handed to the exact Steiner solver.
pub const GAMMA_TERMINAL_CAP: usize = 12;
/// Largest quotient graph handed to the exact Steiner solver.
pub const GAMMA_SUPERNODE_CAP: usize = 24;
/// Largest number of subsets explored when checking avoidance.
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Characteristic {
    /// Node id of `C_A` in the component tree.
    pub component: usize,
    pub gamma: u32,
}

impl Characteristic {
    pub fn is_trivial(&self) -> bool {
        self.gamma == 0
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(C{}, {})", self.component, self.gamma)
    }
}

/// A `γ`-minimizing graph, described on the quotient of `C_A` by its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTree {
    pub component: usize,
    pub level: u32,
    pub gamma: u32,
    /// Edges between positions in `children(component)`.
    pub superedges: Vec<(usize, usize)>,
    /// Pairs at level `level` realizing a superedge, by pair index. Any of
    /// them can serve as an edge of a minimizing graph.
    pub pivots: Vec<(usize, usize)>,
}

/// Exact `γ(A)` together with a witness graph.
pub fn gamma_tree(tree: &ComponentTree, profile: &LevelProfile, set: &StateSet) -> Result<GammaTree> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("γ of the empty set".into()));
    }
    let component = tree.least_containing(set);
    let node = tree.node(component);
    if node.children.is_empty() {
        return Ok(GammaTree {
            component,
            level: 0,
            gamma: 0,
            superedges: Vec::new(),
            pivots: Vec::new(),
        });
    }
    let level = node.h;
    let v = node.children.len();
    let mut class = vec![usize::MAX; profile.n()];
    for (i, &c) in node.children.iter().enumerate() {
        for q in tree.node(c).members.iter() {
            class[q] = i;
        }
    }
    let members = node.members.to_vec();
    let mut adj = vec![Vec::new(); v];
    let mut crossing: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for (j, &q) in members.iter().enumerate() {
        for &p in &members[..j] {
            let (a, b) = (class[p], class[q]);
            if a == b || profile.d(p, q) != Some(level) {
                continue;
            }
            let key = (a.min(b), a.max(b));
            crossing
                .entry(key)
                .or_insert_with(|| {
                    adj[key.0].push(key.1);
                    adj[key.1].push(key.0);
                    Vec::new()
                })
                .push((p, q));
        }
    }
    let mut terminals: Vec<usize> = set.iter().map(|q| class[q]).collect();
    terminals.sort_unstable();
    terminals.dedup();

    let superedges = if terminals.len() == v {
        spanning_tree(&adj)
    } else {
        if terminals.len() > GAMMA_TERMINAL_CAP {
            return Err(Error::cap("γ terminals", terminals.len() as u128, GAMMA_TERMINAL_CAP as u128));
        }
        if v > GAMMA_SUPERNODE_CAP {
            return Err(Error::cap("γ supernodes", v as u128, GAMMA_SUPERNODE_CAP as u128));
        }
        steiner::steiner_tree(&adj, &terminals)
            .expect("children of a component are connected at its level")
            .edges
    };
    let mut pivots: Vec<(usize, usize)> = superedges
        .iter()
        .flat_map(|e| crossing[e].iter().copied())
        .collect();
    pivots.sort_unstable_by_key(|&(p, q)| pair_index(p, q));
    Ok(GammaTree {
        component,
        level,
        gamma: superedges.len() as u32,
        superedges,
        pivots,
    })
}

fn spanning_tree(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                out.push((x.min(y), x.max(y)));
                queue.push_back(y);
            }
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "quotient graph is connected");
    out.sort_unstable();
    out
}

pub fn gamma(tree: &ComponentTree, profile: &LevelProfile, set: &StateSet) -> Result<u32> {
    Ok(gamma_tree(tree, profile, set)?.gamma)
}

pub fn characteristic(
    tree: &ComponentTree,
    profile: &LevelProfile,
    set: &StateSet,
) -> Result<Characteristic> {
    let g = gamma_tree(tree, profile, set)?;
    Ok(Characteristic {
        component: g.component,
        gamma: g.gamma,
    })
}

/// A letter `x` such that `A·x` avoids `χ(A)`: a letter lowering the level of
/// some top-level edge of a minimizing graph.
pub fn avoiding_letter(
    tree: &ComponentTree,
    profile: &LevelProfile,
    dfa: &Dfa,
    set: &StateSet,
) -> Result<usize> {
    if set.len() < 2 {
        return Err(Error::Precondition("position is already a singleton".into()));
    }
    let g = gamma_tree(tree, profile, set)?;
    // Lowest letter lowering the level of some pivot; ties between pivots do
    // not matter since every pivot fits into a minimizing graph.
    (0..dfa.num_letters())
        .find(|&x| {
            g.pivots.iter().any(|&(p, q)| {
                profile
                    .d(dfa.step(p, x), dfa.step(q, x))
                    .is_some_and(|d| d < g.level)
            })
        })
        .ok_or_else(|| Error::Precondition("level function has no descending letter".into()))
}

/// Whether no set reachable from `start` under `closure` has characteristic
/// `chi`. `closure` must have the same states as the automaton the tree was
/// built for and generate the same transition monoid.
pub fn avoids(
    closure: &Dfa,
    tree: &ComponentTree,
    profile: &LevelProfile,
    start: &StateSet,
    chi: Characteristic,
    cap: usize,
) -> Result<bool> {
    let mut seen: HashSet<StateSet> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(set) = queue.pop_front() {
        if tree.least_containing(&set) == chi.component
            && characteristic(tree, profile, &set)? == chi
        {
            return Ok(false);
        }
        for a in 0..closure.num_letters() {
            let next = closure.step_set(&set, a);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(Error::cap("avoidance closure", seen.len() as u128 + 1, cap as u128));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(true)
}

/// Profile and tree of an automaton in which Alice wins the ω-game.
#[derive(Clone, Debug)]
pub struct Potential {
    dfa: Dfa,
    profile: LevelProfile,
    tree: ComponentTree,
}

impl Potential {
    pub fn new(dfa: &Dfa) -> Result<Self> {
        let profile = level_profile(dfa)?;
        if !profile.all_finite() {
            return Err(Error::Precondition(
                "Alice does not win the ω-game on this automaton".into(),
            ));
        }
        let tree = component_tree(&profile)?;
        Ok(Potential {
            dfa: dfa.clone(),
            profile,
            tree,
        })
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn profile(&self) -> &LevelProfile {
        &self.profile
    }

    pub fn tree(&self) -> &ComponentTree {
        &self.tree
    }

    pub fn gamma(&self, set: &StateSet) -> Result<u32> {
        gamma(&self.tree, &self.profile, set)
    }

    pub fn characteristic(&self, set: &StateSet) -> Result<Characteristic> {
        characteristic(&self.tree, &self.profile, set)
    }

    pub fn avoiding_letter(&self, set: &StateSet) -> Result<usize> {
        avoiding_letter(&self.tree, &self.profile, &self.dfa, set)
    }

    pub fn avoids(&self, start: &StateSet, chi: Characteristic) -> Result<bool> {
        avoids(&self.dfa, &self.tree, &self.profile, start, chi, DEFAULT_CLOSURE_CAP)
    }
}

fn require_m_omega(dfa: &Dfa, m: usize) -> Result<()> {
    if decide_m_omega(dfa, m)?.alice_wins() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "Alice does not win the {m}/ω-game on this automaton"
        )))
    }
}

/// A base letter `x` such that `Q·x` avoids `χ(Q)` in the `m`-th iteration.
pub fn first_letter_iterated(dfa: &Dfa, m: usize) -> Result<usize> {
    require_m_omega(dfa, m)?;
    if dfa.n() < 2 {
        return Err(Error::Precondition("a one-state automaton needs no move".into()));
    }
    let pot = Potential::new(&iterate(dfa, m)?)?;
    first_letter_in(dfa, m, &pot)
}

fn first_letter_in(dfa: &Dfa, m: usize, pot: &Potential) -> Result<usize> {
    let full = StateSet::full(dfa.n());
    if m == 1 {
        return pot.avoiding_letter(&full);
    }
    let tree = pot.tree();
    let root = tree.root();
    let class = |q: usize| tree.child_index(root, q).expect("state below the root");
    let mut p = 0;
    let mut q = (1..dfa.n())
        .find(|&q| class(q) != class(0))
        .expect("root has at least two children");
    let reset = greedy_reset_word(dfa)?;
    let x = reset
        .iter()
        .copied()
        .find(|&a| {
            let (np, nq) = (dfa.step(p, a), dfa.step(q, a));
            if class(np) == class(nq) {
                return true;
            }
            (p, q) = (np, nq);
            false
        })
        .expect("a reset word merges every pair");
    // Base letters are the first letters of the iteration, and words over the
    // base alphabet reach the same subsets as words over the iterated one.
    let chi = pot.characteristic(&full)?;
    if avoids(dfa, tree, pot.profile(), &dfa.step_set(&full, x), chi, DEFAULT_CLOSURE_CAP)? {
        Ok(x)
    } else {
        Err(Error::Precondition(format!(
            "letter {} does not avoid the characteristic of Q",
            dfa.letter_name(x)
        )))
    }
}

/// A reset word produced by Alice's avoidance strategy in the `m`-th
/// iteration when Bob always passes. Its length is at most `m(n−2)+1`.
pub fn extract_reset_word(dfa: &Dfa, m: usize) -> Result<Word> {
    require_m_omega(dfa, m)?;
    let n = dfa.n();
    if n < 2 {
        return Ok(Word::empty());
    }
    let iterated = iterate(dfa, m)?;
    let pot = Potential::new(&iterated)?;
    let words = iteration_words(dfa.num_letters(), m);

    let x = first_letter_in(dfa, m, &pot)?;
    let mut word = Word::new(vec![x]);
    let mut current = dfa.step_set(&StateSet::full(n), x);
    let mut moves = 1;
    while current.len() > 1 {
        let y = pot.avoiding_letter(&current)?;
        word.extend_from(&words[y]);
        current = iterated.step_set(&current, y);
        moves += 1;
        assert!(moves < n, "avoidance strategy exceeded n-1 moves");
    }
    Ok(word)
}

#[cfg(test)]
mod tests;
