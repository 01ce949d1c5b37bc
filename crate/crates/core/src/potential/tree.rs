use super::LevelProfile;
use crate::automaton::{num_pairs, StateSet};
use crate::error::{Error, Result};

/// A component of some graph `(Q, E_ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub members: StateSet,
    /// Least `ℓ` at which this set is a component.
    pub h: u32,
    /// The components of level `h - 1` partitioning this one, ordered by
    /// least member. Empty for leaves.
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

/// All components of all levels, nested by inclusion. Leaves are the
/// singletons `{q}` with node id `q`; the root is `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTree {
    nodes: Vec<Node>,
    root: usize,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Builds the component tree from a profile with no infinite entries.
pub fn component_tree(profile: &LevelProfile) -> Result<ComponentTree> {
    if !profile.all_finite() {
        return Err(Error::Precondition(
            "component tree needs every pair at a finite level".into(),
        ));
    }
    let n = profile.n();
    if n == 0 {
        return Err(Error::InvalidDfa("automaton has no states".into()));
    }
    let mut nodes: Vec<Node> = (0..n)
        .map(|q| Node {
            members: StateSet::singleton(n, q),
            h: 0,
            children: Vec::new(),
            parent: None,
        })
        .collect();

    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); profile.max_finite() as usize + 1];
    for i in 0..num_pairs(n) {
        let d = profile.level_of_pair(i).expect("finite profile");
        by_level[d as usize].push(i);
    }
    let decode: Vec<(usize, usize)> = (1..n).flat_map(|q| (0..q).map(move |p| (p, q))).collect();

    let mut dsu = Dsu((0..n).collect());
    // Current top node for each state.
    let mut top: Vec<usize> = (0..n).collect();
    for (level, edges) in by_level.iter().enumerate().skip(1) {
        if edges.is_empty() {
            continue;
        }
        for &i in edges {
            let (p, q) = decode[i];
            dsu.union(p, q);
        }
        // Group the current top nodes by their new representative.
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for q in 0..n {
            let node = top[q];
            if nodes[node].members.first() != Some(q) {
                continue;
            }
            let rep = dsu.find(q);
            match groups.iter_mut().find(|(r, _)| *r == rep) {
                Some((_, g)) => g.push(node),
                None => groups.push((rep, vec![node])),
            }
        }
        for (_, children) in groups {
            if children.len() < 2 {
                continue;
            }
            let id = nodes.len();
            let mut members = StateSet::empty(n);
            for &c in &children {
                members.union_with(&nodes[c].members);
                nodes[c].parent = Some(id);
            }
            for q in members.iter() {
                top[q] = id;
            }
            nodes.push(Node {
                members,
                h: level as u32,
                children,
                parent: None,
            });
        }
    }
    let root = nodes.len() - 1;
    debug_assert_eq!(nodes[root].members.len(), n);
    Ok(ComponentTree { nodes, root })
}

impl ComponentTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn leaf(&self, q: usize) -> usize {
        q
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn h(&self, id: usize) -> u32 {
        self.nodes[id].h
    }

    /// The least component containing every state of `set`.
    pub fn least_containing(&self, set: &StateSet) -> usize {
        let first = set.first().expect("nonempty set");
        let mut id = self.leaf(first);
        while !set.is_subset(&self.nodes[id].members) {
            id = self.nodes[id].parent.expect("root contains every state");
        }
        id
    }

    /// Position within `children(id)` of the child containing `q`.
    pub fn child_index(&self, id: usize, q: usize) -> Option<usize> {
        let mut cur = self.leaf(q);
        while let Some(p) = self.nodes[cur].parent {
            if p == id {
                return self.nodes[id].children.iter().position(|&c| c == cur);
            }
            cur = p;
        }
        None
    }

    /// Number of components with more than one state.
    pub fn internal_count(&self) -> usize {
        self.nodes.iter().filter(|c| !c.children.is_empty()).count()
    }
}
