use super::Dfa;

/// Strongly connected components of the transition digraph.
///
/// Component ids are assigned in the order Tarjan's algorithm completes them,
/// which is a reverse topological order: an edge `p -> q` between different
/// components always has `component(p) > component(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sccs {
    component: Vec<u32>,
    count: usize,
}

impl Sccs {
    pub fn component(&self, q: usize) -> usize {
        self.component[q] as usize
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn same(&self, p: usize, q: usize) -> bool {
        self.component[p] == self.component[q]
    }

    /// Members of each component, indexed by component id.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (q, &c) in self.component.iter().enumerate() {
            out[c as usize].push(q);
        }
        out
    }
}

const UNVISITED: u32 = u32::MAX;

/// Iterative Tarjan; `O(n·m)`.
pub fn sccs(dfa: &Dfa) -> Sccs {
    let n = dfa.n();
    let m = dfa.num_letters();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNVISITED; n];
    let mut stack: Vec<u32> = Vec::new();
    // (state, next letter to explore)
    let mut call: Vec<(u32, u32)> = Vec::new();
    let mut next_index = 0u32;
    let mut count = 0u32;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root as u32, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut a)) = call.last_mut() {
            let v = v as usize;
            if (*a as usize) < m {
                let w = dfa.step(v, *a as usize);
                *a += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                let parent = parent as usize;
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack") as usize;
                    on_stack[w] = false;
                    component[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }

    Sccs {
        component,
        count: count as usize,
    }
}
