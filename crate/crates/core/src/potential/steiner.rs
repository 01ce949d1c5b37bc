//! Minimum-edge Steiner trees in small unweighted graphs (Dreyfus–Wagner).

use std::collections::VecDeque;

const INF: u32 = u32::MAX / 4;

/// A minimum Steiner tree: its edge count and edge list `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerTree {
    pub cost: u32,
    pub edges: Vec<(usize, usize)>,
}

struct Paths {
    dist: Vec<Vec<u32>>,
    /// `parent[s][v]`: predecessor of `v` on a shortest path from `s`.
    parent: Vec<Vec<usize>>,
}

fn all_pairs(adj: &[Vec<usize>]) -> Paths {
    let v = adj.len();
    let mut dist = vec![vec![INF; v]; v];
    let mut parent = vec![vec![usize::MAX; v]; v];
    for s in 0..v {
        dist[s][s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[s][y] == INF {
                    dist[s][y] = dist[s][x] + 1;
                    parent[s][y] = x;
                    queue.push_back(y);
                }
            }
        }
    }
    Paths { dist, parent }
}

impl Paths {
    fn path_edges(&self, s: usize, mut v: usize, out: &mut Vec<(usize, usize)>) {
        while v != s {
            let u = self.parent[s][v];
            out.push((u.min(v), u.max(v)));
            v = u;
        }
    }
}

/// Exact minimum number of edges of a connected subgraph containing all
/// `terminals`, or `None` when they are not connected. Adjacency lists must be
/// symmetric.
pub fn steiner_tree(adj: &[Vec<usize>], terminals: &[usize]) -> Option<SteinerTree> {
    let t = terminals.len();
    if t <= 1 {
        return Some(SteinerTree {
            cost: 0,
            edges: Vec::new(),
        });
    }
    let v = adj.len();
    let paths = all_pairs(adj);
    let first = terminals[0];
    if terminals.iter().any(|&x| paths.dist[first][x] == INF) {
        return None;
    }

    let full = (1usize << t) - 1;
    // dp[mask][x]: cheapest tree spanning the terminals in mask plus x.
    let mut dp = vec![vec![INF; v]; full + 1];
    // How dp[mask][x] was reached: through node u, whose tree splits into
    // (sub, mask ^ sub) there; sub == mask marks a single-terminal path.
    let mut via = vec![vec![(usize::MAX, 0usize); v]; full + 1];
    for (i, &term) in terminals.iter().enumerate() {
        for x in 0..v {
            dp[1 << i][x] = paths.dist[term][x];
            via[1 << i][x] = (term, 1 << i);
        }
    }
    let mut merged = vec![INF; v];
    let mut split = vec![0usize; v];
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        for x in 0..v {
            merged[x] = INF;
            // Enumerate proper submasks that contain the lowest bit.
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                let a = sub | low;
                if a != mask {
                    let cost = dp[a][x].saturating_add(dp[mask ^ a][x]);
                    if cost < merged[x] {
                        merged[x] = cost;
                        split[x] = a;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        for x in 0..v {
            let mut best = INF;
            let mut arg = (usize::MAX, 0);
            for u in 0..v {
                let cost = merged[u].saturating_add(paths.dist[u][x]);
                if cost < best {
                    best = cost;
                    arg = (u, split[u]);
                }
            }
            dp[mask][x] = best;
            via[mask][x] = arg;
        }
    }

    let cost = dp[full][first];
    let mut edges = Vec::new();
    let mut stack = vec![(full, first)];
    while let Some((mask, x)) = stack.pop() {
        let (u, sub) = via[mask][x];
        paths.path_edges(u, x, &mut edges);
        if sub != mask {
            stack.push((sub, u));
            stack.push((mask ^ sub, u));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    debug_assert_eq!(edges.len() as u32, cost);
    Some(SteinerTree { cost, edges })
}
