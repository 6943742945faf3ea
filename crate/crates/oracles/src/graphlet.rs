//! Graphlet degree vectors by enumerating every node subset.

use crate::permutations;
use serde::Deserialize;

/// One representative per connected graphlet on 2..=5 nodes with the orbit of
/// each of its nodes (standard 73-orbit numbering).
pub struct Graphlet {
    pub nodes: usize,
    pub edges: &'static [(usize, usize)],
    pub orbits: &'static [usize],
}

macro_rules! g {
    ($n:expr, [$(($a:expr, $b:expr)),*], [$($o:expr),*]) => {
        Graphlet { nodes: $n, edges: &[$(($a, $b)),*], orbits: &[$($o),*] }
    };
}

pub const GRAPHLETS: [Graphlet; 30] = [
    g!(2, [(0, 1)], [0, 0]),
    g!(3, [(0, 1), (0, 2)], [2, 1, 1]),
    g!(3, [(0, 1), (0, 2), (1, 2)], [3, 3, 3]),
    g!(4, [(0, 1), (0, 3), (1, 2)], [5, 5, 4, 4]),
    g!(4, [(0, 3), (1, 3), (2, 3)], [6, 6, 6, 7]),
    g!(4, [(0, 1), (0, 3), (1, 2), (2, 3)], [8, 8, 8, 8]),
    g!(4, [(0, 3), (1, 2), (1, 3), (2, 3)], [9, 10, 10, 11]),
    g!(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)], [13, 12, 13, 12]),
    g!(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], [14, 14, 14, 14]),
    g!(5, [(0, 1), (0, 4), (1, 2), (2, 3)], [16, 17, 16, 15, 15]),
    g!(5, [(0, 4), (1, 3), (2, 3), (3, 4)], [18, 19, 19, 21, 20]),
    g!(5, [(0, 4), (1, 4), (2, 4), (3, 4)], [22, 22, 22, 22, 23]),
    g!(5, [(0, 1), (0, 2), (0, 4), (1, 2), (2, 3)], [26, 25, 26, 24, 24]),
    g!(5, [(0, 4), (1, 2), (1, 3), (2, 3), (3, 4)], [27, 29, 29, 30, 28]),
    g!(5, [(0, 4), (1, 4), (2, 3), (2, 4), (3, 4)], [31, 31, 32, 32, 33]),
    g!(5, [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)], [34, 34, 34, 34, 34]),
    g!(5, [(0, 1), (1, 3), (1, 4), (2, 3), (2, 4)], [35, 38, 36, 37, 37]),
    g!(5, [(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)], [39, 42, 41, 40, 40]),
    g!(5, [(0, 1), (0, 4), (1, 4), (2, 3), (2, 4), (3, 4)], [43, 43, 43, 43, 44]),
    g!(5, [(0, 1), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], [45, 47, 46, 48, 48]),
    g!(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)], [50, 50, 49, 49, 49]),
    g!(5, [(0, 1), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4)], [53, 51, 51, 53, 52]),
    g!(5, [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], [54, 54, 54, 55, 55]),
    g!(5, [(0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], [56, 57, 57, 57, 58]),
    g!(5, [(0, 1), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (3, 4)], [59, 61, 59, 60, 60]),
    g!(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 4)], [63, 63, 64, 62, 64]),
    g!(5, [(0, 1), (0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], [66, 66, 65, 67, 67]),
    g!(5, [(0, 1), (0, 3), (0, 4), (1, 2), (1, 4), (2, 3), (2, 4), (3, 4)], [68, 68, 68, 68, 69]),
    g!(5, [(0, 1), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], [70, 71, 70, 71, 71]),
    g!(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], [72, 72, 72, 72, 72]),
];

/// Number of orbits for graphlets up to `max_size` nodes.
pub fn orbit_count(max_size: usize) -> usize {
    match max_size {
        2 => 1,
        3 => 4,
        4 => 15,
        5 => 73,
        _ => panic!("unsupported graphlet size {max_size}"),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn connected(adj: &[Vec<bool>]) -> bool {
    let k = adj.len();
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..k {
            if adj[v][u] && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Orbit of each subset position, or `None` if the induced subgraph is
/// disconnected.
pub fn subgraph_orbits(adj: &[Vec<bool>]) -> Option<Vec<usize>> {
    let k = adj.len();
    if !connected(adj) {
        return None;
    }
    let edge_count = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| adj[i][j]).count();
    let perms = permutations(k);
    for g in GRAPHLETS.iter().filter(|g| g.nodes == k && g.edges.len() == edge_count) {
        let mut rep = vec![vec![false; k]; k];
        for &(a, b) in g.edges {
            rep[a][b] = true;
            rep[b][a] = true;
        }
        'perm: for p in &perms {
            for i in 0..k {
                for j in i + 1..k {
                    if adj[i][j] != rep[p[i]][p[j]] {
                        continue 'perm;
                    }
                }
            }
            return Some((0..k).map(|i| g.orbits[p[i]]).collect());
        }
    }
    unreachable!("connected graph on {k} nodes matched no graphlet")
}

/// Per-node orbit counts (`result[node][orbit]`) by enumerating every node
/// subset of size 2..=`max_size`.
pub fn brute_force_gdv(n: usize, edges: &[(usize, usize)], max_size: usize) -> Vec<Vec<u64>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        if a != b {
            adj[a][b] = true;
            adj[b][a] = true;
        }
    }
    let mut out = vec![vec![0u64; orbit_count(max_size)]; n];
    for k in 2..=max_size.min(n) {
        for subset in combinations(n, k) {
            let sub: Vec<Vec<bool>> = subset
                .iter()
                .map(|&a| subset.iter().map(|&b| adj[a][b]).collect())
                .collect();
            if let Some(orbits) = subgraph_orbits(&sub) {
                for (pos, &v) in subset.iter().enumerate() {
                    out[v][orbits[pos]] += 1;
                }
            }
        }
    }
    out
}

/// Whole-graph graphlet counts indexed like `GRAPHLETS`.
pub fn brute_force_graphlet_counts(n: usize, edges: &[(usize, usize)], max_size: usize) -> Vec<u64> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut counts = vec![0u64; GRAPHLETS.len()];
    for k in 2..=max_size.min(n) {
        for subset in combinations(n, k) {
            let sub: Vec<Vec<bool>> = subset
                .iter()
                .map(|&a| subset.iter().map(|&b| adj[a][b]).collect())
                .collect();
            if let Some(orbits) = subgraph_orbits(&sub) {
                let idx = GRAPHLETS
                    .iter()
                    .position(|g| g.nodes == k && g.orbits.iter().min() == orbits.iter().min())
                    .unwrap();
                counts[idx] += 1;
            }
        }
    }
    counts
}

#[derive(Debug, Deserialize)]
pub struct OrcaGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub orbits: Vec<Vec<u64>>,
}

#[derive(Debug, Deserialize)]
struct OrcaFixture {
    graphs: Vec<OrcaGraph>,
}

/// Node orbit counts produced by the reference ORCA tool on a handful of
/// random graphs, frozen as JSON.
pub fn orca_reference() -> Vec<OrcaGraph> {
    let raw = include_str!("../fixtures/orca_reference.json");
    serde_json::from_str::<OrcaFixture>(raw).expect("valid fixture").graphs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_covers_every_orbit_once() {
        let mut seen = vec![false; 73];
        for g in GRAPHLETS.iter() {
            for &o in g.orbits {
                seen[o] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn brute_force_agrees_with_orca_fixture() {
        for g in orca_reference() {
            assert_eq!(brute_force_gdv(g.nodes, &g.edges, 5), g.orbits);
        }
    }
}
