//! Triad classification by explicit isomorphism search.

use crate::permutations;

/// The 16 triad isomorphism classes with one labeled representative each
/// (nodes A = 0, B = 1, C = 2). Order is the MAN order; the last 13 are the
/// connected classes.
pub const REPRESENTATIVES: [(&str, &[(usize, usize)]); 16] = [
    ("003", &[]),
    ("012", &[(0, 1)]),
    ("102", &[(0, 1), (1, 0)]),
    ("021D", &[(1, 0), (1, 2)]),
    ("021U", &[(0, 1), (2, 1)]),
    ("021C", &[(0, 1), (1, 2)]),
    ("111D", &[(0, 1), (1, 0), (2, 1)]),
    ("111U", &[(0, 1), (1, 0), (1, 2)]),
    ("030T", &[(0, 1), (2, 1), (0, 2)]),
    ("030C", &[(1, 0), (2, 1), (0, 2)]),
    ("201", &[(0, 1), (1, 0), (1, 2), (2, 1)]),
    ("120D", &[(1, 0), (1, 2), (0, 2), (2, 0)]),
    ("120U", &[(0, 1), (2, 1), (0, 2), (2, 0)]),
    ("120C", &[(0, 1), (1, 2), (0, 2), (2, 0)]),
    ("210", &[(0, 1), (1, 2), (2, 1), (0, 2), (2, 0)]),
    ("300", &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]),
];

/// Labels of the 13 connected classes in census order.
pub fn connected_labels() -> Vec<&'static str> {
    REPRESENTATIVES[3..].iter().map(|(l, _)| *l).collect()
}

fn code(adj: &[[bool; 3]; 3], perm: &[usize]) -> u8 {
    let mut c = 0u8;
    let mut bit = 0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                if adj[perm[i]][perm[j]] {
                    c |= 1 << bit;
                }
                bit += 1;
            }
        }
    }
    c
}

fn canonical(adj: &[[bool; 3]; 3]) -> u8 {
    permutations(3).iter().map(|p| code(adj, p)).min().unwrap()
}

/// Class index in `REPRESENTATIVES` of the given 3-node digraph.
pub fn classify(adj: &[[bool; 3]; 3]) -> usize {
    let target = canonical(adj);
    REPRESENTATIVES
        .iter()
        .position(|(_, edges)| {
            let mut rep = [[false; 3]; 3];
            for &(a, b) in *edges {
                rep[a][b] = true;
            }
            canonical(&rep) == target
        })
        .expect("every 3-node digraph is isomorphic to a representative")
}

/// Connected triad census in MAN order (13 entries) by checking every triple.
pub fn brute_force_census(n: usize, edges: &[(usize, usize)]) -> [u64; 13] {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        if a != b {
            adj[a][b] = true;
        }
    }
    let mut counts = [0u64; 13];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let nodes = [a, b, c];
                let mut sub = [[false; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        sub[i][j] = i != j && adj[nodes[i]][nodes[j]];
                    }
                }
                let class = classify(&sub);
                if class >= 3 {
                    counts[class - 3] += 1;
                }
            }
        }
    }
    counts
}
