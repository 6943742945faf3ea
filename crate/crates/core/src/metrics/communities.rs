//! Greedy modularity maximization (Clauset, Newman and Moore) on the
//! undirected projection.
//!
//! Merge gains are compared exactly: joining communities `i` and `j` changes
//! modularity by `(2m * L_ij - D_i * D_j) / (2 m^2)`, where `L_ij` is the
//! number of edges between them and `D` the degree sums, so the integer
//! numerator decides both the sign and the ranking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graphlet::{undirect, UndirectedGraph};
use crate::temporal::Snapshot;

/// Graphs above this many nodes get community coloring in the network view.
pub const COMMUNITY_NODE_THRESHOLD: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommunityPartition {
    pub nodes: Vec<String>,
    /// Community of each node, numbered by smallest member index.
    pub assignment: Vec<usize>,
    pub modularity: f64,
}

impl CommunityPartition {
    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |&c| c + 1)
    }
}

pub fn communities(g: &Snapshot) -> CommunityPartition {
    let u = undirect(g);
    let assignment = greedy_modularity(&u);
    CommunityPartition {
        nodes: g.nodes().to_vec(),
        modularity: modularity(&u, &assignment),
        assignment,
    }
}

/// Starts from singletons and repeatedly merges the adjacent pair with the
/// largest positive gain, ties going to the smallest `(i, j)` id pair. The
/// merged community keeps the smaller id.
pub fn greedy_modularity(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.node_count();
    let two_m = 2 * g.edge_count() as i128;
    let mut links: Vec<BTreeMap<usize, i128>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&u| (u as usize, 1)).collect())
        .collect();
    let mut degree: Vec<i128> = (0..n).map(|v| g.degree(v) as i128).collect();
    let mut community: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];

    loop {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in (0..n).filter(|&i| alive[i]) {
            for (&j, &l) in links[i].range(i + 1..) {
                let gain = two_m * l - degree[i] * degree[j];
                if best.is_none_or(|(b, _, _)| gain > b) {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((gain, i, j)) = best else { break };
        if gain <= 0 {
            break;
        }
        let moved = std::mem::take(&mut links[j]);
        for (l, c) in moved {
            if l == i {
                continue;
            }
            *links[i].entry(l).or_insert(0) += c;
            let other = &mut links[l];
            other.remove(&j);
            *other.entry(i).or_insert(0) += c;
        }
        links[i].remove(&j);
        degree[i] += degree[j];
        alive[j] = false;
        for c in community.iter_mut() {
            if *c == j {
                *c = i;
            }
        }
    }

    // renumber by first appearance, which is the smallest member index
    let mut ids = BTreeMap::new();
    community
        .iter()
        .map(|&c| {
            let next = ids.len();
            *ids.entry(c).or_insert(next)
        })
        .collect()
}

/// Newman modularity; 0 for a graph without edges.
pub fn modularity(g: &UndirectedGraph, assignment: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let k = assignment.iter().max().map_or(0, |&c| c + 1);
    let mut inside = vec![0.0; k];
    let mut total = vec![0.0; k];
    for (a, b) in g.edges() {
        if assignment[a] == assignment[b] {
            inside[assignment[a]] += 1.0;
        }
    }
    for v in 0..g.node_count() {
        total[assignment[v]] += g.degree(v) as f64;
    }
    (0..k).map(|c| inside[c] / m - (total[c] / (2.0 * m)).powi(2)).sum()
}
