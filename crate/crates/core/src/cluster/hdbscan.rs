//! Density-based hierarchical clustering over a precomputed distance matrix.
//!
//! Steps: core distances (distance to the `min_cluster_size`-th nearest
//! point, the point itself included), mutual reachability, a minimum
//! spanning forest, the single-linkage hierarchy, condensation by cluster
//! size and excess-of-mass selection.
//!
//! Filtered pairs (see [`FILTERED`]) are never linked. Separate components
//! of the spanning forest are joined at infinite distance, i.e. at
//! `lambda = 0`, and a point that only ever attaches at infinite distance is
//! noise.

use serde::{Deserialize, Serialize};

use super::distance::{DistanceMatrix, FILTERED};
use crate::error::{Error, Result};

pub const NOISE: i64 = -1;
pub const DEFAULT_MIN_CLUSTER_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClusterParameters {
    pub min_cluster_size: usize,
    /// Temporal filter width, when one was applied.
    pub eps_time: Option<u64>,
}

/// Cluster label per column; [`NOISE`] for columns in no cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClusterAssignment {
    pub labels: Vec<i64>,
    /// Display order of the (non-noise) cluster ids.
    pub cluster_order: Vec<i64>,
    pub parameters: ClusterParameters,
}

impl ClusterAssignment {
    pub fn cluster_count(&self) -> usize {
        self.cluster_order.len()
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == NOISE).count()
    }

    /// Member indices of `id` in ascending order.
    pub fn members(&self, id: i64) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == id)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains(&self, id: i64) -> bool {
        self.labels.contains(&id)
    }

    /// Orders clusters by their earliest member time, then by id.
    pub fn order_by_earliest(&mut self, times: &[i64]) {
        let earliest = |id: i64| {
            self.labels
                .iter()
                .zip(times)
                .filter(|&(&l, _)| l == id)
                .map(|(_, &t)| t)
                .min()
                .unwrap_or(i64::MAX)
        };
        let mut order = self.cluster_order.clone();
        order.sort_by_key(|&id| (earliest(id), id));
        self.cluster_order = order;
    }
}

fn lambda_of(dist: f64) -> f64 {
    if dist.is_infinite() {
        0.0
    } else {
        1.0 / dist.max(1e-10)
    }
}

fn core_distances(d: &DistanceMatrix, min_cluster_size: usize) -> Vec<f64> {
    (0..d.size())
        .map(|i| {
            let mut row = d.row(i).to_vec();
            row.sort_by(f64::total_cmp);
            let c = row[min_cluster_size - 1];
            if c >= FILTERED {
                f64::INFINITY
            } else {
                c
            }
        })
        .collect()
}

/// Prim's algorithm on the dense mutual-reachability graph. Unreachable
/// points are attached with infinite weight, so the result is always a
/// spanning tree of `k - 1` edges.
fn spanning_tree(d: &DistanceMatrix, core: &[f64]) -> Vec<(usize, usize, f64)> {
    let k = d.size();
    let weight = |i: usize, j: usize| {
        if d.is_filtered(i, j) {
            f64::INFINITY
        } else {
            d.get(i, j).max(core[i]).max(core[j])
        }
    };
    let mut in_tree = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    let mut from: Vec<Option<usize>> = vec![None; k];
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..k {
        for j in 0..k {
            if !in_tree[j] {
                let w = weight(current, j);
                if w < best[j] {
                    best[j] = w;
                    from[j] = Some(current);
                }
            }
        }
        let next = (0..k)
            .filter(|&j| !in_tree[j])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]).then(a.cmp(&b)))
            .expect("a point remains");
        edges.push((from[next].unwrap_or(0), next, best[next]));
        in_tree[next] = true;
        current = next;
    }
    edges
}

struct Merge {
    left: usize,
    right: usize,
    dist: f64,
    size: usize,
}

/// Single-linkage hierarchy: merge `i` creates node `k + i`.
fn single_linkage(k: usize, mut edges: Vec<(usize, usize, f64)>) -> Vec<Merge> {
    edges.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut parent: Vec<usize> = (0..2 * k).collect();
    let mut size = vec![1usize; 2 * k];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merges = Vec::with_capacity(k.saturating_sub(1));
    for (a, b, dist) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        let node = k + merges.len();
        parent[ra] = node;
        parent[rb] = node;
        size[node] = size[ra] + size[rb];
        merges.push(Merge {
            left: ra,
            right: rb,
            dist,
            size: size[node],
        });
    }
    merges
}

#[derive(Debug, Clone, Copy)]
struct Condensed {
    parent: usize,
    child: usize,
    lambda: f64,
    size: usize,
}

fn leaves(k: usize, merges: &[Merge], node: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![node];
    while let Some(n) = stack.pop() {
        if n < k {
            out.push(n);
        } else {
            let m = &merges[n - k];
            stack.push(m.right);
            stack.push(m.left);
        }
    }
    out
}

/// Condensed tree. Cluster ids start at `k` (the root); points keep `0..k`.
fn condense(k: usize, merges: &[Merge], min_cluster_size: usize) -> (Vec<Condensed>, usize) {
    let size_of = |n: usize| if n < k { 1 } else { merges[n - k].size };
    let root = 2 * k - 2;
    let mut relabel = vec![0usize; 2 * k - 1];
    relabel[root] = k;
    let mut next_label = k + 1;
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node < k {
            continue;
        }
        let m = &merges[node - k];
        let lambda = lambda_of(m.dist);
        let parent = relabel[node];
        let (ls, rs) = (size_of(m.left), size_of(m.right));
        let big_left = ls >= min_cluster_size;
        let big_right = rs >= min_cluster_size;
        let fall_out = |side: usize, out: &mut Vec<Condensed>| {
            for p in leaves(k, merges, side) {
                out.push(Condensed {
                    parent,
                    child: p,
                    lambda,
                    size: 1,
                });
            }
        };
        match (big_left, big_right) {
            (true, true) => {
                for (side, size) in [(m.left, ls), (m.right, rs)] {
                    relabel[side] = next_label;
                    out.push(Condensed {
                        parent,
                        child: next_label,
                        lambda,
                        size,
                    });
                    next_label += 1;
                    stack.push(side);
                }
                // keep the left child's subtree labeled before the right one
                let n = stack.len();
                stack.swap(n - 1, n - 2);
            }
            (false, false) => {
                fall_out(m.left, &mut out);
                fall_out(m.right, &mut out);
            }
            (true, false) => {
                relabel[m.left] = parent;
                fall_out(m.right, &mut out);
                stack.push(m.left);
            }
            (false, true) => {
                relabel[m.right] = parent;
                fall_out(m.left, &mut out);
                stack.push(m.right);
            }
        }
    }
    (out, next_label)
}

/// Excess-of-mass selection; returns the selected cluster ids.
fn select(k: usize, tree: &[Condensed], cluster_end: usize) -> Vec<usize> {
    let clusters = cluster_end - k;
    let mut birth = vec![0.0; clusters];
    for e in tree.iter().filter(|e| e.child >= k) {
        birth[e.child - k] = e.lambda;
    }
    let mut stability = vec![0.0; clusters];
    for e in tree {
        stability[e.parent - k] += (e.lambda - birth[e.parent - k]) * e.size as f64;
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); clusters];
    for e in tree.iter().filter(|e| e.child >= k) {
        children[e.parent - k].push(e.child - k);
    }

    if clusters == 1 {
        return vec![k];
    }
    let mut selected = vec![true; clusters];
    selected[0] = false;
    for c in (1..clusters).rev() {
        let subtree: f64 = children[c].iter().map(|&ch| stability[ch]).sum();
        if subtree > stability[c] {
            selected[c] = false;
            stability[c] = subtree;
        } else {
            let mut stack = children[c].clone();
            while let Some(x) = stack.pop() {
                selected[x] = false;
                stack.extend(children[x].iter().copied());
            }
        }
    }
    (0..clusters).filter(|&c| selected[c]).map(|c| c + k).collect()
}

/// Clusters the points of `d`. Labels are numbered by each cluster's
/// smallest member index; `cluster_order` is ascending by label.
pub fn cluster_density(d: &DistanceMatrix, min_cluster_size: usize) -> Result<ClusterAssignment> {
    if min_cluster_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "minimum cluster size must be at least 2, got {min_cluster_size}"
        )));
    }
    let k = d.size();
    let parameters = ClusterParameters {
        min_cluster_size,
        eps_time: None,
    };
    if k < min_cluster_size {
        return Ok(ClusterAssignment {
            labels: vec![NOISE; k],
            cluster_order: Vec::new(),
            parameters,
        });
    }

    let core = core_distances(d, min_cluster_size);
    let merges = single_linkage(k, spanning_tree(d, &core));
    let (tree, cluster_end) = condense(k, &merges, min_cluster_size);
    let chosen = select(k, &tree, cluster_end);

    let mut parent_of = vec![0usize; cluster_end];
    let mut point_lambda = vec![0.0; k];
    for e in &tree {
        parent_of[e.child] = e.parent;
        if e.child < k {
            point_lambda[e.child] = e.lambda;
        }
    }
    let root = k;
    let root_only = chosen == [root];
    let root_max = tree
        .iter()
        .filter(|e| e.parent == root && e.child < k)
        .map(|e| e.lambda)
        .fold(0.0, f64::max);

    let mut raw = vec![None; k];
    for (p, slot) in raw.iter_mut().enumerate() {
        if point_lambda[p] == 0.0 {
            continue;
        }
        if root_only {
            if point_lambda[p] >= root_max {
                *slot = Some(root);
            }
            continue;
        }
        let mut c = parent_of[p];
        loop {
            if chosen.contains(&c) {
                *slot = Some(c);
                break;
            }
            if c == root {
                break;
            }
            c = parent_of[c];
        }
    }

    // drop selections left with too few members, then number by first member
    let mut firsts: Vec<(usize, usize)> = Vec::new();
    for &c in &chosen {
        let members: Vec<usize> = (0..k).filter(|&p| raw[p] == Some(c)).collect();
        if members.len() >= min_cluster_size {
            firsts.push((members[0], c));
        } else {
            for p in members {
                raw[p] = None;
            }
        }
    }
    firsts.sort_unstable();
    let labels = raw
        .iter()
        .map(|slot| match slot {
            Some(c) => firsts.iter().position(|&(_, id)| id == *c).map_or(NOISE, |i| i as i64),
            None => NOISE,
        })
        .collect();
    Ok(ClusterAssignment {
        labels,
        cluster_order: (0..firsts.len() as i64).collect(),
        parameters,
    })
}
