//! Graphlet degree vectors.
//!
//! Graphlets are undirected: edge directions of a snapshot are discarded
//! before counting, so `a->b` and `b->a` both become the edge `{a, b}`.
//!
//! Every connected induced subgraph with up to `max_size` nodes is enumerated
//! once (ESU-style extension from its smallest node), and each member's orbit
//! is read from a lookup table over all labeled connected graphs on at most
//! five nodes.

mod table;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal::Snapshot;
use table::{pair_bit, OrbitTable};

/// Orbits of graphlets with 2..=4 nodes.
pub const ORBITS_4: usize = 15;
/// Orbits of graphlets with 2..=5 nodes.
pub const ORBITS_5: usize = 73;

pub fn orbit_count(max_size: usize) -> Result<usize> {
    match max_size {
        4 => Ok(ORBITS_4),
        5 => Ok(ORBITS_5),
        other => Err(Error::InvalidGraphletSize(other)),
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    nodes: Vec<String>,
    adj: Vec<Vec<u32>>,
}

impl UndirectedGraph {
    /// Graph on nodes `0..n`; self-loops and repeated edges are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let nodes = (0..n).map(|i| i.to_string()).collect();
        Self::build(nodes, edges.iter().map(|&(a, b)| (a as u32, b as u32)))
    }

    fn build(nodes: Vec<String>, edges: impl Iterator<Item = (u32, u32)>) -> Self {
        let mut adj = vec![Vec::new(); nodes.len()];
        for (a, b) in edges {
            if a != b {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        UndirectedGraph { nodes, adj }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Each edge once as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b as usize > a).map(move |&b| (a, b as usize)))
    }
}

/// Symmetrized projection of a directed snapshot.
pub fn undirect(g: &Snapshot) -> UndirectedGraph {
    UndirectedGraph::build(g.nodes().to_vec(), g.edges().iter().copied())
}

/// Orbit x node matrix of graphlet counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GdvMatrix {
    #[serde(rename = "orbits")]
    pub orbit_count: usize,
    pub max_graphlet_size: usize,
    #[serde(rename = "nodes")]
    pub node_ids: Vec<String>,
    /// Row-major, `orbit_count * node_ids.len()` entries.
    pub values: Vec<u64>,
}

impl GdvMatrix {
    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn get(&self, orbit: usize, node: usize) -> u64 {
        self.values[orbit * self.node_count() + node]
    }

    pub fn row(&self, orbit: usize) -> &[u64] {
        let n = self.node_count();
        &self.values[orbit * n..(orbit + 1) * n]
    }

    pub fn column(&self, node: usize) -> Vec<u64> {
        (0..self.orbit_count).map(|o| self.get(o, node)).collect()
    }

    pub fn columns_f64(&self) -> Vec<Vec<f64>> {
        (0..self.node_count())
            .map(|v| self.column(v).into_iter().map(|x| x as f64).collect())
            .collect()
    }

    /// One row per orbit, header `orbit,<node ids...>`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["orbit".to_string()];
        header.extend(self.node_ids.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for o in 0..self.orbit_count {
            let mut rec = vec![o.to_string()];
            rec.extend(self.row(o).iter().map(u64::to_string));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Graphlet degree vectors of every node of `g` (directions ignored).
pub fn compute_gdv(g: &Snapshot, max_size: usize) -> Result<GdvMatrix> {
    compute_gdv_undirected(&undirect(g), max_size)
}

pub fn compute_gdv_undirected(g: &UndirectedGraph, max_size: usize) -> Result<GdvMatrix> {
    let orbits = orbit_count(max_size)?;
    let n = g.node_count();
    let table = OrbitTable::get();

    // node-major accumulation, transposed at the end
    let counts = (0..n)
        .into_par_iter()
        .fold(
            || vec![0u64; n * orbits],
            |mut acc, root| {
                let mut sub = Vec::with_capacity(max_size);
                sub.push(root as u32);
                let ext: Vec<u32> = g.neighbors(root).iter().copied().filter(|&u| u as usize > root).collect();
                extend(g, table, max_size, orbits, root, &mut sub, ext, &mut acc);
                acc
            },
        )
        .reduce(
            || vec![0u64; n * orbits],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let mut values = vec![0u64; n * orbits];
    for v in 0..n {
        for o in 0..orbits {
            values[o * n + v] = counts[v * orbits + o];
        }
    }
    Ok(GdvMatrix {
        orbit_count: orbits,
        max_graphlet_size: max_size,
        node_ids: g.nodes().to_vec(),
        values,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &UndirectedGraph,
    table: &OrbitTable,
    max_size: usize,
    orbits: usize,
    root: usize,
    sub: &mut Vec<u32>,
    mut ext: Vec<u32>,
    acc: &mut [u64],
) {
    if sub.len() >= 2 {
        record(g, table, orbits, sub, acc);
    }
    if sub.len() == max_size {
        return;
    }
    while let Some(w) = ext.pop() {
        // exclusive neighbors of w: beyond the root, outside the current
        // subgraph and its neighborhood
        let mut next = ext.clone();
        for &u in g.neighbors(w as usize) {
            let ui = u as usize;
            if ui <= root || u == w || sub.contains(&u) || next.contains(&u) {
                continue;
            }
            if sub.iter().any(|&s| g.has_edge(s as usize, ui)) {
                continue;
            }
            next.push(u);
        }
        sub.push(w);
        extend(g, table, max_size, orbits, root, sub, next, acc);
        sub.pop();
    }
}

fn record(g: &UndirectedGraph, table: &OrbitTable, orbits: usize, sub: &[u32], acc: &mut [u64]) {
    let k = sub.len();
    let mut mask = 0u16;
    for j in 1..k {
        for i in 0..j {
            if g.has_edge(sub[i] as usize, sub[j] as usize) {
                mask |= 1 << pair_bit(i, j);
            }
        }
    }
    let orb = table.lookup(k, mask).expect("ESU only yields connected subgraphs");
    for (pos, &v) in sub.iter().enumerate() {
        acc[v as usize * orbits + orb[pos] as usize] += 1;
    }
}

/// Cosine similarity of two nodes' GDVs: 1 if both are zero, 0 if exactly
/// one is.
pub fn gdv_similarity_columns(m: &GdvMatrix, i: usize, j: usize) -> f64 {
    let (a, b) = (m.column(i), m.column(j));
    let dot: f64 = a.iter().zip(&b).map(|(&x, &y)| x as f64 * y as f64).sum();
    let na: f64 = a.iter().map(|&x| (x as f64).powi(2)).sum();
    let nb: f64 = b.iter().map(|&x| (x as f64).powi(2)).sum();
    match (na == 0.0, nb == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => (dot / (na * nb).sqrt()).clamp(0.0, 1.0),
    }
}
