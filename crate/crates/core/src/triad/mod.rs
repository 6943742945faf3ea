//! Directed triad classification and counting.
//!
//! Triads are numbered in the MAN (mutual, asymmetric, null dyads) order.
//! The 13 connected classes are the census motifs; motif `k` (1-based) is
//! the `k`-triad of the census view:
//!
//! | k  | label | edges (A, B, C)           |
//! |----|-------|---------------------------|
//! | 1  | 021D  | A<-B->C                   |
//! | 2  | 021U  | A->B<-C                   |
//! | 3  | 021C  | A->B->C                   |
//! | 4  | 111D  | A<->B<-C                  |
//! | 5  | 111U  | A<->B->C                  |
//! | 6  | 030T  | A->B<-C, A->C             |
//! | 7  | 030C  | A<-B<-C, A->C             |
//! | 8  | 201   | A<->B<->C                 |
//! | 9  | 120D  | A<-B->C, A<->C            |
//! | 10 | 120U  | A->B<-C, A<->C            |
//! | 11 | 120C  | A->B->C, A<->C            |
//! | 12 | 210   | A->B<->C, A<->C           |
//! | 13 | 300   | A<->B<->C, A<->C          |

mod census;

pub use census::{
    build_census_matrix, build_census_matrix_with, compute_census, significance_profile, CensusMatrix,
    CensusRun, CensusVector,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal::Snapshot;

/// Number of connected triad classes.
pub const MOTIF_COUNT: usize = 13;

/// Labels of the census motifs, row order of every census matrix.
pub const MOTIF_LABELS: [&str; MOTIF_COUNT] = [
    "021D", "021U", "021C", "111D", "111U", "030T", "030C", "201", "120D", "120U", "120C", "210", "300",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriadClass {
    T003,
    T012,
    T102,
    T021D,
    T021U,
    T021C,
    T111D,
    T111U,
    T030T,
    T030C,
    T201,
    T120D,
    T120U,
    T120C,
    T210,
    T300,
}

impl TriadClass {
    pub const ALL: [TriadClass; 16] = [
        TriadClass::T003,
        TriadClass::T012,
        TriadClass::T102,
        TriadClass::T021D,
        TriadClass::T021U,
        TriadClass::T021C,
        TriadClass::T111D,
        TriadClass::T111U,
        TriadClass::T030T,
        TriadClass::T030C,
        TriadClass::T201,
        TriadClass::T120D,
        TriadClass::T120U,
        TriadClass::T120C,
        TriadClass::T210,
        TriadClass::T300,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TriadClass::T003 => "003",
            TriadClass::T012 => "012",
            TriadClass::T102 => "102",
            c => MOTIF_LABELS[c as usize - 3],
        }
    }

    /// Row of this class in a census (0-based), `None` for the three
    /// disconnected classes.
    pub fn census_index(self) -> Option<usize> {
        (self as usize).checked_sub(3)
    }

    pub fn is_connected(self) -> bool {
        self.census_index().is_some()
    }

    /// Class of the triad whose edges are encoded in the low six bits of
    /// `code`, see [`triad_code`].
    pub fn from_code(code: u8) -> TriadClass {
        CODE_TABLE[(code & 0x3f) as usize]
    }
}

impl std::fmt::Display for TriadClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

const fn bit(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 1) => 0,
        (1, 0) => 1,
        (0, 2) => 2,
        (2, 0) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

const fn has(code: u8, i: usize, j: usize) -> bool {
    code & (1 << bit(i, j)) != 0
}

const fn classify_code(code: u8) -> TriadClass {
    const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    let (mut m, mut a, mut n) = (0, 0, 0);
    let mut mutual = 3;
    let mut k = 0;
    while k < 3 {
        let (i, j) = PAIRS[k];
        match (has(code, i, j), has(code, j, i)) {
            (true, true) => {
                m += 1;
                mutual = k;
            }
            (false, false) => n += 1,
            _ => a += 1,
        }
        k += 1;
    }
    let mut out = [0u8; 3];
    let mut inn = [0u8; 3];
    let mut i = 0;
    while i < 3 {
        let mut j = 0;
        while j < 3 {
            if i != j && has(code, i, j) {
                out[i] += 1;
                inn[j] += 1;
            }
            j += 1;
        }
        i += 1;
    }
    match (m, a, n) {
        (0, 0, 3) => TriadClass::T003,
        (0, 1, 2) => TriadClass::T012,
        (1, 0, 2) => TriadClass::T102,
        (0, 2, 1) => {
            if out[0] == 2 || out[1] == 2 || out[2] == 2 {
                TriadClass::T021D
            } else if inn[0] == 2 || inn[1] == 2 || inn[2] == 2 {
                TriadClass::T021U
            } else {
                TriadClass::T021C
            }
        }
        (1, 1, 1) => {
            // the asymmetric edge points into the mutual dyad for 111D
            let (p, q) = PAIRS[mutual];
            let mut target = 0;
            let mut k = 0;
            while k < 3 {
                let (i, j) = PAIRS[k];
                if has(code, i, j) != has(code, j, i) {
                    target = if has(code, i, j) { j } else { i };
                }
                k += 1;
            }
            if target == p || target == q {
                TriadClass::T111D
            } else {
                TriadClass::T111U
            }
        }
        (0, 3, 0) => {
            if out[0] == 2 || out[1] == 2 || out[2] == 2 {
                TriadClass::T030T
            } else {
                TriadClass::T030C
            }
        }
        (2, 0, 1) => TriadClass::T201,
        (1, 2, 0) => {
            let (p, q) = PAIRS[mutual];
            let x = 3 - p - q;
            if out[x] == 2 {
                TriadClass::T120D
            } else if inn[x] == 2 {
                TriadClass::T120U
            } else {
                TriadClass::T120C
            }
        }
        (2, 1, 0) => TriadClass::T210,
        _ => TriadClass::T300,
    }
}

const CODE_TABLE: [TriadClass; 64] = {
    let mut t = [TriadClass::T003; 64];
    let mut c = 0;
    while c < 64 {
        t[c] = classify_code(c as u8);
        c += 1;
    }
    t
};

/// Six-bit code of the triad `(v, u, w)`: bits for v->u, u->v, v->w, w->v,
/// u->w, w->u.
pub fn triad_code(g: &Snapshot, v: usize, u: usize, w: usize) -> u8 {
    let nodes = [v, u, w];
    let mut code = 0u8;
    for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
        if g.has_edge(nodes[i], nodes[j]) {
            code |= 1 << bit(i, j);
        }
    }
    code
}

/// Isomorphism class of a 3-node induced subgraph.
pub fn classify_triad(sub: &Snapshot) -> Result<TriadClass> {
    if sub.node_count() != 3 {
        return Err(Error::TriadArity(sub.node_count()));
    }
    Ok(TriadClass::from_code(triad_code(sub, 0, 1, 2)))
}

/// Counts of the 13 connected triad classes of one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TriadCounts(pub [u64; MOTIF_COUNT]);

impl TriadCounts {
    pub fn get(&self, class: TriadClass) -> u64 {
        class.census_index().map_or(0, |i| self.0[i])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

fn undirected_neighbors(g: &Snapshot) -> Vec<Vec<u32>> {
    (0..g.node_count())
        .map(|v| {
            let mut n: Vec<u32> = g.out_neighbors(v).iter().chain(g.in_neighbors(v)).copied().collect();
            n.sort_unstable();
            n.dedup();
            n
        })
        .collect()
}

/// Connected triad census.
///
/// Node-iterator enumeration: for every adjacent pair `v < u` the third node
/// is drawn from the joint neighborhood, with an ordering rule that visits
/// each triad with at least two connected dyads exactly once. Triads with a
/// single connected dyad are disconnected and never enumerated.
pub fn count_triads(g: &Snapshot) -> TriadCounts {
    let nbrs = undirected_neighbors(g);
    let adjacent = |a: usize, b: usize| nbrs[a].binary_search(&(b as u32)).is_ok();

    let counts = (0..g.node_count())
        .into_par_iter()
        .fold(
            || [0u64; MOTIF_COUNT],
            |mut acc, v| {
                let mut joint: Vec<u32> = Vec::new();
                for &u in nbrs[v].iter().filter(|&&u| u as usize > v) {
                    let u = u as usize;
                    joint.clear();
                    merge_union(&nbrs[v], &nbrs[u], &mut joint);
                    for &w in &joint {
                        let w = w as usize;
                        if w == u || w == v {
                            continue;
                        }
                        if u < w || (v < w && w < u && !adjacent(v, w)) {
                            let class = TriadClass::from_code(triad_code(g, v, u, w));
                            if let Some(i) = class.census_index() {
                                acc[i] += 1;
                            }
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || [0u64; MOTIF_COUNT],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    TriadCounts(counts)
}

fn merge_union(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
