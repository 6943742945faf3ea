//! Degree-preserving random digraphs and their triad statistics.
//!
//! Null graphs are produced by directed double-edge swaps: two edges
//! `a->b`, `c->d` become `a->d`, `c->b` unless that creates a self-loop or a
//! parallel edge. Every node keeps its in- and out-degree and the graph stays
//! simple by construction.
//!
//! Randomness comes from `ChaCha8Rng`. A draw is identified by its seed and
//! draw index: the generator is seeded with the seed and switched to stream
//! `draw`, so draw 0 of an ensemble equals [`randomize`] with the same seed.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal::Snapshot;
use crate::triad::{count_triads, MOTIF_COUNT};

pub const DEFAULT_SWAPS_PER_EDGE: usize = 10;
pub const DEFAULT_NULL_COUNT: usize = 100;
pub const GENERATOR_NAME: &str = "ChaCha8Rng";

/// Sorted in- and out-degree sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeSignature {
    pub in_degrees: Vec<u32>,
    pub out_degrees: Vec<u32>,
}

impl DegreeSignature {
    pub fn of(g: &Snapshot) -> Self {
        let mut in_degrees: Vec<u32> = (0..g.node_count()).map(|v| g.in_degree(v) as u32).collect();
        let mut out_degrees: Vec<u32> = (0..g.node_count()).map(|v| g.out_degree(v) as u32).collect();
        in_degrees.sort_unstable();
        out_degrees.sort_unstable();
        DegreeSignature {
            in_degrees,
            out_degrees,
        }
    }
}

/// Mean and population standard deviation of the triad counts of a null
/// ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NullEnsembleStats {
    pub mean: [f64; MOTIF_COUNT],
    pub std: [f64; MOTIF_COUNT],
    pub sample_count: usize,
    pub degree_signature: DegreeSignature,
    pub generator: String,
    pub seed: u64,
    pub swaps_per_edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NullModel {
    /// Swap attempts per edge, accepted or rejected.
    pub swaps_per_edge: usize,
}

impl Default for NullModel {
    fn default() -> Self {
        NullModel {
            swaps_per_edge: DEFAULT_SWAPS_PER_EDGE,
        }
    }
}

/// Generator for draw `draw` of the ensemble seeded with `seed`.
pub fn draw_rng(seed: u64, draw: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    rng
}

fn key(a: u32, b: u32) -> u64 {
    (u64::from(a) << 32) | u64::from(b)
}

/// Exchanges the targets of edges `i` and `j`. Applying it twice to the same
/// pair restores the original list.
pub fn swap_targets(edges: &mut [(u32, u32)], i: usize, j: usize) {
    let (a, b) = edges[i];
    let (c, d) = edges[j];
    edges[i] = (a, d);
    edges[j] = (c, b);
}

impl NullModel {
    pub fn randomize_with<R: Rng>(&self, g: &Snapshot, rng: &mut R) -> Snapshot {
        let mut edges = g.edges().to_vec();
        let m = edges.len();
        if m >= 2 {
            let mut present: HashSet<u64> = edges.iter().map(|&(a, b)| key(a, b)).collect();
            for _ in 0..self.swaps_per_edge * m {
                let i = rng.gen_range(0..m);
                let j = rng.gen_range(0..m);
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || b == d || a == d || c == b {
                    continue;
                }
                if present.contains(&key(a, d)) || present.contains(&key(c, b)) {
                    continue;
                }
                present.remove(&key(a, b));
                present.remove(&key(c, d));
                present.insert(key(a, d));
                present.insert(key(c, b));
                swap_targets(&mut edges, i, j);
            }
        }
        g.with_edges(edges).expect("swaps keep the graph simple")
    }

    pub fn randomize(&self, g: &Snapshot, seed: u64) -> Snapshot {
        self.randomize_with(g, &mut draw_rng(seed, 0))
    }

    pub fn ensemble_stats(&self, g: &Snapshot, count: usize, seed: u64) -> Result<NullEnsembleStats> {
        if count == 0 {
            return Err(Error::InvalidParameter("null ensemble size must be at least 1".into()));
        }
        let samples: Vec<[u64; MOTIF_COUNT]> = (0..count as u64)
            .into_par_iter()
            .map(|draw| count_triads(&self.randomize_with(g, &mut draw_rng(seed, draw))).0)
            .collect();

        let n = count as f64;
        let mut mean = [0.0; MOTIF_COUNT];
        let mut std = [0.0; MOTIF_COUNT];
        for i in 0..MOTIF_COUNT {
            mean[i] = samples.iter().map(|s| s[i] as f64).sum::<f64>() / n;
            let var = samples.iter().map(|s| (s[i] as f64 - mean[i]).powi(2)).sum::<f64>() / n;
            std[i] = var.sqrt();
        }
        Ok(NullEnsembleStats {
            mean,
            std,
            sample_count: count,
            degree_signature: DegreeSignature::of(g),
            generator: GENERATOR_NAME.to_string(),
            seed,
            swaps_per_edge: self.swaps_per_edge,
        })
    }
}

/// One degree-preserving random rewiring of `g` with the default swap count.
pub fn randomize(g: &Snapshot, seed: u64) -> Snapshot {
    NullModel::default().randomize(g, seed)
}

/// Triad statistics over `count` independent draws.
pub fn ensemble_stats(g: &Snapshot, count: usize, seed: u64) -> Result<NullEnsembleStats> {
    NullModel::default().ensemble_stats(g, count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn per_node_degrees(g: &Snapshot) -> Vec<(usize, usize)> {
        (0..g.node_count()).map(|v| (g.in_degree(v), g.out_degree(v))).collect()
    }

    #[test]
    fn single_edge_is_fixed() {
        let g = Snapshot::from_indexed(2, &[(0, 1)]);
        assert_eq!(randomize(&g, 7), g);
    }

    #[test]
    fn two_cycle_is_fixed() {
        let g = Snapshot::from_indexed(2, &[(0, 1), (1, 0)]);
        assert_eq!(randomize(&g, 7), g);
    }

    #[test]
    fn preserves_per_node_degrees() {
        let g = Snapshot::from_indexed(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (2, 5)]);
        for seed in 0..50 {
            let r = randomize(&g, seed);
            assert_eq!(per_node_degrees(&r), per_node_degrees(&g));
            assert_eq!(r.edge_count(), g.edge_count());
        }
    }

    #[test]
    fn swaps_actually_happen() {
        let g = Snapshot::from_indexed(8, &[(0, 1), (2, 3), (4, 5), (6, 7), (1, 2), (3, 4)]);
        assert!((0..10).any(|s| randomize(&g, s) != g));
    }

    #[test]
    fn swap_is_an_involution() {
        let mut e = vec![(0, 1), (2, 3), (4, 5)];
        let orig = e.clone();
        swap_targets(&mut e, 0, 2);
        assert_eq!(e, vec![(0, 5), (2, 3), (4, 1)]);
        swap_targets(&mut e, 0, 2);
        assert_eq!(e, orig);
    }

    #[test]
    fn single_sample_has_zero_std() {
        let g = Snapshot::from_indexed(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let s = ensemble_stats(&g, 1, 3).unwrap();
        assert!(s.std.iter().all(|&x| x == 0.0));
        assert_eq!(s.sample_count, 1);
        assert_eq!(s.mean.map(|x| x as u64), count_triads(&randomize(&g, 3)).0);
    }

    #[test]
    fn unique_realization_matches_real_counts() {
        // a 2-cycle is the only simple digraph with its degree sequence
        let g = Snapshot::from_indexed(2, &[(0, 1), (1, 0)]);
        let s = ensemble_stats(&g, 20, 1).unwrap();
        assert_eq!(s.mean, count_triads(&g).0.map(|x| x as f64));
        assert!(s.std.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_count_rejected() {
        let g = Snapshot::from_indexed(2, &[(0, 1)]);
        assert!(ensemble_stats(&g, 0, 1).is_err());
    }

    #[test]
    fn draw_zero_matches_randomize() {
        let g = Snapshot::from_indexed(8, &[(0, 1), (2, 3), (4, 5), (6, 7), (1, 2), (3, 4)]);
        let a = NullModel::default().randomize_with(&g, &mut draw_rng(11, 0));
        assert_eq!(a, randomize(&g, 11));
    }
}
