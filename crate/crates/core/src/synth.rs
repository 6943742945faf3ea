//! Synthetic dynamic networks with planted triad regimes.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::temporal::{TemporalEdge, TemporalEdgeList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Regime {
    /// Planted transitive triangles (030T).
    FeedForward,
    /// Planted directed 3-cycles (030C).
    Cycle,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::FeedForward => "feedForward",
            Regime::Cycle => "cycle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlantedConfig {
    pub nodes: usize,
    /// Triangles planted per snapshot.
    pub motifs: usize,
    /// Uniform random edges added per snapshot.
    pub noise_edges: usize,
    pub block_length: usize,
    pub blocks: usize,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            nodes: 40,
            motifs: 12,
            noise_edges: 15,
            block_length: 20,
            blocks: 4,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedNetwork {
    /// One time step per snapshot, so discretize with bin width 1.
    pub edges: TemporalEdgeList,
    pub regimes: Vec<Regime>,
}

fn node(i: usize) -> String {
    format!("v{i:03}")
}

/// Blocks of `block_length` snapshots alternating between the feed-forward
/// and cycle regimes, starting with feed-forward.
pub fn planted_network(cfg: &PlantedConfig) -> PlantedNetwork {
    let steps = cfg.block_length * cfg.blocks;
    let mut edges = Vec::new();
    let mut regimes = Vec::with_capacity(steps);
    for t in 0..steps {
        let regime = if (t / cfg.block_length.max(1)).is_multiple_of(2) {
            Regime::FeedForward
        } else {
            Regime::Cycle
        };
        regimes.push(regime);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let ts = t as i64;
        let mut push = |a: usize, b: usize| edges.push(TemporalEdge::new(node(a), node(b), ts));
        if cfg.nodes >= 3 {
            for _ in 0..cfg.motifs {
                let v = sample(&mut rng, cfg.nodes, 3).into_vec();
                let (a, b, c) = (v[0], v[1], v[2]);
                push(a, b);
                push(b, c);
                match regime {
                    Regime::FeedForward => push(a, c),
                    Regime::Cycle => push(c, a),
                }
            }
        }
        if cfg.nodes >= 2 {
            for _ in 0..cfg.noise_edges {
                let a = rng.gen_range(0..cfg.nodes);
                let b = (a + rng.gen_range(1..cfg.nodes)) % cfg.nodes;
                push(a, b);
            }
        }
    }
    PlantedNetwork {
        edges: TemporalEdgeList::new("planted", edges),
        regimes,
    }
}

/// Fraction of snapshots whose cluster contains only snapshots of one
/// regime. Noise counts as unrecovered.
pub fn pure_fraction(labels: &[i64], regimes: &[Regime]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let mut seen: BTreeMap<i64, Option<Regime>> = BTreeMap::new();
    for (&l, &r) in labels.iter().zip(regimes) {
        if l >= 0 {
            let e = seen.entry(l).or_insert(Some(r));
            if *e != Some(r) {
                *e = None;
            }
        }
    }
    let recovered = labels
        .iter()
        .filter(|&&l| l >= 0 && seen.get(&l).is_some_and(Option::is_some))
        .count();
    recovered as f64 / labels.len() as f64
}
