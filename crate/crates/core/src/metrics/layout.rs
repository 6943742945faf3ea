//! ForceAtlas2 layout with linear attraction, degree-weighted repulsion,
//! constant-strength gravity and adaptive global speed.
//!
//! Node masses are `degree + 1`. Per step:
//!
//! * repulsion between every pair: `kr * m1 * m2 / d`
//! * attraction along every edge: `d`
//! * gravity toward the origin: `kg * m`
//!
//! The global speed follows the swing/traction heuristic: swinging is how
//! much each node's force changed direction since the previous step,
//! traction how much it kept pointing the same way.
//!
//! Initial positions are a hash of `(seed, node id)` onto the unit disk, so
//! a layout is reproducible from its seed alone. The final positions are
//! shifted so their centroid is the origin.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graphlet::{undirect, UndirectedGraph};
use crate::temporal::Snapshot;

pub const DEFAULT_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForceAtlas2 {
    pub iterations: usize,
    /// Repulsion coefficient.
    pub kr: f64,
    /// Gravity coefficient.
    pub kg: f64,
    pub jitter_tolerance: f64,
}

impl Default for ForceAtlas2 {
    fn default() -> Self {
        ForceAtlas2 {
            iterations: DEFAULT_ITERATIONS,
            kr: 1.0,
            kg: 1.0,
            jitter_tolerance: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutPositions {
    pub nodes: Vec<String>,
    pub positions: Vec<[f64; 2]>,
}

impl LayoutPositions {
    pub fn get(&self, id: &str) -> Option<[f64; 2]> {
        self.nodes.iter().position(|n| n == id).map(|i| self.positions[i])
    }

    /// Diagonal of the axis-aligned bounding box.
    pub fn diagonal(&self) -> f64 {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &self.positions {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if self.positions.is_empty() {
            0.0
        } else {
            (hi[0] - lo[0]).hypot(hi[1] - lo[1])
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutRun {
    pub positions: LayoutPositions,
    /// Mean node displacement of each step.
    pub displacement: Vec<f64>,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn hash_id(id: &str, seed: u64, salt: u64) -> u64 {
    // FNV-1a over the id, keyed by seed and salt
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ mix(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for b in id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    mix(h)
}

/// Deterministic starting point of `id` inside the unit disk.
pub fn initial_position(id: &str, seed: u64) -> [f64; 2] {
    let unit = |h: u64| (h >> 11) as f64 / (1u64 << 53) as f64;
    let r = unit(hash_id(id, seed, 1)).sqrt();
    let theta = std::f64::consts::TAU * unit(hash_id(id, seed, 2));
    [r * theta.cos(), r * theta.sin()]
}

impl ForceAtlas2 {
    pub fn run(&self, g: &UndirectedGraph, seed: u64) -> LayoutRun {
        let n = g.node_count();
        let mut pos: Vec<[f64; 2]> = g.nodes().iter().map(|id| initial_position(id, seed)).collect();
        let mass: Vec<f64> = (0..n).map(|v| g.degree(v) as f64 + 1.0).collect();
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let mut force = vec![[0.0f64; 2]; n];
        let mut speed = 1.0;
        let mut speed_efficiency = 1.0;
        let mut displacement = Vec::with_capacity(self.iterations);

        for _ in 0..self.iterations {
            let old = std::mem::take(&mut force);
            // repulsion and gravity, each node summing over all others in a
            // fixed order so the result does not depend on thread count
            force = (0..n)
                .into_par_iter()
                .map(|i| {
                    let [xi, yi] = pos[i];
                    let mut f = [0.0; 2];
                    for j in 0..n {
                        if j == i {
                            continue;
                        }
                        let (dx, dy) = (xi - pos[j][0], yi - pos[j][1]);
                        let d2 = dx * dx + dy * dy;
                        if d2 > 0.0 {
                            let factor = self.kr * mass[i] * mass[j] / d2;
                            f[0] += dx * factor;
                            f[1] += dy * factor;
                        }
                    }
                    let d = xi.hypot(yi);
                    if d > 0.0 {
                        let factor = self.kg * mass[i] / d;
                        f[0] -= xi * factor;
                        f[1] -= yi * factor;
                    }
                    f
                })
                .collect();
            for &(a, b) in &edges {
                let (dx, dy) = (pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]);
                force[a][0] -= dx;
                force[a][1] -= dy;
                force[b][0] += dx;
                force[b][1] += dy;
            }

            let old = if old.len() == n { old } else { vec![[0.0; 2]; n] };
            let swing = |i: usize| (old[i][0] - force[i][0]).hypot(old[i][1] - force[i][1]);
            let total_swinging: f64 = (0..n).map(|i| mass[i] * swing(i)).sum();
            let total_traction: f64 = (0..n)
                .map(|i| mass[i] * 0.5 * (old[i][0] + force[i][0]).hypot(old[i][1] + force[i][1]))
                .sum();

            if total_swinging > 0.0 && total_traction > 0.0 {
                let nf = n as f64;
                let estimated = 0.05 * nf.sqrt();
                let min_jt = estimated.sqrt();
                let max_jt: f64 = 10.0;
                let mut jt = self.jitter_tolerance
                    * min_jt.max(max_jt.min(estimated * total_traction / (nf * nf)));
                let min_efficiency = 0.05;
                if total_swinging / total_traction > 2.0 {
                    if speed_efficiency > min_efficiency {
                        speed_efficiency *= 0.5;
                    }
                    jt = jt.max(self.jitter_tolerance);
                }
                let target = jt * speed_efficiency * total_traction / total_swinging;
                if total_swinging > jt * total_traction {
                    if speed_efficiency > min_efficiency {
                        speed_efficiency *= 0.7;
                    }
                } else if speed < 1000.0 {
                    speed_efficiency *= 1.3;
                }
                let max_rise = 0.5;
                speed += (target - speed).min(max_rise * speed);
            }

            let mut moved = 0.0;
            for i in 0..n {
                let factor = speed / (1.0 + (speed * mass[i] * swing(i)).sqrt());
                let (dx, dy) = (force[i][0] * factor, force[i][1] * factor);
                pos[i][0] += dx;
                pos[i][1] += dy;
                moved += dx.hypot(dy);
            }
            displacement.push(if n > 0 { moved / n as f64 } else { 0.0 });
        }

        if n > 0 {
            let cx = pos.iter().map(|p| p[0]).sum::<f64>() / n as f64;
            let cy = pos.iter().map(|p| p[1]).sum::<f64>() / n as f64;
            for p in &mut pos {
                p[0] -= cx;
                p[1] -= cy;
            }
        }
        LayoutRun {
            positions: LayoutPositions {
                nodes: g.nodes().to_vec(),
                positions: pos,
            },
            displacement,
        }
    }
}

/// Layout of `g` (edge directions ignored) after `iterations` steps.
pub fn force_layout(g: &Snapshot, iterations: usize, seed: u64) -> LayoutPositions {
    let fa2 = ForceAtlas2 {
        iterations,
        ..Default::default()
    };
    fa2.run(&undirect(g), seed).positions
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::Interval;

    #[test]
    fn single_node_sits_at_origin() {
        let g = Snapshot::from_parts(0, Interval::new(0, 1), vec!["a".into()], vec![]).unwrap();
        let p = force_layout(&g, 50, 3);
        assert_eq!(p.positions, vec![[0.0, 0.0]]);
    }

    #[test]
    fn two_nodes_are_symmetric() {
        let g = Snapshot::from_indexed(2, &[(0, 1)]);
        let p = force_layout(&g, 500, 7);
        let [a, b] = [p.positions[0], p.positions[1]];
        assert!((a[0] + b[0]).abs() < 1e-6 && (a[1] + b[1]).abs() < 1e-6);
        let d = (a[0] - b[0]).hypot(a[1] - b[1]);
        assert!((0.1..=100.0).contains(&d), "distance {d}");
    }

    #[test]
    fn initial_positions_in_unit_disk_and_seeded() {
        for id in ["a", "b", "node-17", ""] {
            let [x, y] = initial_position(id, 1);
            assert!(x.hypot(y) <= 1.0);
            assert_eq!(initial_position(id, 1), [x, y]);
        }
        assert_ne!(initial_position("a", 1), initial_position("a", 2));
    }

    #[test]
    fn deterministic() {
        let g = Snapshot::from_indexed(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (2, 3)]);
        assert_eq!(force_layout(&g, 100, 5), force_layout(&g, 100, 5));
        assert_ne!(force_layout(&g, 100, 5), force_layout(&g, 100, 6));
    }
}
