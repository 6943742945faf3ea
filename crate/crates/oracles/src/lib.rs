//! Slow, obviously-correct reference implementations for the test suites.
//!
//! Nothing in here shares code with `motifpix-core`; inputs are plain node
//! counts and edge lists so the oracles stay independent of the
//! implementation's data structures.

pub mod graphlet;
pub mod metrics;
pub mod triad;

/// Small deterministic generator (SplitMix64) so oracle fixtures do not depend
/// on the RNG crate used by the implementation.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Directed G(n, p) without self-loops.
pub fn random_digraph(n: usize, p: f64, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.next_f64() < p {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Undirected G(n, p), each edge listed once with `a < b`.
pub fn random_graph(n: usize, p: f64, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.next_f64() < p {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// All permutations of `0..n` (Heap's algorithm), used for isomorphism tests.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}
