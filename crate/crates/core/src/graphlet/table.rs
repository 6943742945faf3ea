//! Orbit lookup for every labeled connected graph on 2 to 5 nodes.

use std::sync::OnceLock;

/// Connected graphlets on 2..=5 nodes in the standard numbering, each with
/// the orbit occupied by each of its nodes.
pub(crate) const GRAPHLETS: &[(usize, &[(u8, u8)], &[u8])] = &[
    (2, &[(0, 1)], &[0, 0]),
    (3, &[(0, 1), (0, 2)], &[2, 1, 1]),
    (3, &[(0, 1), (0, 2), (1, 2)], &[3, 3, 3]),
    (4, &[(0, 1), (0, 3), (1, 2)], &[5, 5, 4, 4]),
    (4, &[(0, 3), (1, 3), (2, 3)], &[6, 6, 6, 7]),
    (4, &[(0, 1), (0, 3), (1, 2), (2, 3)], &[8, 8, 8, 8]),
    (4, &[(0, 3), (1, 2), (1, 3), (2, 3)], &[9, 10, 10, 11]),
    (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)], &[13, 12, 13, 12]),
    (4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], &[14, 14, 14, 14]),
    (5, &[(0, 1), (0, 4), (1, 2), (2, 3)], &[16, 17, 16, 15, 15]),
    (5, &[(0, 4), (1, 3), (2, 3), (3, 4)], &[18, 19, 19, 21, 20]),
    (5, &[(0, 4), (1, 4), (2, 4), (3, 4)], &[22, 22, 22, 22, 23]),
    (5, &[(0, 1), (0, 2), (0, 4), (1, 2), (2, 3)], &[26, 25, 26, 24, 24]),
    (5, &[(0, 4), (1, 2), (1, 3), (2, 3), (3, 4)], &[27, 29, 29, 30, 28]),
    (5, &[(0, 4), (1, 4), (2, 3), (2, 4), (3, 4)], &[31, 31, 32, 32, 33]),
    (5, &[(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)], &[34, 34, 34, 34, 34]),
    (5, &[(0, 1), (1, 3), (1, 4), (2, 3), (2, 4)], &[35, 38, 36, 37, 37]),
    (5, &[(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)], &[39, 42, 41, 40, 40]),
    (5, &[(0, 1), (0, 4), (1, 4), (2, 3), (2, 4), (3, 4)], &[43, 43, 43, 43, 44]),
    (5, &[(0, 1), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], &[45, 47, 46, 48, 48]),
    (5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)], &[50, 50, 49, 49, 49]),
    (5, &[(0, 1), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4)], &[53, 51, 51, 53, 52]),
    (5, &[(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], &[54, 54, 54, 55, 55]),
    (5, &[(0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], &[56, 57, 57, 57, 58]),
    (5, &[(0, 1), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (3, 4)], &[59, 61, 59, 60, 60]),
    (5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 4)], &[63, 63, 64, 62, 64]),
    (5, &[(0, 1), (0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], &[66, 66, 65, 67, 67]),
    (5, &[(0, 1), (0, 3), (0, 4), (1, 2), (1, 4), (2, 3), (2, 4), (3, 4)], &[68, 68, 68, 68, 69]),
    (5, &[(0, 1), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], &[70, 71, 70, 71, 71]),
    (5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], &[72, 72, 72, 72, 72]),
];

/// Bit index of the unordered position pair `i < j` within a subgraph mask.
pub(crate) const fn pair_bit(i: usize, j: usize) -> usize {
    // pairs ordered (0,1) (0,2) (1,2) (0,3) (1,3) (2,3) (0,4) ...
    j * (j - 1) / 2 + i
}

/// `orbits[k][mask]` is the orbit of each position for the connected graph
/// on `k` nodes encoded by `mask`, or `None` if it is disconnected.
pub(crate) struct OrbitTable {
    by_size: [Vec<Option<[u8; 5]>>; 6],
}

impl OrbitTable {
    pub(crate) fn get() -> &'static OrbitTable {
        static TABLE: OnceLock<OrbitTable> = OnceLock::new();
        TABLE.get_or_init(OrbitTable::build)
    }

    #[inline]
    pub(crate) fn lookup(&self, size: usize, mask: u16) -> Option<&[u8; 5]> {
        self.by_size[size][mask as usize].as_ref()
    }

    fn build() -> OrbitTable {
        let mut by_size: [Vec<Option<[u8; 5]>>; 6] = Default::default();
        for (k, slot) in by_size.iter_mut().enumerate().skip(2) {
            let perms = permutations(k);
            let pairs = k * (k - 1) / 2;
            *slot = (0..1u32 << pairs)
                .map(|mask| orbits_of(k, mask as u16, &perms))
                .collect();
        }
        OrbitTable { by_size }
    }
}

fn edge_set(k: usize, mask: u16) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; k]; k];
    for j in 1..k {
        for i in 0..j {
            if mask & (1 << pair_bit(i, j)) != 0 {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    adj
}

fn is_connected(adj: &[Vec<bool>]) -> bool {
    let k = adj.len();
    let mut seen = 1u32;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for (u, &e) in adj[v].iter().enumerate() {
            if e && seen & (1 << u) == 0 {
                seen |= 1 << u;
                stack.push(u);
            }
        }
    }
    seen == (1 << k) - 1
}

fn orbits_of(k: usize, mask: u16, perms: &[Vec<usize>]) -> Option<[u8; 5]> {
    let adj = edge_set(k, mask);
    if !is_connected(&adj) {
        return None;
    }
    let edges = mask.count_ones() as usize;
    for &(size, rep_edges, rep_orbits) in GRAPHLETS.iter().filter(|g| g.0 == k && g.1.len() == edges) {
        let mut rep = vec![vec![false; size]; size];
        for &(a, b) in rep_edges {
            rep[a as usize][b as usize] = true;
            rep[b as usize][a as usize] = true;
        }
        let matches = |p: &Vec<usize>| (0..k).all(|i| (0..k).all(|j| adj[i][j] == rep[p[i]][p[j]]));
        if let Some(p) = perms.iter().find(|p| matches(p)) {
            let mut out = [0u8; 5];
            for i in 0..k {
                out[i] = rep_orbits[p[i]];
            }
            return Some(out);
        }
    }
    unreachable!("every connected graph on {k} nodes is a graphlet")
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_labeled_graph_counts() {
        // labeled connected graphs on n nodes: 1, 4, 38, 728
        let t = OrbitTable::get();
        let counts: Vec<usize> = (2..=5).map(|k| t.by_size[k].iter().flatten().count()).collect();
        assert_eq!(counts, vec![1, 4, 38, 728]);
    }

    #[test]
    fn path_orbits() {
        let t = OrbitTable::get();
        // 0 - 1 - 2 with 1 in the middle: pairs (0,1) and (1,2)
        let mask = (1 << pair_bit(0, 1)) | (1 << pair_bit(1, 2));
        assert_eq!(&t.lookup(3, mask).unwrap()[..3], &[1, 2, 1]);
    }
}
