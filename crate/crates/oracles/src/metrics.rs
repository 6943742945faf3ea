//! Reference values for graph metrics.

/// PageRank by solving `(I - d M) x = (1 - d)/n` with Gaussian elimination,
/// where dangling nodes link to everyone.
pub fn pagerank_direct(n: usize, edges: &[(usize, usize)], damping: f64) -> Vec<f64> {
    let mut out_deg = vec![0usize; n];
    for &(a, _) in edges {
        out_deg[a] += 1;
    }
    // m[i][j] = probability of stepping j -> i
    let mut m = vec![vec![0.0f64; n]; n];
    for &(a, b) in edges {
        m[b][a] += 1.0 / out_deg[a] as f64;
    }
    for j in 0..n {
        if out_deg[j] == 0 {
            for row in m.iter_mut() {
                row[j] = 1.0 / n as f64;
            }
        }
    }
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = if i == j { 1.0 } else { 0.0 } - damping * m[i][j];
        }
        a[i][n] = (1.0 - damping) / n as f64;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for k in col..=n {
                        a[row][k] -= f * a[col][k];
                    }
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

/// Newman modularity of a partition on an undirected simple graph.
pub fn modularity(n: usize, edges: &[(usize, usize)], labels: &[usize]) -> f64 {
    let m = edges.len() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let mut deg = vec![0.0f64; n];
    for &(a, b) in edges {
        deg[a] += 1.0;
        deg[b] += 1.0;
    }
    let k = labels.iter().copied().max().map_or(0, |x| x + 1);
    let mut inside = vec![0.0f64; k];
    let mut total = vec![0.0f64; k];
    for &(a, b) in edges {
        if labels[a] == labels[b] {
            inside[labels[a]] += 1.0;
        }
    }
    for v in 0..n {
        total[labels[v]] += deg[v];
    }
    (0..k).map(|c| inside[c] / m - (total[c] / (2.0 * m)).powi(2)).sum()
}

/// Best modularity over every split into at most two groups.
pub fn best_two_partition(n: usize, edges: &[(usize, usize)]) -> (f64, Vec<usize>) {
    assert!(n <= 20, "exhaustive search is exponential");
    let mut best = (f64::NEG_INFINITY, vec![0; n]);
    for mask in 0u32..(1u32 << (n - 1)) {
        let labels: Vec<usize> = (0..n).map(|v| ((mask >> v) & 1) as usize).collect();
        let q = modularity(n, edges, &labels);
        if q > best.0 + 1e-12 {
            best = (q, labels);
        }
    }
    best
}
