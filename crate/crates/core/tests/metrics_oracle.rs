use motifpix_core::graphlet::UndirectedGraph;
use motifpix_core::metrics::{communities, pagerank, ForceAtlas2, DEFAULT_DAMPING};
use motifpix_core::temporal::Snapshot;
use motifpix_oracles::metrics::{best_two_partition, modularity, pagerank_direct};
use motifpix_oracles::{random_digraph, SplitMix64};

fn clique(nodes: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let v: Vec<usize> = nodes.collect();
    let mut e = Vec::new();
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            e.push((a, b));
        }
    }
    e
}

#[test]
fn pagerank_matches_direct_solve() {
    let mut rng = SplitMix64::new(2024);
    for case in 0..20 {
        let n = 2 + case % 25;
        let edges = random_digraph(n, 0.05 + 0.3 * rng.next_f64(), &mut rng);
        let g = Snapshot::from_indexed(n, &edges);
        let got = pagerank(&g, DEFAULT_DAMPING);
        let want = pagerank_direct(n, &edges, DEFAULT_DAMPING);
        assert!((got.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        for v in 0..n {
            assert!((got[v] - want[v]).abs() < 1e-6, "case {case} node {v}: {} vs {}", got[v], want[v]);
            assert!(got[v] > 0.0);
        }
    }
}

#[test]
fn bridged_cliques_match_exhaustive_best_split() {
    let mut e = clique(0..5);
    e.extend(clique(5..10));
    e.push((4, 5));
    let p = communities(&Snapshot::from_indexed(10, &e));
    assert_eq!(p.community_count(), 2);
    let (best_q, best) = best_two_partition(10, &e);
    let same = |a: usize, b: usize| best[a] == best[b];
    for a in 0..10 {
        for b in 0..10 {
            assert_eq!(p.assignment[a] == p.assignment[b], same(a, b));
        }
    }
    assert!((p.modularity - best_q).abs() < 1e-12);
    assert!((p.modularity - modularity(10, &e, &p.assignment)).abs() < 1e-12);
}

#[test]
fn disjoint_cliques_separate_and_settle() {
    let mut e = clique(0..10);
    e.extend(clique(10..20));
    let g = UndirectedGraph::from_edges(20, &e);
    let run = ForceAtlas2::default().run(&g, 11);
    let again = ForceAtlas2::default().run(&g, 11);
    assert_eq!(run.positions, again.positions);

    let p = &run.positions.positions;
    let centroid = |r: std::ops::Range<usize>| {
        let k = r.len() as f64;
        let (x, y) = r.fold((0.0, 0.0), |(x, y), i| (x + p[i][0], y + p[i][1]));
        (x / k, y / k)
    };
    let diameter = |r: std::ops::Range<usize>| {
        let mut d: f64 = 0.0;
        for i in r.clone() {
            for j in r.clone() {
                d = d.max((p[i][0] - p[j][0]).hypot(p[i][1] - p[j][1]));
            }
        }
        d
    };
    let (a, b) = (centroid(0..10), centroid(10..20));
    let between = (a.0 - b.0).hypot(a.1 - b.1);
    let widest = diameter(0..10).max(diameter(10..20));
    assert!(between > widest, "centroids {between} apart, diameter {widest}");

    let tail: f64 = run.displacement[run.displacement.len() - 10..].iter().sum::<f64>() / 10.0;
    assert!(tail < 0.01 * run.positions.diagonal(), "tail displacement {tail}");
}
