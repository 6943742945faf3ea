use motifpix_core::temporal::Snapshot;
use motifpix_core::triad::{classify_triad, count_triads, TriadClass, MOTIF_LABELS};
use motifpix_oracles::triad::{brute_force_census, classify, connected_labels, REPRESENTATIVES};
use motifpix_oracles::{random_digraph, SplitMix64};

#[test]
fn labels_agree_with_oracle_order() {
    assert_eq!(MOTIF_LABELS.to_vec(), connected_labels());
}

#[test]
fn every_three_node_digraph_classifies_like_the_oracle() {
    let pairs = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
    for code in 0u32..64 {
        let mut adj = [[false; 3]; 3];
        let mut edges = Vec::new();
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if code & (1 << bit) != 0 {
                adj[a][b] = true;
                edges.push((a, b));
            }
        }
        let expected = REPRESENTATIVES[classify(&adj)].0;
        let g = Snapshot::from_indexed(3, &edges);
        let got = classify_triad(&g).unwrap();
        assert_eq!(got.label(), expected, "code {code:06b}");
    }
}

#[test]
fn census_matches_brute_force_on_random_digraphs() {
    let mut rng = SplitMix64::new(0x7a1d);
    for case in 0..120 {
        let n = 3 + (case % 22);
        let p = 0.05 + 0.5 * rng.next_f64();
        let edges = random_digraph(n, p, &mut rng);
        let g = Snapshot::from_indexed(n, &edges);
        assert_eq!(count_triads(&g).0, brute_force_census(n, &edges), "case {case}, n {n}");
    }
}

#[test]
fn connected_classes_are_the_last_thirteen() {
    let connected: Vec<&str> = TriadClass::ALL.iter().filter(|c| c.is_connected()).map(|c| c.label()).collect();
    assert_eq!(connected, MOTIF_LABELS.to_vec());
}
