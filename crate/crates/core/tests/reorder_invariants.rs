use motifpix_core::cluster::{
    cluster_columns, cosine_distance_matrix, is_bijection, temporal_filter, ColumnKeys, ColumnStrategy, RowStatistic,
    Slot, ViewState,
};
use motifpix_core::matrix::{DenseMatrix, MatrixView};
use motifpix_oracles::SplitMix64;

fn random_matrix(rows: usize, cols: usize, rng: &mut SplitMix64) -> DenseMatrix {
    DenseMatrix::from_rows(
        &(0..rows)
            .map(|_| (0..cols).map(|_| 2.0 * rng.next_f64() - 1.0).collect())
            .collect::<Vec<_>>(),
    )
}

fn displayed(m: &DenseMatrix, v: &ViewState) -> Vec<(usize, usize, f64)> {
    let mut cells = Vec::new();
    for &r in &v.row_permutation {
        for &c in &v.col_permutation {
            cells.push((r, c, m.value(r, c)));
        }
    }
    cells.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    cells
}

#[test]
fn every_strategy_is_a_bijection_and_keeps_values() {
    let mut rng = SplitMix64::new(77);
    for trial in 0..20 {
        let cols = 8 + trial;
        let m = random_matrix(13, cols, &mut rng);
        let times: Vec<i64> = (0..cols as i64).map(|t| (t * 7919) % 101).collect();
        let metric: Vec<f64> = (0..cols).map(|_| rng.next_f64()).collect();
        let clusters = cluster_columns(&(0..cols).map(|c| m.col_values(c)).collect::<Vec<_>>(), &times, Some(10), 2).unwrap();
        let strategies = [
            ColumnStrategy::ByTime,
            ColumnStrategy::ByClusterThenTime,
            ColumnStrategy::ByNetworkMetric("edgeCount".into()),
            ColumnStrategy::ByNodeMetric("pagerank".into()),
        ];
        let identity = displayed(&m, &ViewState::for_matrix(&m));
        for s in &strategies {
            for stat in [
                RowStatistic::Mean,
                RowStatistic::Min,
                RowStatistic::Max,
                RowStatistic::Variance,
                RowStatistic::Std,
                RowStatistic::Median,
            ] {
                let mut v = ViewState::for_matrix(&m).with_clusters(clusters.clone());
                v.order_columns(s, ColumnKeys { times: &times, metric: Some(&metric) }).unwrap();
                v.order_rows(&m, stat).unwrap();
                assert!(is_bijection(&v.col_permutation, cols));
                assert!(is_bijection(&v.row_permutation, 13));
                assert_eq!(displayed(&m, &v), identity);
            }
        }
    }
}

#[test]
fn temporal_filter_excludes_exactly_far_pairs() {
    let mut rng = SplitMix64::new(3);
    let cols: Vec<Vec<f64>> = (0..30).map(|_| (0..13).map(|_| rng.next_f64()).collect()).collect();
    let times: Vec<i64> = (0..30).map(|_| rng.below(40) as i64).collect();
    let d = cosine_distance_matrix(&cols).unwrap();
    let f = temporal_filter(&d, &times, 7).unwrap();
    for i in 0..30 {
        for j in 0..30 {
            let far = (times[i] - times[j]).abs() > 7;
            assert_eq!(f.is_filtered(i, j), far, "({i}, {j})");
            if !far {
                assert_eq!(f.get(i, j), d.get(i, j));
            }
        }
    }
}

#[test]
fn collapse_ten_shows_six_and_hides_four() {
    let labels: Vec<i64> = [vec![0; 10], vec![-1; 3]].concat();
    let assignment = motifpix_core::cluster::ClusterAssignment {
        labels,
        cluster_order: vec![0],
        parameters: motifpix_core::cluster::ClusterParameters {
            min_cluster_size: 5,
            eps_time: None,
        },
    };
    let mut v = ViewState::identity(13, 13).with_clusters(assignment);
    let layout = v.collapse(0).unwrap();
    assert_eq!(layout.visible.len(), 6);
    assert_eq!(layout.hidden_count, 4);
    let slots = &v.column_groups()[0].slots;
    assert_eq!(slots.iter().filter(|s| matches!(s, Slot::Column(_))).count(), 6);
    assert_eq!(slots[3], Slot::Placeholder { hidden: 4 });
    v.expand(0).unwrap();
    assert_eq!(v.column_groups()[0].slots.len(), 10);
}
