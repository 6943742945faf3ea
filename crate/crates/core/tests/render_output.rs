use motifpix_core::cluster::{cluster_columns, ColumnKeys, ColumnStrategy, ViewState};
use motifpix_core::matrix::DenseMatrix;
use motifpix_core::render::{build_view_model, color_of, to_svg_string, ColorMapping, ColorScale, Rgb, GAP_CELLS};
use motifpix_oracles::SplitMix64;

fn hex(s: &str) -> Rgb {
    s.parse().unwrap()
}

#[test]
fn diverging_anchors_are_exact() {
    let s = ColorScale::diverging();
    assert_eq!(color_of(&s, -1.0), hex("#67001F"));
    assert_eq!(color_of(&s, 0.0), hex("#F7F7F7"));
    assert_eq!(color_of(&s, 1.0), hex("#053061"));
    assert_eq!(color_of(&s, 3.0), hex("#053061"));
    assert_eq!(color_of(&s, -7.5), hex("#67001F"));
}

#[test]
fn grayscale_endpoints() {
    let s = ColorScale::grayscale(0.0, 10.0);
    assert_eq!(color_of(&s, 0.0), Rgb::WHITE);
    assert_eq!(color_of(&s, 10.0), Rgb::BLACK);
}

#[test]
fn diverging_is_monotone_per_segment() {
    let s = ColorScale::diverging();
    let samples: Vec<Rgb> = (0..=200).map(|i| color_of(&s, -1.0 + i as f64 / 100.0)).collect();
    for half in [&samples[..=100], &samples[100..]] {
        for ch in 0..3 {
            let get = |c: &Rgb| [c.0, c.1, c.2][ch];
            let up = half.windows(2).all(|w| get(&w[0]) <= get(&w[1]));
            let down = half.windows(2).all(|w| get(&w[0]) >= get(&w[1]));
            assert!(up || down);
        }
    }
}

fn clustered_svg(seed: u64) -> (String, usize) {
    let mut rng = SplitMix64::new(seed);
    let rows: Vec<Vec<f64>> = (0..13).map(|_| (0..24).map(|c| if c < 12 { rng.next_f64() } else { -rng.next_f64() }).collect()).collect();
    let m = DenseMatrix::from_rows(&rows);
    let cols: Vec<Vec<f64>> = (0..24).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    let times: Vec<i64> = (0..24).collect();
    let a = cluster_columns(&cols, &times, Some(10), 3).unwrap();
    let mut v = ViewState::for_matrix(&m).with_clusters(a);
    v.order_columns(&ColumnStrategy::ByClusterThenTime, ColumnKeys { times: &times, metric: None })
        .unwrap();
    let vm = build_view_model(&m, &v, &ColorMapping::census(), 6).unwrap();
    let groups = v.column_groups().len();
    assert_eq!(vm.grid_width, (24 + (groups as u32 - 1) * GAP_CELLS) * 6);
    (to_svg_string(&vm).unwrap(), vm.cells.len())
}

#[test]
fn identical_inputs_give_identical_svg() {
    let (a, cells) = clustered_svg(8);
    let (b, _) = clustered_svg(8);
    assert_eq!(a, b);
    assert_eq!(cells, 13 * 24);
    assert_eq!(a.matches(r#"class="cell""#).count(), cells);
}
