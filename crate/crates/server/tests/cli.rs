mod common;

use std::path::Path;
use std::process::{Command, Output};

use motifpix_core::cluster::RowStatistic;
use motifpix_core::synth::Regime;
use motifpix_core::triad::{CensusMatrix, MOTIF_LABELS};
use serde_json::Value;

fn motifpix(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motifpix"))
        .arg("--cache")
        .arg(cache)
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .unwrap()
}

fn ok(out: Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}\nstdout {}\nstderr {}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn census_of(cache: &Path, id: &str) -> CensusMatrix {
    let raw: Value = serde_json::from_slice(&std::fs::read(cache.join(id).join("census.json")).unwrap()).unwrap();
    serde_json::from_value(raw["data"].clone()).unwrap()
}

fn hash_line(stdout: &str) -> String {
    stdout.lines().find(|l| l.starts_with("census hash")).unwrap().to_string()
}

fn fixture(dir: &Path) -> std::path::PathBuf {
    let csv = dir.join("fixture.csv");
    std::fs::write(&csv, common::fixture_csv()).unwrap();
    csv
}

#[test]
fn ingest_reports_totals_and_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let csv = fixture(dir.path());
    let out = ok(motifpix(&cache, &["ingest", csv.to_str().unwrap(), "--bin", "1", "--id", "fx"]));
    assert!(out.contains("4 snapshots"), "{out}");
    assert!(out.contains("357 nodes"), "{out}");
    assert!(cache.join("fx/network.json").exists());

    let other = dir.path().join("other");
    ok(motifpix(&cache, &["ingest", csv.to_str().unwrap(), "--bin", "1", "--id", "o", "--out", other.to_str().unwrap()]));
    assert!(other.join("o/manifest.json").exists());

    let missing = motifpix(&cache, &["ingest", "/definitely/missing.csv"]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.csv"));

    let zero = motifpix(&cache, &["ingest", csv.to_str().unwrap(), "--bin", "0"]);
    assert_eq!(zero.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&zero.stderr).contains("--bin"));

    let unknown = motifpix(&cache, &["census", "--dataset", "ghost"]);
    assert!(!unknown.status.success());
}

#[test]
fn census_is_reproducible_and_degenerates_with_one_null() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let csv = fixture(dir.path());
    ok(motifpix(&cache, &["ingest", csv.to_str().unwrap(), "--bin", "1", "--id", "fx"]));
    let a = ok(motifpix(&cache, &["census", "--dataset", "fx", "--nulls", "8", "--seed", "4"]));
    let b = ok(motifpix(&cache, &["census", "--dataset", "fx", "--nulls", "8", "--seed", "4"]));
    assert_eq!(hash_line(&a), hash_line(&b));
    let c = ok(motifpix(&cache, &["census", "--dataset", "fx", "--nulls", "8", "--seed", "5"]));
    assert_ne!(hash_line(&a), hash_line(&c));

    ok(motifpix(&cache, &["census", "--dataset", "fx", "--nulls", "1"]));
    assert!(census_of(&cache, "fx").values.iter().all(|&v| v == 0.0));
    assert!(cache.join("fx/census.csv").exists());

    let zero = motifpix(&cache, &["census", "--dataset", "fx", "--nulls", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn planted_dataset_has_expected_sign_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let csv = dir.path().join("planted.csv");
    let regimes = dir.path().join("regimes.json");
    ok(motifpix(&cache, &[
        "synth", "--out", csv.to_str().unwrap(), "--regimes", regimes.to_str().unwrap(), "--block-length", "3", "--blocks", "2",
    ]));
    ok(motifpix(&cache, &["ingest", csv.to_str().unwrap(), "--bin", "1"]));
    ok(motifpix(&cache, &["census", "--dataset", "planted", "--nulls", "30", "--seed", "1"]));
    let m = census_of(&cache, "planted");
    let regimes: Vec<Regime> = serde_json::from_slice(&std::fs::read(&regimes).unwrap()).unwrap();
    assert_eq!(m.cols(), 6);
    let ff = MOTIF_LABELS.iter().position(|&l| l == "030T").unwrap();
    let cyc = MOTIF_LABELS.iter().position(|&l| l == "030C").unwrap();
    for (t, r) in regimes.iter().enumerate() {
        let (planted, other) = match r {
            Regime::FeedForward => (ff, cyc),
            Regime::Cycle => (cyc, ff),
        };
        assert!(m.get(planted, t) > 0.0 && m.get(planted, t) > m.get(other, t), "t={t}");
    }
}

#[test]
fn render_variants() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let csv = dir.path().join("planted.csv");
    ok(motifpix(&cache, &["synth", "--out", csv.to_str().unwrap(), "--block-length", "8", "--blocks", "2"]));
    ok(motifpix(&cache, &["ingest", csv.to_str().unwrap(), "--bin", "1", "--id", "p"]));
    ok(motifpix(&cache, &["census", "--dataset", "p", "--nulls", "20"]));
    let svg = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let plain = svg("plain.svg");
    let out = ok(motifpix(&cache, &["render", "--dataset", "p", "--svg", &plain]));
    assert!(out.contains("13 rows x 16 columns, 0 clusters"), "{out}");
    let text = std::fs::read_to_string(&plain).unwrap();
    assert_eq!(text.matches(r#"class="cell""#).count(), 13 * 16);
    let cols: Vec<&str> = text
        .split("<g class=\"col-labels\"")
        .nth(1)
        .unwrap()
        .split("</g>")
        .next()
        .unwrap()
        .split("rotate(-90)\" dominant-baseline=\"middle\">")
        .skip(1)
        .map(|s| s.split('<').next().unwrap())
        .collect();
    let expected: Vec<String> = (0..16).map(|t| t.to_string()).collect();
    assert_eq!(cols, expected);

    let again = svg("again.svg");
    ok(motifpix(&cache, &["render", "--dataset", "p", "--svg", &again]));
    assert_eq!(std::fs::read(&plain).unwrap(), std::fs::read(&again).unwrap());

    let clustered = svg("clustered.svg");
    let out = ok(motifpix(&cache, &[
        "render", "--dataset", "p", "--svg", &clustered, "--cluster", "--eps-time", "8", "--min-cluster-size", "3",
        "--sort-cols", "byClusterThenTime",
    ]));
    assert!(!out.contains(" 0 clusters"), "{out}");
    assert!(std::fs::read_to_string(&clustered).unwrap().contains(r#"class="clusters""#));

    let sorted = svg("sorted.svg");
    let out = ok(motifpix(&cache, &["render", "--dataset", "p", "--svg", &sorted, "--sort-rows", "median"]));
    let rows: Vec<&str> = out.lines().find(|l| l.starts_with("rows ")).unwrap()[5..].split(',').collect();
    let m = census_of(&cache, "p");
    let medians: Vec<f64> = rows
        .iter()
        .map(|r| RowStatistic::Median.of(m.row(MOTIF_LABELS.iter().position(|l| l == r).unwrap())))
        .collect();
    assert!(medians.windows(2).all(|w| w[0] >= w[1]), "{rows:?} {medians:?}");

    let gdv = svg("gdv.svg");
    let png = svg("gdv.png");
    ok(motifpix(&cache, &["render", "--dataset", "p", "--view", "gdv", "--t", "1", "--svg", &gdv, "--png", &png]));
    assert!(std::fs::metadata(&png).unwrap().len() > 0);

    let none = motifpix(&cache, &["render", "--dataset", "p"]);
    assert!(!none.status.success());
    let no_t = motifpix(&cache, &["render", "--dataset", "p", "--view", "gdv", "--svg", &gdv]);
    assert!(!no_t.status.success());
}
