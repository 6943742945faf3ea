#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::Path;

use motifpix::cache::CacheRoot;
use motifpix::pipeline::{ingest_dataset, run_census, IngestOptions};

pub const FIXTURE_ID: &str = "fixture";

fn ring(out: &mut String, t: i64, prefix: &str, n: usize, chords: usize) {
    for i in 0..n {
        for step in 1..=chords {
            let _ = writeln!(out, "{prefix}{i:03},{prefix}{:03},{t}", (i + step) % n);
        }
    }
}

/// Four snapshots with 6, 100, 101 and 150 nodes. The last one is three
/// dense rings joined by single edges.
pub fn fixture_csv() -> String {
    let mut s = String::from("source,target,timestamp\n");
    for (a, b) in [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (0, 4)] {
        let _ = writeln!(s, "s{a},s{b},0");
    }
    ring(&mut s, 1, "a", 100, 1);
    ring(&mut s, 2, "b", 101, 1);
    for g in 0..3 {
        ring(&mut s, 3, &format!("c{g}-"), 50, 3);
    }
    let _ = writeln!(s, "c0-000,c1-000,3");
    let _ = writeln!(s, "c1-025,c2-025,3");
    s
}

/// Ingests the fixture into `root` and computes its census.
pub fn build_fixture(root: &Path, nulls: usize, seed: u64) -> CacheRoot {
    let csv = root.join("fixture.csv");
    std::fs::write(&csv, fixture_csv()).unwrap();
    let cache = CacheRoot::new(root.join("cache"));
    let opts = IngestOptions {
        id: Some(FIXTURE_ID.into()),
        bin_width: Some(1),
        ..Default::default()
    };
    ingest_dataset(&cache, &csv, &opts).unwrap();
    let mut ds = cache.open(FIXTURE_ID).unwrap();
    run_census(&mut ds, nulls, seed, None).unwrap();
    cache
}
