use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{count_triads, TriadCounts, MOTIF_COUNT, MOTIF_LABELS};
use crate::error::{Error, Result};
use crate::null_model::{DegreeSignature, NullEnsembleStats, NullModel, GENERATOR_NAME};
use crate::temporal::{DynamicNetwork, Snapshot};

/// Z-scores and L2-normalized significance profile of one snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusVector {
    pub sp: [f64; MOTIF_COUNT],
    pub z: [f64; MOTIF_COUNT],
    pub snapshot_index: i64,
    pub null_ensemble_size: usize,
}

impl CensusVector {
    pub fn zero(snapshot_index: i64) -> Self {
        CensusVector {
            sp: [0.0; MOTIF_COUNT],
            z: [0.0; MOTIF_COUNT],
            snapshot_index,
            null_ensemble_size: 0,
        }
    }
}

/// `z_i = (real_i - mean_i) / std_i` with `z_i = 0` where `std_i = 0`, and
/// `sp = z / |z|` (all zero when `|z| = 0`).
pub fn significance_profile(
    real: &TriadCounts,
    stats: &NullEnsembleStats,
) -> ([f64; MOTIF_COUNT], [f64; MOTIF_COUNT]) {
    let mut z = [0.0; MOTIF_COUNT];
    for i in 0..MOTIF_COUNT {
        if stats.std[i] > 0.0 {
            z[i] = (real.0[i] as f64 - stats.mean[i]) / stats.std[i];
        }
    }
    let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    let sp = if norm > 0.0 { z.map(|x| x / norm) } else { [0.0; MOTIF_COUNT] };
    (z, sp)
}

/// Census of `g` against a precomputed null ensemble of the same degree
/// sequence.
pub fn compute_census(g: &Snapshot, ensemble: &NullEnsembleStats) -> Result<CensusVector> {
    if ensemble.degree_signature != DegreeSignature::of(g) {
        return Err(Error::DegreeSignatureMismatch);
    }
    let (z, sp) = significance_profile(&count_triads(g), ensemble);
    Ok(CensusVector {
        sp,
        z,
        snapshot_index: g.index(),
        null_ensemble_size: ensemble.sample_count,
    })
}

/// Motifs x time matrix of significance-profile values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusMatrix {
    pub motifs: Vec<String>,
    pub times: Vec<i64>,
    /// Row-major, `motifs.len() * times.len()` entries.
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub null_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

impl CensusMatrix {
    /// Assembles the matrix from per-snapshot census vectors (one column each).
    pub fn from_columns(columns: &[CensusVector]) -> Self {
        let t = columns.len();
        let mut values = vec![0.0; MOTIF_COUNT * t];
        for (j, c) in columns.iter().enumerate() {
            for i in 0..MOTIF_COUNT {
                values[i * t + j] = c.sp[i];
            }
        }
        CensusMatrix {
            motifs: MOTIF_LABELS.iter().map(|s| s.to_string()).collect(),
            times: columns.iter().map(|c| c.snapshot_index).collect(),
            values,
            null_count: None,
            seed: None,
            generator: None,
        }
    }

    pub fn rows(&self) -> usize {
        self.motifs.len()
    }

    pub fn cols(&self) -> usize {
        self.times.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let t = self.cols();
        &self.values[row * t..(row + 1) * t]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows()).map(|r| self.get(r, col)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols()).map(|c| self.column(c)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let expected = self.rows() * self.cols();
        if self.values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.values.len(),
            });
        }
        Ok(())
    }

    /// One row per motif, header `motif,<time indices...>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("motif");
        for t in &self.times {
            out.push(',');
            out.push_str(&t.to_string());
        }
        out.push('\n');
        for (r, label) in self.motifs.iter().enumerate() {
            out.push_str(label);
            for v in self.row(r) {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Full result of a census run, including the per-snapshot ensembles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRun {
    pub matrix: CensusMatrix,
    pub columns: Vec<CensusVector>,
    /// `None` for empty snapshots, which need no null model.
    pub ensembles: Vec<Option<NullEnsembleStats>>,
}

/// Census of one snapshot with its own ensemble seeded by `seed`.
fn census_column(
    model: &NullModel,
    g: &Snapshot,
    null_count: usize,
    seed: u64,
) -> Result<(CensusVector, Option<NullEnsembleStats>)> {
    if g.is_empty() {
        return Ok((CensusVector::zero(g.index()), None));
    }
    let stats = model.ensemble_stats(g, null_count, seed)?;
    let v = compute_census(g, &stats)?;
    Ok((v, Some(stats)))
}

/// Census of every snapshot. Snapshot `j` uses the ensemble seed
/// `seed ^ j`; snapshots are processed in parallel and assembled by index.
pub fn build_census_matrix_with(
    dn: &DynamicNetwork,
    null_count: usize,
    seed: u64,
    model: &NullModel,
) -> Result<CensusRun> {
    if null_count == 0 {
        return Err(Error::InvalidParameter("null count must be at least 1".into()));
    }
    let results: Vec<(CensusVector, Option<NullEnsembleStats>)> = dn
        .snapshots
        .par_iter()
        .enumerate()
        .map(|(j, g)| census_column(model, g, null_count, seed ^ j as u64))
        .collect::<Result<_>>()?;
    let (columns, ensembles): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let mut matrix = CensusMatrix::from_columns(&columns);
    matrix.null_count = Some(null_count);
    matrix.seed = Some(seed);
    matrix.generator = Some(GENERATOR_NAME.to_string());
    Ok(CensusRun {
        matrix,
        columns,
        ensembles,
    })
}

pub fn build_census_matrix(dn: &DynamicNetwork, null_count: usize, seed: u64) -> Result<CensusMatrix> {
    Ok(build_census_matrix_with(dn, null_count, seed, &NullModel::default())?.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::null_model::ensemble_stats;
    use crate::temporal::{discretize, TemporalEdge, TemporalEdgeList};

    fn stats_with(mean: f64, std: f64) -> NullEnsembleStats {
        NullEnsembleStats {
            mean: [mean; MOTIF_COUNT],
            std: [std; MOTIF_COUNT],
            sample_count: 10,
            degree_signature: DegreeSignature {
                in_degrees: vec![],
                out_degrees: vec![],
            },
            generator: GENERATOR_NAME.into(),
            seed: 0,
            swaps_per_edge: 10,
        }
    }

    #[test]
    fn z_is_direct_formula() {
        let mut real = TriadCounts::default();
        real.0[0] = 5;
        let mut s = stats_with(0.0, 0.0);
        s.mean[0] = 2.0;
        s.std[0] = 1.5;
        let (z, sp) = significance_profile(&real, &s);
        assert_eq!(z[0], 2.0);
        assert!(z[1..].iter().all(|&x| x == 0.0));
        assert_eq!(sp[0], 1.0);
    }

    #[test]
    fn profile_is_l2_normalized() {
        let mut real = TriadCounts::default();
        real.0[0] = 3;
        real.0[1] = 4;
        let mut s = stats_with(0.0, 0.0);
        s.std[0] = 1.0;
        s.std[1] = 1.0;
        let (_, sp) = significance_profile(&real, &s);
        assert!((sp[0] - 0.6).abs() < 1e-15 && (sp[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_graph_has_zero_profile() {
        let g = Snapshot::from_indexed(2, &[(0, 1)]);
        let s = ensemble_stats(&g, 25, 9).unwrap();
        let c = compute_census(&g, &s).unwrap();
        assert_eq!(c.sp, [0.0; MOTIF_COUNT]);
        assert_eq!(c.z, [0.0; MOTIF_COUNT]);
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let g = Snapshot::from_indexed(3, &[(0, 1), (1, 2)]);
        let other = Snapshot::from_indexed(3, &[(0, 1)]);
        let s = ensemble_stats(&other, 2, 0).unwrap();
        assert!(matches!(compute_census(&g, &s), Err(Error::DegreeSignatureMismatch)));
    }

    #[test]
    fn single_snapshot_matrix() {
        let edges: Vec<TemporalEdge> = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 1), (2, 4)]
            .iter()
            .map(|&(a, b)| TemporalEdge::new(format!("n{a}"), format!("n{b}"), 0))
            .collect();
        let dn = discretize(&TemporalEdgeList::new("x", edges), 10).unwrap();
        let m = build_census_matrix(&dn, 20, 5).unwrap();
        assert_eq!((m.rows(), m.cols()), (13, 1));
        let stats = ensemble_stats(&dn.snapshots[0], 20, 5).unwrap();
        let single = compute_census(&dn.snapshots[0], &stats).unwrap();
        assert_eq!(m.column(0), single.sp.to_vec());
    }

    #[test]
    fn csv_layout() {
        let m = CensusMatrix::from_columns(&[CensusVector::zero(0), CensusVector::zero(1)]);
        let csv = m.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "motif,0,1");
        assert_eq!(lines.len(), 14);
        assert_eq!(lines[1], "021D,0,0");
    }
}
