use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stored in place of infinity for pairs removed by [`temporal_filter`]. The
/// clustering treats any distance at or above it as "never linked".
pub const FILTERED: f64 = f64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMetric {
    #[default]
    CosineDistance,
    Euclidean,
}

impl DistanceMetric {
    pub fn label(self) -> &'static str {
        match self {
            DistanceMetric::CosineDistance => "cosine-distance",
            DistanceMetric::Euclidean => "euclidean",
        }
    }

    fn between(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            DistanceMetric::CosineDistance => cosine_distance(a, b),
            DistanceMetric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt(),
        }
    }
}

/// `1 - cos(a, b)` clamped to `[0, 2]`; 0 when both vectors are zero and 1
/// when exactly one is.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    match (na == 0.0, nb == 0.0) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 1.0,
        _ => (1.0 - dot / (na * nb)).clamp(0.0, 2.0),
    }
}

/// Symmetric pairwise distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    size: usize,
    values: Vec<f64>,
    metric: DistanceMetric,
}

impl DistanceMatrix {
    pub fn from_columns(columns: &[Vec<f64>], metric: DistanceMetric) -> Result<Self> {
        let k = columns.len();
        if let Some(first) = columns.first() {
            if let Some(bad) = columns.iter().find(|c| c.len() != first.len()) {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    actual: bad.len(),
                });
            }
        }
        let rows: Vec<Vec<f64>> = (0..k)
            .into_par_iter()
            .map(|i| (0..k).map(|j| if i == j { 0.0 } else { metric.between(&columns[i], &columns[j]) }).collect())
            .collect();
        let mut values = rows.concat();
        // symmetrize exactly so (i, j) and (j, i) never differ by rounding
        for i in 0..k {
            for j in 0..i {
                values[i * k + j] = values[j * k + i];
            }
        }
        Ok(DistanceMatrix { size: k, values, metric })
    }

    /// Builds from a full row-major square matrix, checking symmetry and the
    /// zero diagonal.
    pub fn from_values(size: usize, values: Vec<f64>, metric: DistanceMetric) -> Result<Self> {
        if values.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                actual: values.len(),
            });
        }
        for i in 0..size {
            if values[i * size + i] != 0.0 {
                return Err(Error::InvalidParameter(format!("distance diagonal at {i} is not zero")));
            }
            for j in 0..i {
                let (a, b) = (values[i * size + j], values[j * size + i]);
                if a != b || a.is_nan() || a < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "distances at ({i}, {j}) must be equal and non-negative"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { size, values, metric })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.size..(i + 1) * self.size]
    }

    pub fn is_filtered(&self, i: usize, j: usize) -> bool {
        self.get(i, j) >= FILTERED
    }
}

/// Cosine distances between the given column vectors.
pub fn cosine_distance_matrix(columns: &[Vec<f64>]) -> Result<DistanceMatrix> {
    DistanceMatrix::from_columns(columns, DistanceMetric::CosineDistance)
}

/// Marks pairs more than `eps_time` steps apart as [`FILTERED`]; pairs at
/// exactly `eps_time` are kept.
pub fn temporal_filter(d: &DistanceMatrix, times: &[i64], eps_time: u64) -> Result<DistanceMatrix> {
    if times.len() != d.size {
        return Err(Error::DimensionMismatch {
            expected: d.size,
            actual: times.len(),
        });
    }
    let mut out = d.clone();
    for i in 0..d.size {
        for j in 0..d.size {
            if i != j && times[i].abs_diff(times[j]) > eps_time {
                out.values[i * d.size + j] = FILTERED;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_closed_forms() {
        assert_eq!(cosine_distance(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(cosine_distance(&[0.3, 0.4], &[0.3, 0.4]), 0.0);
        let d = cosine_distance(&[1.0, 1.0], &[1.0, 0.0]);
        assert!((d - (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(cosine_distance(&[1.0, 0.0], &[-1.0, 0.0]), 2.0);
    }

    #[test]
    fn zero_vectors() {
        assert_eq!(cosine_distance(&[0.0, 0.0], &[0.0, 0.0]), 0.0);
        assert_eq!(cosine_distance(&[0.0, 0.0], &[0.0, 2.0]), 1.0);
    }

    #[test]
    fn matrix_shape_and_symmetry() {
        let cols = vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]];
        let d = cosine_distance_matrix(&cols).unwrap();
        assert_eq!(d.size(), 3);
        for i in 0..3 {
            assert_eq!(d.get(i, i), 0.0);
            for j in 0..3 {
                assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
        assert!(cosine_distance_matrix(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn filter_boundary_is_inclusive() {
        let cols = vec![vec![1.0, 0.0]; 3];
        let d = cosine_distance_matrix(&cols).unwrap();
        let f = temporal_filter(&d, &[3, 10, 12], 7).unwrap();
        assert_eq!(f.get(0, 1), 0.0);
        assert!(f.is_filtered(0, 2) && f.is_filtered(2, 0));
        assert_eq!(f.get(1, 2), 0.0);

        let zero = temporal_filter(&d, &[1, 1, 2], 0).unwrap();
        assert!(!zero.is_filtered(0, 1));
        assert!(zero.is_filtered(0, 2));
        assert_eq!(zero.get(2, 2), 0.0);
    }

    #[test]
    fn from_values_validates() {
        assert!(DistanceMatrix::from_values(2, vec![0.0, 1.0, 1.0, 0.0], DistanceMetric::Euclidean).is_ok());
        assert!(DistanceMatrix::from_values(2, vec![0.0, 1.0, 2.0, 0.0], DistanceMetric::Euclidean).is_err());
        assert!(DistanceMatrix::from_values(2, vec![1.0, 1.0, 1.0, 0.0], DistanceMetric::Euclidean).is_err());
    }
}
