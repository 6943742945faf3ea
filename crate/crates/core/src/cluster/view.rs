use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::hdbscan::ClusterAssignment;
use crate::error::{Error, Result};
use crate::matrix::MatrixView;

/// Members shown at each end of a collapsed cluster.
pub const COLLAPSE_KEEP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ColumnStrategy {
    ByTime,
    ByClusterThenTime,
    /// Ascending by a per-snapshot metric such as `edgeCount`.
    ByNetworkMetric(String),
    /// Ascending by a per-node metric such as `pagerank`.
    ByNodeMetric(String),
}

impl FromStr for ColumnStrategy {
    type Err = Error;

    /// Accepts `byTime`, `byClusterThenTime`, `byNetworkMetric:<name>` and
    /// `byNodeMetric:<name>` (a parenthesized name also works).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.find([':', '(']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')').trim())),
            None => (s, None),
        };
        match (head, arg) {
            ("byTime", None) => Ok(ColumnStrategy::ByTime),
            ("byClusterThenTime", None) => Ok(ColumnStrategy::ByClusterThenTime),
            ("byNetworkMetric", Some(m)) if !m.is_empty() => Ok(ColumnStrategy::ByNetworkMetric(m.to_string())),
            ("byNodeMetric", Some(m)) if !m.is_empty() => Ok(ColumnStrategy::ByNodeMetric(m.to_string())),
            _ => Err(Error::UnknownStrategy(s.to_string())),
        }
    }
}

impl TryFrom<String> for ColumnStrategy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ColumnStrategy> for String {
    fn from(s: ColumnStrategy) -> Self {
        s.to_string()
    }
}

impl fmt::Display for ColumnStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnStrategy::ByTime => f.write_str("byTime"),
            ColumnStrategy::ByClusterThenTime => f.write_str("byClusterThenTime"),
            ColumnStrategy::ByNetworkMetric(m) => write!(f, "byNetworkMetric:{m}"),
            ColumnStrategy::ByNodeMetric(m) => write!(f, "byNodeMetric:{m}"),
        }
    }
}

impl ColumnStrategy {
    pub fn metric(&self) -> Option<&str> {
        match self {
            ColumnStrategy::ByNetworkMetric(m) | ColumnStrategy::ByNodeMetric(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatistic {
    Mean,
    Min,
    Max,
    Variance,
    Std,
    Median,
}

impl FromStr for RowStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(RowStatistic::Mean),
            "min" => Ok(RowStatistic::Min),
            "max" => Ok(RowStatistic::Max),
            "variance" | "var" => Ok(RowStatistic::Variance),
            "std" => Ok(RowStatistic::Std),
            "median" => Ok(RowStatistic::Median),
            _ => Err(Error::UnknownStrategy(s.to_string())),
        }
    }
}

impl RowStatistic {
    /// The statistic over `values`; population variance, and the mean of the
    /// two middle values for an even-length median. 0 for an empty slice.
    pub fn of(self, values: &[f64]) -> f64 {
        if values.is_empty() {
            return 0.0;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = || values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        match self {
            RowStatistic::Mean => mean,
            RowStatistic::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            RowStatistic::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            RowStatistic::Variance => variance(),
            RowStatistic::Std => variance().sqrt(),
            RowStatistic::Median => {
                let mut v = values.to_vec();
                v.sort_by(f64::total_cmp);
                let mid = v.len() / 2;
                if v.len() % 2 == 1 {
                    v[mid]
                } else {
                    (v[mid - 1] + v[mid]) / 2.0
                }
            }
        }
    }
}

/// Sort keys available to [`ViewState::order_columns`].
#[derive(Debug, Clone, Copy)]
pub struct ColumnKeys<'a> {
    /// Time index of each column (node index for GDV views).
    pub times: &'a [i64],
    /// Metric value per column for the metric strategies.
    pub metric: Option<&'a [f64]>,
}

/// Display permutations plus clustering and collapse state.
///
/// `row_permutation[k]` is the original row shown at display position `k`;
/// likewise for columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewState {
    pub row_permutation: Vec<usize>,
    pub col_permutation: Vec<usize>,
    #[serde(default)]
    pub clusters: Option<ClusterAssignment>,
    #[serde(default)]
    pub collapsed: BTreeSet<i64>,
}

/// Whether `perm` contains each of `0..n` exactly once.
pub fn is_bijection(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Visible columns of one cluster, collapsed or not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CollapsedLayout {
    pub cluster_id: i64,
    /// Original column indices in display order.
    pub visible: Vec<usize>,
    pub hidden_count: usize,
    /// Number of visible columns before the placeholder, if there is one.
    pub placeholder_after: Option<usize>,
}

impl CollapsedLayout {
    fn of(cluster_id: i64, members: &[usize], collapse: bool) -> Self {
        if collapse && members.len() > 2 * COLLAPSE_KEEP {
            let mut visible = members[..COLLAPSE_KEEP].to_vec();
            visible.extend_from_slice(&members[members.len() - COLLAPSE_KEEP..]);
            CollapsedLayout {
                cluster_id,
                visible,
                hidden_count: members.len() - 2 * COLLAPSE_KEEP,
                placeholder_after: Some(COLLAPSE_KEEP),
            }
        } else {
            CollapsedLayout {
                cluster_id,
                visible: members.to_vec(),
                hidden_count: 0,
                placeholder_after: None,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Column(usize),
    Placeholder { hidden: usize },
}

/// A run of adjacent display columns sharing one cluster label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnGroup {
    /// `None` when the view has no clustering.
    pub cluster: Option<i64>,
    pub slots: Vec<Slot>,
}

impl ViewState {
    pub fn identity(rows: usize, cols: usize) -> Self {
        ViewState {
            row_permutation: (0..rows).collect(),
            col_permutation: (0..cols).collect(),
            clusters: None,
            collapsed: BTreeSet::new(),
        }
    }

    pub fn for_matrix(m: &dyn MatrixView) -> Self {
        ViewState::identity(m.rows(), m.cols())
    }

    pub fn with_clusters(mut self, clusters: ClusterAssignment) -> Self {
        self.clusters = Some(clusters);
        self
    }

    /// Checks both permutations and the cluster labels against a
    /// `rows x cols` matrix.
    pub fn validate(&self, rows: usize, cols: usize) -> Result<()> {
        if !is_bijection(&self.row_permutation, rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                actual: self.row_permutation.len(),
            });
        }
        if !is_bijection(&self.col_permutation, cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                actual: self.col_permutation.len(),
            });
        }
        if let Some(c) = &self.clusters {
            if c.labels.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: c.labels.len(),
                });
            }
        }
        Ok(())
    }

    pub fn order_columns(&mut self, strategy: &ColumnStrategy, keys: ColumnKeys<'_>) -> Result<()> {
        let n = self.col_permutation.len();
        if keys.times.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: keys.times.len(),
            });
        }
        let times = keys.times;
        let mut perm: Vec<usize> = (0..n).collect();
        match strategy {
            ColumnStrategy::ByTime => perm.sort_by_key(|&i| times[i]),
            ColumnStrategy::ByClusterThenTime => {
                let clusters = self.clusters.as_mut().ok_or(Error::MissingClusters)?;
                clusters.order_by_earliest(times);
                let rank = |label: i64| {
                    clusters
                        .cluster_order
                        .iter()
                        .position(|&id| id == label)
                        .unwrap_or(usize::MAX)
                };
                perm.sort_by_key(|&i| (rank(clusters.labels[i]), times[i]));
            }
            ColumnStrategy::ByNetworkMetric(_) | ColumnStrategy::ByNodeMetric(_) => {
                let metric = keys.metric.filter(|m| m.len() == n).ok_or(Error::MissingMetric)?;
                perm.sort_by(|&a, &b| metric[a].total_cmp(&metric[b]));
            }
        }
        self.col_permutation = perm;
        Ok(())
    }

    /// Rows descending by `stat`, ties in original order.
    pub fn order_rows(&mut self, m: &dyn MatrixView, stat: RowStatistic) -> Result<()> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(Error::NothingToRender);
        }
        let keys: Vec<f64> = (0..m.rows()).map(|r| stat.of(&m.row_values(r))).collect();
        let mut perm: Vec<usize> = (0..m.rows()).collect();
        perm.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]));
        self.row_permutation = perm;
        Ok(())
    }

    fn check_cluster(&self, id: i64) -> Result<&ClusterAssignment> {
        let clusters = self.clusters.as_ref().ok_or(Error::MissingClusters)?;
        if clusters.contains(id) {
            Ok(clusters)
        } else {
            Err(Error::UnknownCluster(id))
        }
    }

    /// Members of cluster `id` in display order.
    pub fn members_in_display_order(&self, id: i64) -> Result<Vec<usize>> {
        let clusters = self.check_cluster(id)?;
        Ok(self
            .col_permutation
            .iter()
            .copied()
            .filter(|&c| clusters.labels[c] == id)
            .collect())
    }

    /// Layout of cluster `id` as it would look collapsed.
    pub fn collapse_layout(&self, id: i64) -> Result<CollapsedLayout> {
        Ok(CollapsedLayout::of(id, &self.members_in_display_order(id)?, true))
    }

    pub fn collapse(&mut self, id: i64) -> Result<CollapsedLayout> {
        let layout = self.collapse_layout(id)?;
        self.collapsed.insert(id);
        Ok(layout)
    }

    pub fn expand(&mut self, id: i64) -> Result<()> {
        self.check_cluster(id)?;
        self.collapsed.remove(&id);
        Ok(())
    }

    /// Display columns split into runs of equal cluster label. Runs of a
    /// collapsed cluster longer than six columns keep three at each end
    /// around a placeholder.
    pub fn column_groups(&self) -> Vec<ColumnGroup> {
        let Some(clusters) = &self.clusters else {
            return vec![ColumnGroup {
                cluster: None,
                slots: self.col_permutation.iter().map(|&c| Slot::Column(c)).collect(),
            }];
        };
        let mut groups = Vec::new();
        let mut start = 0;
        let perm = &self.col_permutation;
        while start < perm.len() {
            let label = clusters.labels[perm[start]];
            let mut end = start;
            while end < perm.len() && clusters.labels[perm[end]] == label {
                end += 1;
            }
            let layout = CollapsedLayout::of(label, &perm[start..end], self.collapsed.contains(&label));
            let mut slots: Vec<Slot> = layout.visible.iter().map(|&c| Slot::Column(c)).collect();
            if let Some(at) = layout.placeholder_after {
                slots.insert(at, Slot::Placeholder {
                    hidden: layout.hidden_count,
                });
            }
            groups.push(ColumnGroup {
                cluster: Some(label),
                slots,
            });
            start = end;
        }
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::hdbscan::{ClusterParameters, NOISE};
    use crate::matrix::DenseMatrix;

    fn assignment(labels: Vec<i64>) -> ClusterAssignment {
        let mut ids: Vec<i64> = labels.iter().copied().filter(|&l| l != NOISE).collect();
        ids.sort_unstable();
        ids.dedup();
        ClusterAssignment {
            labels,
            cluster_order: ids,
            parameters: ClusterParameters {
                min_cluster_size: 2,
                eps_time: None,
            },
        }
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("byTime".parse::<ColumnStrategy>().unwrap(), ColumnStrategy::ByTime);
        assert_eq!(
            "byNetworkMetric:edgeCount".parse::<ColumnStrategy>().unwrap(),
            ColumnStrategy::ByNetworkMetric("edgeCount".into())
        );
        assert_eq!(
            "byNodeMetric(pagerank)".parse::<ColumnStrategy>().unwrap(),
            ColumnStrategy::ByNodeMetric("pagerank".into())
        );
        assert!(matches!("byColor".parse::<ColumnStrategy>(), Err(Error::UnknownStrategy(_))));
        assert!("byNodeMetric".parse::<ColumnStrategy>().is_err());
        let json = serde_json::to_string(&ColumnStrategy::ByNodeMetric("pagerank".into())).unwrap();
        assert_eq!(json, "\"byNodeMetric:pagerank\"");
    }

    #[test]
    fn by_time_restores_order() {
        let mut v = ViewState::identity(1, 4);
        let times = [30, 10, 40, 20];
        v.order_columns(&ColumnStrategy::ByTime, ColumnKeys { times: &times, metric: None })
            .unwrap();
        assert_eq!(v.col_permutation, vec![1, 3, 0, 2]);
    }

    #[test]
    fn metric_sort_is_ascending() {
        let mut v = ViewState::identity(1, 3);
        let metric = [3.0, 1.0, 2.0];
        let strategy = ColumnStrategy::ByNetworkMetric("edgeCount".into());
        v.order_columns(&strategy, ColumnKeys { times: &[0, 1, 2], metric: Some(&metric) })
            .unwrap();
        assert_eq!(v.col_permutation, vec![1, 2, 0]);
        assert!(matches!(
            v.order_columns(&strategy, ColumnKeys { times: &[0, 1, 2], metric: None }),
            Err(Error::MissingMetric)
        ));
    }

    #[test]
    fn clusters_by_earliest_member() {
        // cluster 0 starts at t = 5, cluster 1 at t = 2
        let mut v = ViewState::identity(1, 6).with_clusters(assignment(vec![0, 0, 1, 1, NOISE, 0]));
        let times = [5, 7, 2, 3, 0, 6];
        v.order_columns(&ColumnStrategy::ByClusterThenTime, ColumnKeys { times: &times, metric: None })
            .unwrap();
        assert_eq!(v.col_permutation, vec![2, 3, 0, 5, 1, 4]);
        assert_eq!(v.clusters.as_ref().unwrap().cluster_order, vec![1, 0]);

        let mut plain = ViewState::identity(1, 2);
        assert!(matches!(
            plain.order_columns(&ColumnStrategy::ByClusterThenTime, ColumnKeys { times: &[0, 1], metric: None }),
            Err(Error::MissingClusters)
        ));
    }

    #[test]
    fn rows_descending_with_stable_ties() {
        let m = DenseMatrix::from_rows(&[vec![0.5, 0.5], vec![-0.2, -0.2], vec![0.9, 0.9]]);
        let mut v = ViewState::for_matrix(&m);
        v.order_rows(&m, RowStatistic::Mean).unwrap();
        assert_eq!(v.row_permutation, vec![2, 0, 1]);

        let flat = DenseMatrix::from_rows(&vec![vec![0.1; 3]; 4]);
        let mut v = ViewState::for_matrix(&flat);
        v.order_rows(&flat, RowStatistic::Max).unwrap();
        assert_eq!(v.row_permutation, vec![0, 1, 2, 3]);

        let alt = DenseMatrix::from_rows(&[vec![0.0, 0.0, 0.0], vec![-1.0, 1.0, -1.0]]);
        let mut v = ViewState::for_matrix(&alt);
        v.order_rows(&alt, RowStatistic::Variance).unwrap();
        assert_eq!(v.row_permutation, vec![1, 0]);
    }

    #[test]
    fn statistics() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(RowStatistic::Median.of(&v), 2.5);
        assert_eq!(RowStatistic::Median.of(&v[..3]), 3.0);
        assert_eq!(RowStatistic::Variance.of(&v), 1.25);
        assert_eq!(RowStatistic::Min.of(&v), 1.0);
        assert_eq!("median".parse::<RowStatistic>().unwrap(), RowStatistic::Median);
    }

    #[test]
    fn collapse_arithmetic() {
        let labels: Vec<i64> = [vec![0; 10], vec![1; 6], vec![2; 7]].concat();
        let mut v = ViewState::identity(1, 23).with_clusters(assignment(labels));
        let ten = v.collapse_layout(0).unwrap();
        assert_eq!(ten.visible, vec![0, 1, 2, 7, 8, 9]);
        assert_eq!(ten.hidden_count, 4);
        let six = v.collapse_layout(1).unwrap();
        assert_eq!((six.visible.len(), six.hidden_count, six.placeholder_after), (6, 0, None));
        assert_eq!(v.collapse_layout(2).unwrap().hidden_count, 1);
        assert!(matches!(v.collapse_layout(9), Err(Error::UnknownCluster(9))));

        v.collapse(0).unwrap();
        let groups = v.column_groups();
        assert_eq!(groups.len(), 3);
        assert_eq!(groups[0].slots.len(), 7);
        assert_eq!(groups[0].slots[3], Slot::Placeholder { hidden: 4 });
        v.expand(0).unwrap();
        assert_eq!(v.column_groups()[0].slots.len(), 10);
    }

    #[test]
    fn bijection_check() {
        assert!(is_bijection(&[2, 0, 1], 3));
        assert!(!is_bijection(&[0, 0, 1], 3));
        assert!(!is_bijection(&[0, 1], 3));
        assert!(!is_bijection(&[0, 1, 3], 3));
    }

    #[test]
    fn json_shape() {
        let v = ViewState::identity(2, 2);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["rowPermutation"], serde_json::json!([0, 1]));
        assert_eq!(json["collapsed"], serde_json::json!([]));
        let back: ViewState = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
    }
}
