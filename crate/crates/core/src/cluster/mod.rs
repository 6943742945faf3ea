//! Distances between matrix columns, density clustering into superfamilies
//! and the display state (permutations, collapse) built on top of them.

mod distance;
mod hdbscan;
mod view;

pub use distance::{cosine_distance, cosine_distance_matrix, temporal_filter, DistanceMatrix, DistanceMetric, FILTERED};
pub use hdbscan::{cluster_density, ClusterAssignment, ClusterParameters, DEFAULT_MIN_CLUSTER_SIZE, NOISE};
pub use view::{
    is_bijection, CollapsedLayout, ColumnGroup, ColumnKeys, ColumnStrategy, RowStatistic, Slot, ViewState,
    COLLAPSE_KEEP,
};

use crate::error::Result;

/// Default temporal filter width, in time steps.
pub const DEFAULT_EPS_TIME: u64 = 10;

/// Cosine distances between `columns`, optionally masked by the temporal
/// filter, then density clustering. Clusters are ordered by earliest time.
pub fn cluster_columns(
    columns: &[Vec<f64>],
    times: &[i64],
    eps_time: Option<u64>,
    min_cluster_size: usize,
) -> Result<ClusterAssignment> {
    let mut d = cosine_distance_matrix(columns)?;
    if let Some(eps) = eps_time {
        d = temporal_filter(&d, times, eps)?;
    }
    let mut a = cluster_density(&d, min_cluster_size)?;
    a.parameters.eps_time = eps_time;
    a.order_by_earliest(times);
    Ok(a)
}
