//! Cached analytics operations shared by the CLI and the HTTP API.

use std::path::{Path, PathBuf};

use motifpix_core::cluster::{
    cluster_columns, ClusterAssignment, ColumnKeys, ColumnStrategy, RowStatistic, ViewState, DEFAULT_EPS_TIME,
    DEFAULT_MIN_CLUSTER_SIZE,
};
use motifpix_core::graphlet::{compute_gdv, GdvMatrix};
use motifpix_core::metrics::{
    communities, network_metrics, node_metrics, CommunityPartition, ForceAtlas2, LayoutPositions, NetworkMetrics,
    NodeMetrics, COMMUNITY_NODE_THRESHOLD, DEFAULT_DAMPING,
};
use motifpix_core::null_model::DEFAULT_NULL_COUNT;
use motifpix_core::render::{build_view_model, export_png, export_svg, ColorMapping, PixelViewModel};
use motifpix_core::temporal::{discretize, ingest, supergraph, DatasetManifest, DynamicNetwork, EdgeListFormat, Snapshot};
use motifpix_core::triad::{build_census_matrix, CensusMatrix};
use serde::{Deserialize, Serialize};

use crate::cache::{
    sha256_hex, CacheError, CacheManifest, CacheRoot, DatasetCache, DatasetSummary, CENSUS, DEFAULT_MAX_GRAPHLET_SIZE,
    LAYOUT, METRICS, NETWORK, SCHEMA_VERSION,
};

pub const DEFAULT_BIN_WIDTH: i64 = 86_400;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Core(#[from] motifpix_core::Error),
    #[error("snapshot {t} out of range (dataset has {count})")]
    SnapshotOutOfRange { t: usize, count: usize },
    #[error("invalid request: {0}")]
    Invalid(String),
}

pub type PipelineResult<T> = std::result::Result<T, PipelineError>;

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub id: Option<String>,
    /// Overrides the bin width of a JSON dataset manifest.
    pub bin_width: Option<i64>,
    pub format: EdgeListFormat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IngestReport {
    pub dataset_id: String,
    pub summary: DatasetSummary,
}

fn default_id(path: &Path) -> String {
    let stem = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    let stem = stem.split('.').next().unwrap_or("dataset");
    let id: String = stem
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
        .collect();
    if id.is_empty() {
        "dataset".into()
    } else {
        id
    }
}

/// Reads an edge file (or a JSON dataset manifest pointing at one),
/// discretizes it and writes a fresh cache skeleton.
pub fn ingest_dataset(root: &CacheRoot, source: &Path, opts: &IngestOptions) -> PipelineResult<IngestReport> {
    let is_manifest = source.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let (edge_path, format, bin_width, manifest_id): (PathBuf, EdgeListFormat, i64, Option<String>) = if is_manifest {
        let m = DatasetManifest::load(source)?;
        (m.path.clone(), m.format(), opts.bin_width.unwrap_or(m.bin_width), Some(m.id))
    } else {
        (
            source.to_path_buf(),
            opts.format.clone(),
            opts.bin_width.unwrap_or(DEFAULT_BIN_WIDTH),
            None,
        )
    };
    let id = opts
        .id
        .clone()
        .or(manifest_id)
        .unwrap_or_else(|| default_id(&edge_path));
    crate::cache::validate_id(&id)?;

    let edges = ingest(&edge_path, &format)?;
    let mut dn = discretize(&edges, bin_width)?;
    dn.id = id.clone();
    let summary = DatasetSummary {
        snapshots: dn.len(),
        nodes: dn.global_nodes.len(),
        edges: dn.total_edges(),
        malformed_rows: edges.malformed_rows.len(),
        min_timestamp: dn.min_timestamp,
    };
    let manifest = CacheManifest {
        dataset_id: id.clone(),
        source: edge_path,
        bin_width,
        null_count: DEFAULT_NULL_COUNT,
        seed: DEFAULT_SEED,
        max_graphlet_size: DEFAULT_MAX_GRAPHLET_SIZE,
        version: SCHEMA_VERSION,
        summary: summary.clone(),
    };
    let ds = root.create(manifest)?;
    ds.write_artifact(NETWORK, &dn)?;
    Ok(IngestReport {
        dataset_id: id,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusReport {
    pub dataset_id: String,
    pub snapshots: usize,
    pub null_count: usize,
    pub seed: u64,
    /// SHA-256 of the census artifact bytes.
    pub census_hash: String,
}

/// Recomputes the census (and per-snapshot network metrics) under the given
/// parameters, updating the manifest.
pub fn run_census(ds: &mut DatasetCache, null_count: usize, seed: u64, max_graphlet_size: Option<usize>) -> PipelineResult<CensusReport> {
    if null_count == 0 {
        return Err(PipelineError::Invalid("--nulls must be at least 1".into()));
    }
    if let Some(k) = max_graphlet_size {
        motifpix_core::graphlet::orbit_count(k)?;
    }
    let dn: DynamicNetwork = ds.read_artifact(NETWORK)?;
    let manifest = CacheManifest {
        null_count,
        seed,
        max_graphlet_size: max_graphlet_size.unwrap_or(ds.manifest().max_graphlet_size),
        ..ds.manifest().clone()
    };
    if &manifest != ds.manifest() {
        // the snapshots depend only on the source and bin width, which are
        // unchanged, so the network is carried over under the new manifest
        ds.update_manifest(manifest)?;
        ds.write_artifact(NETWORK, &dn)?;
    }
    let matrix = build_census_matrix(&dn, null_count, seed)?;
    let metrics: Vec<NetworkMetrics> = dn.snapshots.iter().map(network_metrics).collect();
    ds.write_artifact(METRICS, &metrics)?;
    ds.write_text("census.csv", &matrix.to_csv())?;
    let bytes = ds.write_artifact(CENSUS, &matrix)?;
    Ok(CensusReport {
        dataset_id: ds.id().to_string(),
        snapshots: matrix.cols(),
        null_count,
        seed,
        census_hash: sha256_hex(&bytes),
    })
}

pub fn load_network(ds: &DatasetCache) -> PipelineResult<DynamicNetwork> {
    Ok(ds.read_artifact(NETWORK)?)
}

pub fn load_census(ds: &DatasetCache) -> PipelineResult<CensusMatrix> {
    Ok(ds.read_artifact(CENSUS)?)
}

pub fn snapshot(dn: &DynamicNetwork, t: usize) -> PipelineResult<&Snapshot> {
    dn.snapshots.get(t).ok_or(PipelineError::SnapshotOutOfRange {
        t,
        count: dn.snapshots.len(),
    })
}

/// Per-snapshot network metrics, from the cache when present.
pub fn load_metrics(ds: &DatasetCache, dn: &DynamicNetwork) -> PipelineResult<Vec<NetworkMetrics>> {
    if let Some(m) = ds.read_fresh::<Vec<NetworkMetrics>>(METRICS)? {
        if m.len() == dn.len() {
            return Ok(m);
        }
    }
    let m: Vec<NetworkMetrics> = dn.snapshots.iter().map(network_metrics).collect();
    ds.write_artifact(METRICS, &m)?;
    Ok(m)
}

/// GDV of snapshot `t`, computed and cached on first use.
pub fn gdv(ds: &DatasetCache, t: usize, max_size: usize) -> PipelineResult<GdvMatrix> {
    motifpix_core::graphlet::orbit_count(max_size)?;
    let name = DatasetCache::gdv_name(t, max_size);
    if let Some(m) = ds.read_fresh::<GdvMatrix>(&name)? {
        return Ok(m);
    }
    let dn = load_network(ds)?;
    let m = compute_gdv(snapshot(&dn, t)?, max_size)?;
    ds.write_artifact(&name, &m)?;
    Ok(m)
}

/// Body of the view requests. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ViewRequest {
    pub strategy: Option<ColumnStrategy>,
    pub statistic: Option<RowStatistic>,
    /// Census only; 10 when omitted.
    pub eps_time: Option<u64>,
    pub min_cluster_size: Option<usize>,
    /// Run density clustering (default true).
    pub cluster: Option<bool>,
    /// Cluster ids to collapse.
    #[serde(default)]
    pub collapse: Vec<i64>,
    /// Collapse every cluster.
    #[serde(default)]
    pub collapse_all: bool,
    /// GDV only; the dataset's configured size when omitted.
    pub max_size: Option<usize>,
}

fn apply_collapse(state: &mut ViewState, req: &ViewRequest) -> PipelineResult<()> {
    let ids: Vec<i64> = if req.collapse_all {
        state.clusters.as_ref().map(|c| c.cluster_order.clone()).unwrap_or_default()
    } else {
        req.collapse.clone()
    };
    for id in ids {
        state.collapse(id)?;
    }
    Ok(())
}

fn clusters_for(columns: &[Vec<f64>], times: &[i64], eps: Option<u64>, req: &ViewRequest) -> PipelineResult<Option<ClusterAssignment>> {
    if !req.cluster.unwrap_or(true) {
        return Ok(None);
    }
    let m = req.min_cluster_size.unwrap_or(DEFAULT_MIN_CLUSTER_SIZE);
    Ok(Some(cluster_columns(columns, times, eps, m)?))
}

/// View state of a census matrix: clustering with the temporal filter
/// (`epsTime`, default 10), column strategy, row statistic, collapse flags.
pub fn census_view(matrix: &CensusMatrix, metrics: &[NetworkMetrics], req: &ViewRequest) -> PipelineResult<ViewState> {
    if req.max_size.is_some() {
        return Err(PipelineError::Invalid("maxSize applies to GDV views only".into()));
    }
    let times: Vec<i64> = (0..matrix.cols() as i64).collect();
    let eps = req.eps_time.unwrap_or(DEFAULT_EPS_TIME);
    let mut state = ViewState::for_matrix(matrix);
    if let Some(c) = clusters_for(&matrix.columns(), &times, Some(eps), req)? {
        state = state.with_clusters(c);
    }
    let strategy = req.strategy.clone().unwrap_or(ColumnStrategy::ByTime);
    let metric_values: Option<Vec<f64>> = match &strategy {
        ColumnStrategy::ByNodeMetric(_) => {
            return Err(PipelineError::Invalid("node metrics order node-level views only".into()))
        }
        ColumnStrategy::ByNetworkMetric(name) => Some(
            metrics
                .iter()
                .map(|m| m.value(name))
                .collect::<Option<_>>()
                .ok_or_else(|| PipelineError::Invalid(format!("unknown network metric `{name}`")))?,
        ),
        _ => None,
    };
    state.order_columns(&strategy, ColumnKeys {
        times: &times,
        metric: metric_values.as_deref(),
    })?;
    if let Some(stat) = req.statistic {
        state.order_rows(matrix, stat)?;
    }
    apply_collapse(&mut state, req)?;
    Ok(state)
}

/// View state of a GDV matrix. Columns are nodes; there is no time axis, so
/// `byTime` keeps node order and clustering runs without the temporal filter.
pub fn gdv_view(matrix: &GdvMatrix, nodes: &NodeMetrics, req: &ViewRequest) -> PipelineResult<ViewState> {
    if req.eps_time.is_some() {
        return Err(PipelineError::Invalid("epsTime applies to census views only".into()));
    }
    let order: Vec<i64> = (0..matrix.node_count() as i64).collect();
    let mut state = ViewState::for_matrix(matrix);
    if let Some(c) = clusters_for(&matrix.columns_f64(), &order, None, req)? {
        state = state.with_clusters(c);
    }
    let strategy = req.strategy.clone().unwrap_or(ColumnStrategy::ByTime);
    let metric_values: Option<&[f64]> = match &strategy {
        ColumnStrategy::ByNetworkMetric(_) => {
            return Err(PipelineError::Invalid("network metrics order the census view only".into()))
        }
        ColumnStrategy::ByNodeMetric(name) => Some(
            nodes
                .values(name)
                .ok_or_else(|| PipelineError::Invalid(format!("unknown node metric `{name}`")))?,
        ),
        _ => None,
    };
    state.order_columns(&strategy, ColumnKeys {
        times: &order,
        metric: metric_values,
    })?;
    if let Some(stat) = req.statistic {
        state.order_rows(matrix, stat)?;
    }
    apply_collapse(&mut state, req)?;
    Ok(state)
}

/// Supergraph layout shared by all snapshots, computed and cached on first
/// use.
pub fn layout(ds: &DatasetCache, dn: &DynamicNetwork) -> PipelineResult<LayoutPositions> {
    if let Some(l) = ds.read_fresh::<LayoutPositions>(LAYOUT)? {
        return Ok(l);
    }
    let sg = motifpix_core::graphlet::undirect(&supergraph(dn));
    let l = ForceAtlas2::default().run(&sg, ds.manifest().seed).positions;
    ds.write_artifact(LAYOUT, &l)?;
    Ok(l)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphPayload {
    pub snapshot: usize,
    pub nodes: Vec<String>,
    /// Index pairs into `nodes`.
    pub edges: Vec<(u32, u32)>,
    /// Position of each node in the supergraph layout.
    pub positions: Vec<[f64; 2]>,
    pub node_metrics: NodeMetrics,
    /// Present only for graphs above the community threshold.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub communities: Option<CommunityPartition>,
}

pub fn graph_payload(ds: &DatasetCache, t: usize) -> PipelineResult<GraphPayload> {
    let name = DatasetCache::graph_name(t);
    if let Some(p) = ds.read_fresh::<GraphPayload>(&name)? {
        return Ok(p);
    }
    let dn = load_network(ds)?;
    let g = snapshot(&dn, t)?;
    let l = layout(ds, &dn)?;
    let positions = g
        .nodes()
        .iter()
        .map(|id| l.get(id).unwrap_or([0.0, 0.0]))
        .collect();
    let payload = GraphPayload {
        snapshot: t,
        nodes: g.nodes().to_vec(),
        edges: g.edges().to_vec(),
        positions,
        node_metrics: node_metrics(g, DEFAULT_DAMPING),
        communities: (g.node_count() > COMMUNITY_NODE_THRESHOLD).then(|| communities(g)),
    };
    ds.write_artifact(&name, &payload)?;
    Ok(payload)
}

pub fn snapshot_metrics(ds: &DatasetCache, t: usize) -> PipelineResult<NetworkMetrics> {
    let dn = load_network(ds)?;
    snapshot(&dn, t)?;
    Ok(load_metrics(ds, &dn)?[t])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    Census,
    Gdv { t: usize },
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub view: ViewKind,
    pub request: ViewRequest,
    pub cell_size: u32,
    /// Global instead of per-orbit normalization for GDV views.
    pub global_norm: bool,
    pub svg: Option<PathBuf>,
    pub png: Option<PathBuf>,
    pub png_scale: u32,
}

/// Builds the requested view and writes the SVG and/or PNG files.
pub fn render(ds: &DatasetCache, opts: &RenderOptions) -> PipelineResult<PixelViewModel> {
    let vm = match opts.view {
        ViewKind::Census => {
            let matrix = load_census(ds)?;
            let dn = load_network(ds)?;
            let state = census_view(&matrix, &load_metrics(ds, &dn)?, &opts.request)?;
            build_view_model(&matrix, &state, &ColorMapping::census(), opts.cell_size)?
        }
        ViewKind::Gdv { t } => {
            let k = opts.request.max_size.unwrap_or(ds.manifest().max_graphlet_size);
            let matrix = gdv(ds, t, k)?;
            let dn = load_network(ds)?;
            let nodes = node_metrics(snapshot(&dn, t)?, DEFAULT_DAMPING);
            let req = ViewRequest {
                max_size: None,
                ..opts.request.clone()
            };
            let state = gdv_view(&matrix, &nodes, &req)?;
            build_view_model(&matrix, &state, &ColorMapping::gdv(opts.global_norm), opts.cell_size)?
        }
    };
    if let Some(p) = &opts.svg {
        export_svg(&vm, p)?;
    }
    if let Some(p) = &opts.png {
        export_png(&vm, p, opts.png_scale)?;
    }
    Ok(vm)
}
