//! Command-line interface.

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use motifpix_core::cluster::{ColumnStrategy, RowStatistic, DEFAULT_MIN_CLUSTER_SIZE};
use motifpix_core::null_model::DEFAULT_NULL_COUNT;
use motifpix_core::synth::{planted_network, PlantedConfig};
use motifpix_core::temporal::{EdgeListFormat, HeaderMode};

use crate::api::{router, AppState, DEFAULT_WAIT};
use crate::cache::{CacheRoot, CACHE_ENV};
use crate::pipeline::{self, IngestOptions, RenderOptions, ViewKind, ViewRequest, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "motifpix", version, about = "Motif significance profiles and graphlet views of dynamic networks")]
pub struct Cli {
    /// Cache root directory.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read an edge list (or JSON dataset manifest) and discretize it into snapshots.
    Ingest(IngestArgs),
    /// Compute the triad census of every snapshot against null ensembles.
    Census(CensusArgs),
    /// Render a census or GDV pixel view to SVG and/or PNG.
    Render(RenderArgs),
    /// Serve the HTTP/JSON API.
    Serve(ServeArgs),
    /// Write a synthetic edge list with alternating planted triad regimes.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Edge file (`source,target,timestamp`) or `.json` dataset manifest.
    pub path: PathBuf,
    /// Bin width in seconds [default: 86400, or the manifest's binWidth].
    #[arg(long = "bin", value_parser = clap::value_parser!(i64).range(1..))]
    pub bin: Option<i64>,
    /// Cache root to write into (overrides --cache).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Dataset id [default: file stem].
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    #[arg(long, default_value_t = 0)]
    pub source_column: usize,
    #[arg(long, default_value_t = 1)]
    pub target_column: usize,
    #[arg(long, default_value_t = 2)]
    pub timestamp_column: usize,
    /// Signed trust-network layout: SOURCE,TARGET,RATING,TIME.
    #[arg(long, conflicts_with_all = ["source_column", "target_column", "timestamp_column"])]
    pub signed_trust: bool,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub dataset: String,
    /// Null models per snapshot.
    #[arg(long, default_value_t = DEFAULT_NULL_COUNT as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub nulls: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Default graphlet size for GDV requests (4 or 5).
    #[arg(long)]
    pub max_graphlet_size: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ViewArg {
    Census,
    Gdv,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub dataset: String,
    #[arg(long, value_enum, default_value_t = ViewArg::Census)]
    pub view: ViewArg,
    /// Snapshot index for GDV views.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub png: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub png_scale: u32,
    #[arg(long, default_value_t = 12)]
    pub cell_size: u32,
    /// Cluster columns into superfamilies.
    #[arg(long)]
    pub cluster: bool,
    /// Temporal filter width in time steps (census views).
    #[arg(long, requires = "cluster")]
    pub eps_time: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MIN_CLUSTER_SIZE)]
    pub min_cluster_size: usize,
    /// Column order: byTime, byClusterThenTime, byNetworkMetric:NAME, byNodeMetric:NAME.
    #[arg(long)]
    pub sort_cols: Option<ColumnStrategy>,
    /// Row order statistic: mean, min, max, variance, std, median.
    #[arg(long)]
    pub sort_rows: Option<RowStatistic>,
    /// Collapse every cluster to its first and last three columns.
    #[arg(long, requires = "cluster")]
    pub collapse_all: bool,
    /// Graphlet size for GDV views.
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Normalize GDV views by the global maximum instead of per orbit.
    #[arg(long)]
    pub global_norm: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: std::net::IpAddr,
    /// Worker threads for analytics jobs [default: available parallelism].
    #[arg(long)]
    pub workers: Option<usize>,
    /// How long a request waits for its job before answering 202.
    #[arg(long, default_value_t = DEFAULT_WAIT.as_millis() as u64)]
    pub wait_ms: u64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output CSV (`source,target,timestamp`, one time step per snapshot).
    #[arg(long)]
    pub out: PathBuf,
    /// Optional JSON file receiving the regime of each snapshot.
    #[arg(long)]
    pub regimes: Option<PathBuf>,
    #[arg(long, default_value_t = PlantedConfig::default().nodes)]
    pub nodes: usize,
    #[arg(long, default_value_t = PlantedConfig::default().motifs)]
    pub motifs: usize,
    #[arg(long, default_value_t = PlantedConfig::default().noise_edges)]
    pub noise: usize,
    #[arg(long, default_value_t = PlantedConfig::default().block_length)]
    pub block_length: usize,
    #[arg(long, default_value_t = PlantedConfig::default().blocks)]
    pub blocks: usize,
    #[arg(long, default_value_t = PlantedConfig::default().seed)]
    pub seed: u64,
}

/// Runs a parsed command, writing human-readable results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let root = CacheRoot::resolve(cli.cache);
    match cli.command {
        Command::Ingest(a) => ingest(root, a, out),
        Command::Census(a) => census(&root, a, out),
        Command::Render(a) => render(&root, a, out),
        Command::Serve(a) => serve(root, a),
        Command::Synth(a) => synth(a, out),
    }
}

fn ingest(root: CacheRoot, a: IngestArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let root = a.out.map(CacheRoot::new).unwrap_or(root);
    let format = if a.signed_trust {
        EdgeListFormat {
            delimiter: a.delimiter,
            ..EdgeListFormat::signed_trust()
        }
    } else {
        EdgeListFormat {
            delimiter: a.delimiter,
            source_column: a.source_column,
            target_column: a.target_column,
            timestamp_column: a.timestamp_column,
            header: HeaderMode::Auto,
        }
    };
    let opts = IngestOptions {
        id: a.id,
        bin_width: a.bin,
        format,
    };
    let r = pipeline::ingest_dataset(&root, &a.path, &opts).with_context(|| format!("ingesting {}", a.path.display()))?;
    let s = &r.summary;
    writeln!(out, "dataset {}", r.dataset_id)?;
    writeln!(out, "{} snapshots", s.snapshots)?;
    writeln!(out, "{} nodes", s.nodes)?;
    writeln!(out, "{} edges", s.edges)?;
    if s.malformed_rows > 0 {
        writeln!(out, "{} malformed rows skipped", s.malformed_rows)?;
    }
    writeln!(out, "cache {}", root.dir().join(&r.dataset_id).display())?;
    Ok(())
}

fn census(root: &CacheRoot, a: CensusArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let mut ds = root.open(&a.dataset)?;
    let r = pipeline::run_census(&mut ds, a.nulls as usize, a.seed, a.max_graphlet_size)?;
    writeln!(out, "dataset {}", r.dataset_id)?;
    writeln!(out, "{} snapshots, {} nulls, seed {}", r.snapshots, r.null_count, r.seed)?;
    writeln!(out, "census hash {}", r.census_hash)?;
    Ok(())
}

fn render(root: &CacheRoot, a: RenderArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    if a.svg.is_none() && a.png.is_none() {
        bail!("nothing to write: pass --svg and/or --png");
    }
    let view = match (a.view, a.t) {
        (ViewArg::Census, None) => ViewKind::Census,
        (ViewArg::Census, Some(_)) => bail!("--t applies to GDV views only"),
        (ViewArg::Gdv, Some(t)) => ViewKind::Gdv { t },
        (ViewArg::Gdv, None) => bail!("GDV views need a snapshot: pass --t"),
    };
    let ds = root.open(&a.dataset)?;
    let request = ViewRequest {
        strategy: a.sort_cols,
        statistic: a.sort_rows,
        eps_time: a.eps_time,
        min_cluster_size: Some(a.min_cluster_size),
        cluster: Some(a.cluster),
        collapse: Vec::new(),
        collapse_all: a.collapse_all,
        max_size: a.max_size,
    };
    let opts = RenderOptions {
        view,
        request,
        cell_size: a.cell_size,
        global_norm: a.global_norm,
        svg: a.svg.clone(),
        png: a.png.clone(),
        png_scale: a.png_scale,
    };
    let vm = pipeline::render(&ds, &opts)?;
    writeln!(
        out,
        "{} rows x {} columns, {} clusters, {} collapsed",
        vm.row_labels.len(),
        vm.visible_columns(),
        vm.clusters.len(),
        vm.placeholders.len()
    )?;
    let rows: Vec<&str> = vm.row_labels.iter().map(|l| l.text.as_str()).collect();
    writeln!(out, "rows {}", rows.join(","))?;
    for p in a.svg.iter().chain(&a.png) {
        writeln!(out, "wrote {}", p.display())?;
    }
    Ok(())
}

fn serve(root: CacheRoot, a: ServeArgs) -> anyhow::Result<()> {
    let workers = a
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(4, |n| n.get()));
    let addr = SocketAddr::new(a.bind, a.port);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let state = AppState::new(root.clone(), workers, Duration::from_millis(a.wait_ms));
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        log::info!("serving {} on http://{addr}", root.dir().display());
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}

fn synth(a: SynthArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let cfg = PlantedConfig {
        nodes: a.nodes,
        motifs: a.motifs,
        noise_edges: a.noise,
        block_length: a.block_length,
        blocks: a.blocks,
        seed: a.seed,
    };
    let p = planted_network(&cfg);
    let mut w = csv::Writer::from_path(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
    w.write_record(["source", "target", "timestamp"])?;
    for e in &p.edges.edges {
        w.write_record([e.source.as_str(), e.target.as_str(), &e.timestamp.to_string()])?;
    }
    w.flush()?;
    if let Some(path) = &a.regimes {
        std::fs::write(path, serde_json::to_vec_pretty(&p.regimes)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    writeln!(out, "{} edges over {} snapshots", p.edges.len(), p.regimes.len())?;
    Ok(())
}
