//! Timestamped edge lists, time discretization and snapshot graphs.
//!
//! A dynamic network is read as a stream of `(source, target, timestamp)`
//! events and cut into fixed-width time bins. Every bin becomes a simple
//! directed [`Snapshot`]: self-loops are dropped, repeated edges collapse, and
//! empty bins are kept so the time axis has no gaps.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One raw event of the dynamic network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalEdge {
    pub source: String,
    pub target: String,
    /// Seconds since the epoch.
    pub timestamp: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
}

impl TemporalEdge {
    pub fn new(source: impl Into<String>, target: impl Into<String>, timestamp: i64) -> Self {
        TemporalEdge {
            source: source.into(),
            target: target.into(),
            timestamp,
            attributes: BTreeMap::new(),
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.source == self.target
    }
}

/// Parsed edge list in input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalEdgeList {
    pub id: String,
    pub edges: Vec<TemporalEdge>,
    /// 1-based line numbers of rows that failed to parse.
    pub malformed_rows: Vec<usize>,
}

impl TemporalEdgeList {
    pub fn new(id: impl Into<String>, edges: Vec<TemporalEdge>) -> Self {
        TemporalEdgeList {
            id: id.into(),
            edges,
            malformed_rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum HeaderMode {
    /// Row 1 is a header if its timestamp column is not numeric.
    #[default]
    Auto,
    Present,
    Absent,
}

/// Describes how to read a delimited edge file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct EdgeListFormat {
    pub delimiter: char,
    pub source_column: usize,
    pub target_column: usize,
    pub timestamp_column: usize,
    pub header: HeaderMode,
}

impl Default for EdgeListFormat {
    fn default() -> Self {
        EdgeListFormat {
            delimiter: ',',
            source_column: 0,
            target_column: 1,
            timestamp_column: 2,
            header: HeaderMode::Auto,
        }
    }
}

impl EdgeListFormat {
    /// `SOURCE,TARGET,RATING,TIME` as distributed for the signed trust networks.
    pub fn signed_trust() -> Self {
        EdgeListFormat {
            timestamp_column: 3,
            ..Default::default()
        }
    }
}

/// Dataset description file: where the edges live and how to bin them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetManifest {
    pub id: String,
    pub path: PathBuf,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default = "default_bin_width")]
    pub bin_width: i64,
    #[serde(default)]
    pub source_column: Option<usize>,
    #[serde(default)]
    pub target_column: Option<usize>,
    #[serde(default)]
    pub timestamp_column: Option<usize>,
}

fn default_delimiter() -> char {
    ','
}

fn default_bin_width() -> i64 {
    86_400
}

impl DatasetManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut manifest: DatasetManifest = serde_json::from_str(&raw)?;
        if manifest.path.is_relative() {
            if let Some(dir) = path.parent() {
                manifest.path = dir.join(&manifest.path);
            }
        }
        Ok(manifest)
    }

    pub fn format(&self) -> EdgeListFormat {
        let d = EdgeListFormat::default();
        EdgeListFormat {
            delimiter: self.delimiter,
            source_column: self.source_column.unwrap_or(d.source_column),
            target_column: self.target_column.unwrap_or(d.target_column),
            timestamp_column: self.timestamp_column.unwrap_or(d.timestamp_column),
            header: HeaderMode::Auto,
        }
    }
}

fn parse_timestamp(field: &str) -> Option<i64> {
    let field = field.trim();
    if let Ok(t) = field.parse::<i64>() {
        return (t >= 0).then_some(t);
    }
    let t = field.parse::<f64>().ok()?;
    (t.is_finite() && t >= 0.0 && t < i64::MAX as f64).then(|| t.floor() as i64)
}

/// Reads an edge file. Malformed rows are skipped and reported; self-loops are
/// kept until [`discretize`].
pub fn ingest(path: &Path, format: &EdgeListFormat) -> Result<TemporalEdgeList> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().trim_end_matches(".csv").to_string())
        .unwrap_or_else(|| "dataset".to_string());
    parse_edges(id, file, format)
}

pub fn parse_edges<R: Read>(
    id: impl Into<String>,
    reader: R,
    format: &EdgeListFormat,
) -> Result<TemporalEdgeList> {
    let mut delimiter = [0u8; 4];
    let delimiter = format.delimiter.encode_utf8(&mut delimiter).as_bytes();
    if delimiter.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "delimiter must be a single byte, got {:?}",
            format.delimiter
        )));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter[0])
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);

    let needed = format
        .source_column
        .max(format.target_column)
        .max(format.timestamp_column);
    let mut header: Option<Vec<String>> = None;
    let mut edges = Vec::new();
    let mut malformed = Vec::new();
    let mut first = true;

    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as usize);
                malformed.push(line);
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let is_first = std::mem::replace(&mut first, false);
        let timestamp = record.get(format.timestamp_column).and_then(parse_timestamp);
        if is_first {
            let take_header = match format.header {
                HeaderMode::Present => true,
                HeaderMode::Absent => false,
                HeaderMode::Auto => timestamp.is_none(),
            };
            if take_header {
                header = Some(record.iter().map(str::to_string).collect());
                continue;
            }
        }
        let (Some(source), Some(target), Some(timestamp)) = (
            record.get(format.source_column),
            record.get(format.target_column),
            timestamp,
        ) else {
            malformed.push(line);
            continue;
        };
        if source.is_empty() || target.is_empty() || record.len() <= needed {
            malformed.push(line);
            continue;
        }
        let mut attributes = BTreeMap::new();
        for (i, value) in record.iter().enumerate() {
            if i == format.source_column || i == format.target_column || i == format.timestamp_column {
                continue;
            }
            let key = header
                .as_ref()
                .and_then(|h| h.get(i).cloned())
                .unwrap_or_else(|| format!("col{i}"));
            attributes.insert(key, value.to_string());
        }
        edges.push(TemporalEdge {
            source: source.to_string(),
            target: target.to_string(),
            timestamp,
            attributes,
        });
    }

    if edges.is_empty() {
        return Err(Error::NoValidRows {
            malformed: malformed.len(),
        });
    }
    Ok(TemporalEdgeList {
        id: id.into(),
        edges,
        malformed_rows: malformed,
    })
}

/// Half-open time interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Interval {
    pub start: i64,
    pub end: i64,
}

impl Interval {
    pub fn new(start: i64, end: i64) -> Self {
        Interval { start, end }
    }

    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t < self.end
    }
}

impl From<[i64; 2]> for Interval {
    fn from(v: [i64; 2]) -> Self {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [i64; 2] {
    fn from(i: Interval) -> Self {
        [i.start, i.end]
    }
}

/// Simple directed graph for one time bin.
///
/// Nodes are sorted lexicographically by id; edges are `(source, target)`
/// index pairs into that order, sorted and unique, never self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SnapshotRepr", into = "SnapshotRepr")]
pub struct Snapshot {
    index: i64,
    interval: Interval,
    nodes: Vec<String>,
    edges: Vec<(u32, u32)>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotRepr {
    index: i64,
    interval: Interval,
    nodes: Vec<String>,
    edges: Vec<(u32, u32)>,
}

impl TryFrom<SnapshotRepr> for Snapshot {
    type Error = Error;

    fn try_from(r: SnapshotRepr) -> Result<Self> {
        Snapshot::from_parts(r.index, r.interval, r.nodes, r.edges)
    }
}

impl From<Snapshot> for SnapshotRepr {
    fn from(s: Snapshot) -> Self {
        SnapshotRepr {
            index: s.index,
            interval: s.interval,
            nodes: s.nodes,
            edges: s.edges,
        }
    }
}

impl Snapshot {
    /// Sentinel index of a supergraph.
    pub const SUPERGRAPH_INDEX: i64 = -1;

    /// Builds a snapshot from already-indexed parts. Duplicate edges collapse;
    /// self-loops, unsorted node ids and out-of-range endpoints are rejected.
    pub fn from_parts(
        index: i64,
        interval: Interval,
        nodes: Vec<String>,
        mut edges: Vec<(u32, u32)>,
    ) -> Result<Self> {
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "snapshot node ids must be strictly increasing".into(),
            ));
        }
        let n = nodes.len() as u32;
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::InvalidParameter(format!(
                "invalid snapshot edge ({a}, {b}) for {n} nodes"
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in &edges {
            out_adj[a as usize].push(b);
            in_adj[b as usize].push(a);
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        Ok(Snapshot {
            index,
            interval,
            nodes,
            edges,
            out_adj,
            in_adj,
        })
    }

    /// Builds a snapshot from named edges. Self-loops are dropped and the node
    /// set is the set of remaining endpoints.
    pub fn from_named_edges<'a, I>(index: i64, interval: Interval, edges: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let pairs: Vec<(&str, &str)> = edges.into_iter().filter(|(a, b)| a != b).collect();
        let nodes: BTreeSet<&str> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let nodes: Vec<String> = nodes.into_iter().map(str::to_string).collect();
        let lookup = |id: &str| nodes.binary_search_by(|n| n.as_str().cmp(id)).unwrap() as u32;
        let indexed = pairs.iter().map(|&(a, b)| (lookup(a), lookup(b))).collect();
        Snapshot::from_parts(index, interval, nodes, indexed).expect("named edges are valid")
    }

    /// Snapshot over `n` nodes with ids zero-padded so lexicographic order is
    /// numeric order (`"00"`, `"01"`, ...). Self-loops are dropped.
    pub fn from_indexed(n: usize, edges: &[(usize, usize)]) -> Self {
        let width = n.saturating_sub(1).to_string().len();
        let nodes = (0..n).map(|i| format!("{i:0width$}")).collect();
        let edges = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a as u32, b as u32))
            .collect();
        Snapshot::from_parts(0, Interval::new(0, 1), nodes, edges).expect("indices in range")
    }

    /// Same nodes, different edge set (used by the null model).
    pub fn with_edges(&self, edges: Vec<(u32, u32)>) -> Result<Self> {
        Snapshot::from_parts(self.index, self.interval, self.nodes.clone(), edges)
    }

    pub fn with_index(mut self, index: i64) -> Self {
        self.index = index;
        self
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(id)).ok()
    }

    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.out_adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Edges as `(source id, target id)`.
    pub fn named_edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a as usize].as_str(), self.nodes[b as usize].as_str()))
    }
}

/// A dynamic network: consecutive equal-width snapshots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DynamicNetwork {
    pub id: String,
    pub bin_width: i64,
    pub min_timestamp: i64,
    pub snapshots: Vec<Snapshot>,
    pub global_nodes: Vec<String>,
}

impl DynamicNetwork {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn total_edges(&self) -> usize {
        self.snapshots.iter().map(Snapshot::edge_count).sum()
    }

    /// Snapshot index that timestamp `t` falls into, if inside the covered range.
    pub fn bin_of(&self, t: i64) -> Option<usize> {
        if t < self.min_timestamp {
            return None;
        }
        let j = ((t - self.min_timestamp) / self.bin_width) as usize;
        (j < self.snapshots.len()).then_some(j)
    }
}

/// Cuts events into bins of `bin_width` seconds starting at the earliest
/// timestamp. Edge `(s, t, ts)` lands in bin `floor((ts - min) / bin_width)`.
pub fn discretize(edges: &TemporalEdgeList, bin_width: i64) -> Result<DynamicNetwork> {
    if bin_width <= 0 {
        return Err(Error::InvalidBinWidth(bin_width));
    }
    if edges.is_empty() {
        return Err(Error::EmptyEdgeList);
    }
    let min = edges.edges.iter().map(|e| e.timestamp).min().unwrap();
    let max = edges.edges.iter().map(|e| e.timestamp).max().unwrap();
    let bins = ((max - min) / bin_width) as usize + 1;

    let mut buckets: Vec<Vec<(&str, &str)>> = vec![Vec::new(); bins];
    for e in &edges.edges {
        let j = ((e.timestamp - min) / bin_width) as usize;
        buckets[j].push((e.source.as_str(), e.target.as_str()));
    }

    let snapshots: Vec<Snapshot> = buckets
        .into_iter()
        .enumerate()
        .map(|(j, pairs)| {
            let start = min + j as i64 * bin_width;
            Snapshot::from_named_edges(j as i64, Interval::new(start, start + bin_width), pairs)
        })
        .collect();

    let global: BTreeSet<&str> = snapshots
        .iter()
        .flat_map(|s| s.nodes().iter().map(String::as_str))
        .collect();

    Ok(DynamicNetwork {
        id: edges.id.clone(),
        bin_width,
        min_timestamp: min,
        global_nodes: global.into_iter().map(str::to_string).collect(),
        snapshots,
    })
}

/// Union of all snapshots' nodes and edges, with index
/// [`Snapshot::SUPERGRAPH_INDEX`].
pub fn supergraph(dn: &DynamicNetwork) -> Snapshot {
    let interval = match (dn.snapshots.first(), dn.snapshots.last()) {
        (Some(first), Some(last)) => Interval::new(first.interval().start, last.interval().end),
        _ => Interval::new(dn.min_timestamp, dn.min_timestamp),
    };
    let all: BTreeSet<(&str, &str)> = dn.snapshots.iter().flat_map(Snapshot::named_edges).collect();
    // per-bin node sets are exactly the bin's edge endpoints, so the endpoints
    // of the edge union are the union of the node sets
    Snapshot::from_named_edges(Snapshot::SUPERGRAPH_INDEX, interval, all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(rows: &[(&str, &str, i64)]) -> TemporalEdgeList {
        TemporalEdgeList::new(
            "t",
            rows.iter().map(|&(a, b, t)| TemporalEdge::new(a, b, t)).collect(),
        )
    }

    #[test]
    fn parses_three_rows() {
        let csv = "a,b,10\nb,c,20\na,b,15\n";
        let l = parse_edges("x", csv.as_bytes(), &EdgeListFormat::default()).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.edges[2], TemporalEdge::new("a", "b", 15));
        assert!(l.malformed_rows.is_empty());
    }

    #[test]
    fn empty_input_is_an_error() {
        let err = parse_edges("x", "".as_bytes(), &EdgeListFormat::default()).unwrap_err();
        assert!(matches!(err, Error::NoValidRows { malformed: 0 }));
        assert!(err.to_string().contains("zero valid rows"));
    }

    #[test]
    fn header_is_detected_and_names_attributes() {
        let csv = "SOURCE,TARGET,RATING,TIME\n6,2,4,1289241911.72836\n6,5,2,1289241941.53378\n";
        let l = parse_edges("otc", csv.as_bytes(), &EdgeListFormat::signed_trust()).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.edges[0].timestamp, 1_289_241_911);
        assert_eq!(l.edges[0].attributes["RATING"], "4");
    }

    #[test]
    fn malformed_rows_are_counted() {
        let csv = "a,b,1\nbroken\nc,d,x\nc,d,-5\nc,,3\ne,f,2\n";
        let l = parse_edges("x", csv.as_bytes(), &EdgeListFormat::default()).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.malformed_rows, vec![2, 3, 4, 5]);
    }

    #[test]
    fn custom_delimiter_and_self_loops_kept() {
        let fmt = EdgeListFormat {
            delimiter: '\t',
            ..Default::default()
        };
        let l = parse_edges("x", "a\ta\t3\nb\tc\t4\n".as_bytes(), &fmt).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.edges[0].is_self_loop());
    }

    #[test]
    fn discretize_uses_floor_bins() {
        let dn = discretize(&list(&[("a", "b", 0), ("b", "c", 86_399), ("c", "d", 86_400)]), 86_400).unwrap();
        assert_eq!(dn.len(), 2);
        assert_eq!(dn.snapshots[0].edge_count(), 2);
        assert_eq!(dn.snapshots[1].edge_count(), 1);
        assert_eq!(dn.snapshots[1].interval(), Interval::new(86_400, 172_800));
    }

    #[test]
    fn duplicates_collapse_and_self_loops_drop() {
        let dn = discretize(&list(&[("a", "b", 1), ("a", "b", 2), ("c", "c", 3)]), 10).unwrap();
        assert_eq!(dn.snapshots[0].edge_count(), 1);
        assert_eq!(dn.snapshots[0].nodes(), ["a", "b"]);
        assert_eq!(dn.global_nodes, ["a", "b"]);
    }

    #[test]
    fn empty_bins_are_materialized() {
        let dn = discretize(&list(&[("a", "b", 0), ("a", "b", 35)]), 10).unwrap();
        assert_eq!(dn.len(), 4);
        assert!(dn.snapshots[1].is_empty() && dn.snapshots[2].is_empty());
        for (j, s) in dn.snapshots.iter().enumerate() {
            assert_eq!(s.index(), j as i64);
        }
    }

    #[test]
    fn invalid_bin_width() {
        assert!(matches!(discretize(&list(&[("a", "b", 0)]), 0), Err(Error::InvalidBinWidth(0))));
        assert!(matches!(discretize(&list(&[]), 5), Err(Error::EmptyEdgeList)));
    }

    #[test]
    fn supergraph_is_union() {
        let dn = discretize(&list(&[("a", "b", 0), ("b", "c", 10), ("a", "b", 20)]), 10).unwrap();
        let g = supergraph(&dn);
        assert_eq!(g.index(), -1);
        assert_eq!(g.named_edges().collect::<Vec<_>>(), vec![("a", "b"), ("b", "c")]);
        assert_eq!(g.interval(), Interval::new(0, 30));

        let single = discretize(&list(&[("x", "y", 5), ("y", "z", 6)]), 100).unwrap();
        let sg = supergraph(&single);
        assert_eq!(sg.edges(), single.snapshots[0].edges());
        assert_eq!(sg.nodes(), single.snapshots[0].nodes());
    }

    #[test]
    fn snapshot_json_round_trip_validates() {
        let s = Snapshot::from_indexed(3, &[(0, 1), (1, 2)]);
        let json = serde_json::to_string(&s).unwrap();
        let back: Snapshot = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(back.has_edge(1, 2) && !back.has_edge(2, 1));
        let bad = r#"{"index":0,"interval":[0,1],"nodes":["a","b"],"edges":[[0,0]]}"#;
        assert!(serde_json::from_str::<Snapshot>(bad).is_err());
    }

    #[test]
    fn manifest_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let mpath = dir.path().join("m.json");
        std::fs::write(&mpath, r#"{"id":"d","path":"edges.csv","binWidth":60}"#).unwrap();
        let m = DatasetManifest::load(&mpath).unwrap();
        assert_eq!(m.path, dir.path().join("edges.csv"));
        assert_eq!(m.delimiter, ',');
        assert_eq!(m.bin_width, 60);
    }
}
