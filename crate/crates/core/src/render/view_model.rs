use serde::{Deserialize, Serialize};

use super::color::{ColorScale, Rgb, ScaleKind};
use crate::cluster::{Slot, ViewState};
use crate::error::{Error, Result};
use crate::matrix::MatrixView;

/// Width of the gap between cluster groups, in cells.
pub const GAP_CELLS: u32 = 2;
pub const MARGIN_LEFT: u32 = 64;
pub const MARGIN_TOP: u32 = 8;
pub const MARGIN_RIGHT: u32 = 8;
/// Room below the grid for column labels.
pub const LABEL_BAND: u32 = 48;
/// Room below the labels for the legend.
pub const LEGEND_BAND: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Values go to the scale as they are.
    #[default]
    None,
    /// Each row is divided by its maximum.
    PerRow,
    /// Every value is divided by the matrix maximum.
    Global,
}

/// Scale plus the normalization applied before it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorMapping {
    pub scale: ColorScale,
    pub normalization: Normalization,
}

impl ColorMapping {
    /// Significance profiles on the diverging scale over `[-1, 1]`.
    pub fn census() -> Self {
        ColorMapping {
            scale: ColorScale::diverging(),
            normalization: Normalization::None,
        }
    }

    /// Graphlet counts on the grayscale, normalized per orbit or globally.
    pub fn gdv(global: bool) -> Self {
        ColorMapping {
            scale: ColorScale::grayscale(0.0, 1.0),
            normalization: if global { Normalization::Global } else { Normalization::PerRow },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRect {
    /// Original matrix row and column.
    pub row: usize,
    pub col: usize,
    pub x: u32,
    pub y: u32,
    pub color: Rgb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisLabel {
    pub text: String,
    /// Center of the row or column in pixels.
    pub position: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlaceholderCell {
    pub x: u32,
    pub cluster: i64,
    pub hidden_count: usize,
}

/// Horizontal extent of one cluster group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClusterSpan {
    pub cluster: i64,
    pub x_start: u32,
    pub x_end: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Legend {
    pub kind: ScaleKind,
    pub domain: [f64; 2],
    pub anchors: Vec<(f64, Rgb)>,
    pub normalization: Normalization,
}

/// Concrete geometry and colors of a pixel view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PixelViewModel {
    pub cell_size: u32,
    pub width: u32,
    pub height: u32,
    pub grid_x: u32,
    pub grid_y: u32,
    pub grid_width: u32,
    pub grid_height: u32,
    pub cells: Vec<CellRect>,
    pub row_labels: Vec<AxisLabel>,
    pub col_labels: Vec<AxisLabel>,
    pub placeholders: Vec<PlaceholderCell>,
    pub clusters: Vec<ClusterSpan>,
    pub legend: Legend,
}

impl PixelViewModel {
    /// Number of visible matrix columns (placeholders excluded).
    pub fn visible_columns(&self) -> usize {
        self.col_labels.len()
    }
}

fn normalizer(m: &dyn MatrixView, mode: Normalization) -> Box<dyn Fn(usize, f64) -> f64> {
    let scaled = |max: f64, v: f64| if max > 0.0 { v / max } else { 0.0 };
    match mode {
        Normalization::None => Box::new(|_, v| v),
        Normalization::PerRow => {
            let maxima: Vec<f64> = (0..m.rows())
                .map(|r| m.row_values(r).into_iter().fold(0.0, f64::max))
                .collect();
            Box::new(move |r, v| scaled(maxima[r], v))
        }
        Normalization::Global => {
            let max = (0..m.rows())
                .flat_map(|r| m.row_values(r))
                .fold(0.0, f64::max);
            Box::new(move |_, v| scaled(max, v))
        }
    }
}

/// Lays out `m` under `state`: columns left to right in display order, rows
/// top to bottom, cluster groups separated by a two-cell gap and collapsed
/// clusters shown as three columns, a placeholder and three columns.
pub fn build_view_model(
    m: &dyn MatrixView,
    state: &ViewState,
    mapping: &ColorMapping,
    cell_size: u32,
) -> Result<PixelViewModel> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::NothingToRender);
    }
    if cell_size == 0 {
        return Err(Error::InvalidParameter("cell size must be positive".into()));
    }
    state.validate(m.rows(), m.cols())?;
    let norm = normalizer(m, mapping.normalization);

    let grid_x = MARGIN_LEFT;
    let grid_y = MARGIN_TOP;
    let grid_height = m.rows() as u32 * cell_size;
    let mut cells = Vec::new();
    let mut col_labels = Vec::new();
    let mut placeholders = Vec::new();
    let mut clusters = Vec::new();
    let mut x = grid_x;

    for (g, group) in state.column_groups().iter().enumerate() {
        if g > 0 {
            x += GAP_CELLS * cell_size;
        }
        let start = x;
        for slot in &group.slots {
            match *slot {
                Slot::Column(col) => {
                    for (k, &row) in state.row_permutation.iter().enumerate() {
                        cells.push(CellRect {
                            row,
                            col,
                            x,
                            y: grid_y + k as u32 * cell_size,
                            color: mapping.scale.color_of(norm(row, m.value(row, col))),
                        });
                    }
                    col_labels.push(AxisLabel {
                        text: m.col_label(col),
                        position: x + cell_size / 2,
                    });
                }
                Slot::Placeholder { hidden } => placeholders.push(PlaceholderCell {
                    x,
                    cluster: group.cluster.unwrap_or_default(),
                    hidden_count: hidden,
                }),
            }
            x += cell_size;
        }
        if let Some(cluster) = group.cluster {
            clusters.push(ClusterSpan {
                cluster,
                x_start: start,
                x_end: x,
            });
        }
    }

    let row_labels = state
        .row_permutation
        .iter()
        .enumerate()
        .map(|(k, &row)| AxisLabel {
            text: m.row_label(row),
            position: grid_y + k as u32 * cell_size + cell_size / 2,
        })
        .collect();

    let grid_width = x - grid_x;
    Ok(PixelViewModel {
        cell_size,
        width: grid_x + grid_width + MARGIN_RIGHT,
        height: grid_y + grid_height + LABEL_BAND + LEGEND_BAND,
        grid_x,
        grid_y,
        grid_width,
        grid_height,
        cells,
        row_labels,
        col_labels,
        placeholders,
        clusters,
        legend: Legend {
            kind: mapping.scale.kind,
            domain: mapping.scale.domain,
            anchors: mapping.scale.anchors.clone(),
            normalization: mapping.normalization,
        },
    })
}
