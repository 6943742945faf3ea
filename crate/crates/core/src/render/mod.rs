//! Pixel views: colors, layout geometry and static SVG/PNG export.

mod color;
mod png;
mod svg;
mod view_model;

pub use color::{color_of, ColorScale, Rgb, ScaleKind, DIVERGING_ANCHORS};
pub use png::{export_png, render_png};
pub use svg::{export_svg, to_svg_string};
pub use view_model::{
    build_view_model, AxisLabel, CellRect, ClusterSpan, ColorMapping, Legend, Normalization, PixelViewModel,
    PlaceholderCell, GAP_CELLS,
};
