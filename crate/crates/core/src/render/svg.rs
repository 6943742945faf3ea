use std::fmt::Write as _;
use std::path::Path;

use super::color::{Rgb, ScaleKind};
use super::view_model::{PixelViewModel, LABEL_BAND};
use crate::error::{Error, Result};

const FONT: &str = "font-family=\"sans-serif\"";
const PLACEHOLDER_FILL: Rgb = Rgb(0xD9, 0xD9, 0xD9);
const PLACEHOLDER_STROKE: Rgb = Rgb(0x96, 0x96, 0x96);

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Standalone SVG 1.1 document for `vm`. The output depends only on the view
/// model, so equal models give byte-identical documents.
pub fn to_svg_string(vm: &PixelViewModel) -> Result<String> {
    if vm.cells.is_empty() {
        return Err(Error::NothingToRender);
    }
    let cs = vm.cell_size;
    let font_size = cs.clamp(6, 12);
    let mut s = String::new();
    // writing to a String cannot fail
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = vm.width,
        h = vm.height
    );
    let _ = writeln!(
        s,
        r#"<defs><pattern id="hatch" width="4" height="4" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><rect width="4" height="4" fill="{PLACEHOLDER_FILL}"/><line x1="0" y1="0" x2="0" y2="4" stroke="{PLACEHOLDER_STROKE}" stroke-width="2"/></pattern>"#
    );
    let _ = write!(s, r#"<linearGradient id="legend-gradient" x1="0" y1="0" x2="1" y2="0">"#);
    let [lo, hi] = vm.legend.domain;
    for &(pos, color) in &vm.legend.anchors {
        let offset = if hi > lo { (pos - lo) / (hi - lo) } else { 0.0 };
        let _ = write!(s, r#"<stop offset="{offset}" stop-color="{color}"/>"#);
    }
    let _ = writeln!(s, "</linearGradient></defs>");
    let _ = writeln!(
        s,
        r#"<rect class="background" width="{}" height="{}" fill="{}"/>"#,
        vm.width,
        vm.height,
        Rgb::WHITE
    );

    let _ = writeln!(s, r#"<g class="cells" shape-rendering="crispEdges">"#);
    for c in &vm.cells {
        let _ = writeln!(
            s,
            r#"<rect class="cell" x="{}" y="{}" width="{cs}" height="{cs}" fill="{}"/>"#,
            c.x, c.y, c.color
        );
    }
    let _ = writeln!(s, "</g>");

    if !vm.placeholders.is_empty() {
        let _ = writeln!(s, r#"<g class="placeholders">"#);
        for p in &vm.placeholders {
            let _ = writeln!(
                s,
                r#"<rect class="placeholder" x="{}" y="{}" width="{cs}" height="{}" fill="url(#hatch)"/>"#,
                p.x, vm.grid_y, vm.grid_height
            );
            let _ = writeln!(
                s,
                r#"<text class="placeholder-label" x="{}" y="{}" {FONT} font-size="{font_size}" text-anchor="middle">{}</text>"#,
                p.x + cs / 2,
                vm.grid_y + vm.grid_height + font_size + 2,
                p.hidden_count
            );
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r#"<g class="row-labels" {FONT} font-size="{font_size}" text-anchor="end">"#);
    for l in &vm.row_labels {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" dominant-baseline="middle">{}</text>"#,
            vm.grid_x - 4,
            l.position,
            escape(&l.text)
        );
    }
    let _ = writeln!(s, "</g>");

    let label_top = vm.grid_y + vm.grid_height + 4;
    let _ = writeln!(s, r#"<g class="col-labels" {FONT} font-size="{font_size}" text-anchor="end">"#);
    for l in &vm.col_labels {
        let _ = writeln!(
            s,
            r#"<text transform="translate({},{}) rotate(-90)" dominant-baseline="middle">{}</text>"#,
            l.position,
            label_top,
            escape(&l.text)
        );
    }
    let _ = writeln!(s, "</g>");

    if vm.clusters.len() > 1 {
        let _ = writeln!(s, r#"<g class="clusters" stroke="{PLACEHOLDER_STROKE}" stroke-width="1">"#);
        for c in &vm.clusters {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" data-cluster="{}"/>"#,
                c.x_start,
                c.x_end,
                c.cluster,
                y = vm.grid_y + vm.grid_height + 1
            );
        }
        let _ = writeln!(s, "</g>");
    }

    let legend_y = vm.grid_y + vm.grid_height + LABEL_BAND;
    let legend_w = 120;
    let _ = writeln!(s, r#"<g class="legend" {FONT} font-size="10">"#);
    let _ = writeln!(
        s,
        r#"<rect class="legend-bar" x="{}" y="{legend_y}" width="{legend_w}" height="10" fill="url(#legend-gradient)" stroke="{PLACEHOLDER_STROKE}" stroke-width="0.5"/>"#,
        vm.grid_x
    );
    for &(pos, color) in &vm.legend.anchors {
        let offset = if hi > lo { (pos - lo) / (hi - lo) } else { 0.0 };
        let x = vm.grid_x as f64 + offset * legend_w as f64;
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="middle" data-color="{color}">{pos}</text>"#,
            legend_y + 22
        );
    }
    let caption = match vm.legend.kind {
        ScaleKind::Diverging => "significance profile",
        ScaleKind::Grayscale => "normalized count",
    };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" dominant-baseline="middle">{caption}</text>"#,
        vm.grid_x + legend_w + 8,
        legend_y + 5
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn export_svg(vm: &PixelViewModel, path: &Path) -> Result<()> {
    let svg = to_svg_string(vm)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
