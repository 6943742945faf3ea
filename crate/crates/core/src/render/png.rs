use std::path::Path;

use image::{Rgb as Pixel, RgbImage};

use super::color::Rgb;
use super::view_model::PixelViewModel;
use crate::error::{Error, Result};

const PLACEHOLDER_LIGHT: Rgb = Rgb(0xD9, 0xD9, 0xD9);
const PLACEHOLDER_DARK: Rgb = Rgb(0x96, 0x96, 0x96);

fn fill(img: &mut RgbImage, x: u32, y: u32, w: u32, h: u32, color: impl Fn(u32, u32) -> Rgb) {
    for py in y..(y + h).min(img.height()) {
        for px in x..(x + w).min(img.width()) {
            let c = color(px, py);
            img.put_pixel(px, py, Pixel([c.0, c.1, c.2]));
        }
    }
}

/// Raster of the cells and placeholders of `vm`, each view pixel becoming a
/// `scale x scale` block. Text is not rasterized.
pub fn render_png(vm: &PixelViewModel, scale: u32) -> Result<RgbImage> {
    if vm.cells.is_empty() {
        return Err(Error::NothingToRender);
    }
    if scale == 0 {
        return Err(Error::InvalidParameter("scale must be positive".into()));
    }
    let mut img = RgbImage::from_pixel(vm.width * scale, vm.height * scale, Pixel([0xFF; 3]));
    let cs = vm.cell_size * scale;
    for c in &vm.cells {
        fill(&mut img, c.x * scale, c.y * scale, cs, cs, |_, _| c.color);
    }
    for p in &vm.placeholders {
        fill(&mut img, p.x * scale, vm.grid_y * scale, cs, vm.grid_height * scale, |x, y| {
            if ((x + y) / (2 * scale)).is_multiple_of(2) {
                PLACEHOLDER_DARK
            } else {
                PLACEHOLDER_LIGHT
            }
        });
    }
    Ok(img)
}

pub fn export_png(vm: &PixelViewModel, path: &Path, scale: u32) -> Result<()> {
    let img = render_png(vm, scale)?;
    img.save_with_format(path, image::ImageFormat::Png).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Image(other),
    })
}
