use std::io::Cursor;
use std::path::Path;

use image::{GrayImage, ImageFormat, Luma};

use super::RveGeometry;
use crate::error::{Error, Result};

/// Half of the 2-pixel stroke width.
const STROKE_HALF_WIDTH: f64 = 1.0;
pub const MIN_RASTER_SIZE: u32 = 64;

/// Renders the wall network as black 2-px strokes on white, `px × px`.
///
/// `[0, H]²` maps onto the pixel square with the y axis flipped so row 0 is the
/// top of the RVE. A pixel is black when its centre is within one pixel of a
/// wall. Wall thickness is deliberately not drawn.
pub fn rasterize(geom: &RveGeometry, px: u32) -> Result<GrayImage> {
    if px < MIN_RASTER_SIZE {
        return Err(Error::config(
            "px",
            format!("image size must be at least {MIN_RASTER_SIZE}, got {px}"),
        ));
    }
    let mut img = GrayImage::from_pixel(px, px, Luma([255]));
    let scale = px as f64 / geom.h;
    let to_px = |v: usize| {
        let p = geom.vertices[v];
        (p.x * scale, (geom.h - p.y) * scale)
    };
    let max = px as f64;
    for &[a, b] in &geom.walls {
        let (ax, ay) = to_px(a);
        let (bx, by) = to_px(b);
        let r = STROKE_HALF_WIDTH;
        let c0 = (ax.min(bx) - r - 1.0).floor().clamp(0.0, max) as u32;
        let c1 = (ax.max(bx) + r + 1.0).ceil().clamp(0.0, max) as u32;
        let r0 = (ay.min(by) - r - 1.0).floor().clamp(0.0, max) as u32;
        let r1 = (ay.max(by) + r + 1.0).ceil().clamp(0.0, max) as u32;
        let (dx, dy) = (bx - ax, by - ay);
        let len2 = dx * dx + dy * dy;
        for row in r0..r1 {
            for col in c0..c1 {
                let (cx, cy) = (col as f64 + 0.5, row as f64 + 0.5);
                let t = if len2 > 0.0 {
                    (((cx - ax) * dx + (cy - ay) * dy) / len2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let (ex, ey) = (ax + t * dx - cx, ay + t * dy - cy);
                if ex * ex + ey * ey <= r * r {
                    img.put_pixel(col, row, Luma([0]));
                }
            }
        }
    }
    Ok(img)
}

/// PNG bytes (8-bit grayscale) of an image.
pub fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png)?;
    Ok(buf.into_inner())
}

pub fn write_png(img: &GrayImage, path: &Path) -> Result<()> {
    std::fs::write(path, encode_png(img)?)?;
    Ok(())
}
