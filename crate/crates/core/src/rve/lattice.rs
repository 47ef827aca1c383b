use nalgebra::{Point2, Vector2};

use super::{build_walls, DensitySpec, RveGeometry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// Pointy-top regular honeycomb, `n` hexagons per row.
    Hex,
    /// Square grid, `n` cells per side, lines offset by half a cell from the edges.
    Square,
}

/// Regular periodic wall network with `n` cells per side.
///
/// Both lattices repeat with period `H` horizontally, so every wall crossing the
/// left edge reappears at the right edge. The square grid is offset by half a
/// cell so no wall lies on the boundary; the honeycomb is offset by a quarter
/// cell for the same reason.
pub fn regular_lattice(kind: LatticeKind, h: f64, n: usize, density: DensitySpec) -> Result<RveGeometry> {
    if n == 0 {
        return Err(Error::config("cells", "lattice needs at least one cell per side"));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::config("H", format!("side length must be positive, got {h}")));
    }
    density.validate()?;
    let mut segments = Vec::new();
    let n_cells = match kind {
        LatticeKind::Square => {
            let pitch = h / n as f64;
            // split every line at the crossings so they become vertices
            let mut stops = vec![0.0];
            stops.extend((0..n).map(|k| (k as f64 + 0.5) * pitch));
            stops.push(h);
            for &c in &stops[1..=n] {
                for w in stops.windows(2) {
                    segments.push((Point2::new(c, w[0]), Point2::new(c, w[1])));
                    segments.push((Point2::new(w[0], c), Point2::new(w[1], c)));
                }
            }
            n * n
        }
        LatticeKind::Hex => {
            let width = h / n as f64;
            let a = width / 3f64.sqrt();
            let row_pitch = 1.5 * a;
            let x0 = 0.25 * width;
            let y0 = 0.25 * a;
            let corners: Vec<Vector2<f64>> = (0..6)
                .map(|k| {
                    let theta = std::f64::consts::FRAC_PI_6 + k as f64 * std::f64::consts::FRAC_PI_3;
                    Vector2::new(a * theta.cos(), a * theta.sin())
                })
                .collect();
            let rows = (h / row_pitch).ceil() as i64 + 1;
            for j in -1..=rows {
                let shift = if j.rem_euclid(2) == 1 { 0.5 * width } else { 0.0 };
                for i in -1..=(n as i64) {
                    let c = Point2::new(x0 + shift + i as f64 * width, y0 + j as f64 * row_pitch);
                    for k in 0..6 {
                        segments.push((c + corners[k], c + corners[(k + 1) % 6]));
                    }
                }
            }
            let cell_area = 1.5 * 3f64.sqrt() * a * a;
            ((h * h / cell_area).round() as usize).max(1)
        }
    };
    let (vertices, walls) = build_walls(segments, h);
    RveGeometry::assemble(h, vertices, walls, n_cells, density, Vec::new())
}
