//! Square RVE wall networks for closed-cell foams.
//!
//! An [`RveGeometry`] is a planar graph of straight cell walls inside `[0, H]²`.
//! Walls cut by the left and right edges end in vertices that pair exactly
//! under a translation by `(H, 0)`, which is what the periodic constraints of
//! the frame model hang on. Walls cut by the bottom and top edges end in the
//! support and loading vertices.

mod concavity;
mod lattice;
mod raster;
mod text;
pub mod topology;
mod voronoi;

use nalgebra::Point2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use concavity::apply_concavity;
pub use lattice::{regular_lattice, LatticeKind};
pub use raster::{encode_png, rasterize, write_png};
pub use text::{parse_geometry, write_geometry, GEOMETRY_FORMAT_VERSION};
pub use voronoi::{generate_rve, periodic_voronoi_cells, sample_seeds};

/// Relative tolerance (times `H`) under which two clipped vertices are merged.
pub const MERGE_TOLERANCE: f64 = 1e-7;
/// Relative tolerance (times `H`) for the periodic pairing of boundary vertices.
pub const PAIRING_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MIN_SEP_FACTOR: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Morphology {
    RandomConvex,
    ConcavePerturbed,
    RegularHex,
    RegularSquare,
}

impl Morphology {
    pub fn as_str(self) -> &'static str {
        match self {
            Morphology::RandomConvex => "random-convex",
            Morphology::ConcavePerturbed => "concave-perturbed",
            Morphology::RegularHex => "regular-hex",
            Morphology::RegularSquare => "regular-square",
        }
    }
}

impl std::str::FromStr for Morphology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-convex" => Ok(Morphology::RandomConvex),
            "concave-perturbed" => Ok(Morphology::ConcavePerturbed),
            "regular-hex" => Ok(Morphology::RegularHex),
            "regular-square" => Ok(Morphology::RegularSquare),
            other => Err(Error::config("morphology", format!("unknown morphology `{other}`"))),
        }
    }
}

impl std::fmt::Display for Morphology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the wall thickness is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensitySpec {
    /// Thickness follows from the total wall length so that the relative density hits the target.
    TargetDensity(f64),
    /// Thickness is prescribed; the relative density is whatever the morphology yields.
    FixedThickness(f64),
}

impl DensitySpec {
    pub fn validate(self) -> Result<()> {
        match self {
            DensitySpec::TargetDensity(mu) if !(mu > 0.0 && mu < 1.0) => Err(Error::config(
                "mu",
                format!("relative density must lie in (0, 1), got {mu}"),
            )),
            DensitySpec::FixedThickness(t) if !(t > 0.0 && t.is_finite()) => {
                Err(Error::config("t", format!("wall thickness must be positive, got {t}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RveConfig {
    /// RVE side length (mm).
    pub h: f64,
    /// Target mean cell size (mm). Exactly one of `cell_size` and `n_cells` is set.
    pub cell_size: Option<f64>,
    pub n_cells: Option<usize>,
    pub density: DensitySpec,
    /// Minimum seed separation as a fraction of the mean seed spacing `H/√N`.
    pub min_sep_factor: f64,
    pub morphology: Morphology,
    pub concavity_count: usize,
    pub rng_seed: u64,
}

impl RveConfig {
    /// Random convex morphology with an explicit cell count and target density.
    pub fn new(h: f64, n_cells: usize, mu_target: f64, rng_seed: u64) -> Self {
        RveConfig {
            h,
            cell_size: None,
            n_cells: Some(n_cells),
            density: DensitySpec::TargetDensity(mu_target),
            min_sep_factor: DEFAULT_MIN_SEP_FACTOR,
            morphology: Morphology::RandomConvex,
            concavity_count: 1,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::config(
                "H",
                format!("side length must be positive, got {}", self.h),
            ));
        }
        match (self.cell_size, self.n_cells) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "cells",
                    "set either a cell count or a cell size, not both",
                ))
            }
            (None, None) => return Err(Error::config("cells", "a cell count or a cell size is required")),
            (None, Some(0)) => return Err(Error::config("cells", "cell count must be at least 1")),
            (Some(phi), None) if !(phi > 0.0 && phi <= self.h) => {
                return Err(Error::config("phi", format!("cell size must lie in (0, H], got {phi}")))
            }
            _ => {}
        }
        self.density.validate()?;
        if !(0.0..=0.9).contains(&self.min_sep_factor) {
            return Err(Error::config(
                "min_sep_factor",
                format!("must lie in [0, 0.9], got {}", self.min_sep_factor),
            ));
        }
        Ok(())
    }

    /// Number of Voronoi seeds implied by the config.
    pub fn cell_count(&self) -> Result<usize> {
        match (self.n_cells, self.cell_size) {
            (Some(n), _) => Ok(n),
            (None, Some(phi)) => estimate_cell_count(self.h, phi),
            (None, None) => Err(Error::config("cells", "a cell count or a cell size is required")),
        }
    }
}

/// Cell count of a square RVE of side `h` with mean cell size `phi`: `(h/phi)²`
/// rounded to nearest, at least one.
pub fn estimate_cell_count(h: f64, phi: f64) -> Result<usize> {
    if !(h > 0.0) || !(phi > 0.0) || !h.is_finite() || !phi.is_finite() {
        return Err(Error::config(
            "phi",
            format!("H and cell size must be positive (H={h}, phi={phi})"),
        ));
    }
    if phi > h {
        return Err(Error::config(
            "phi",
            format!("cell size {phi} exceeds the RVE side {h}"),
        ));
    }
    Ok(((h / phi).powi(2).round() as usize).max(1))
}

/// Uniform wall thickness giving relative density `mu`: `H²·mu / L_cell`.
pub fn wall_thickness(mu: f64, h: f64, wall_length: f64) -> Result<f64> {
    if wall_length == 0.0 {
        return Err(Error::Domain("total wall length is zero".into()));
    }
    if !(0.0..1.0).contains(&mu) || !(h > 0.0) || !(wall_length > 0.0) {
        return Err(Error::Domain(format!(
            "wall_thickness needs mu in [0,1), H > 0, L > 0 (mu={mu}, H={h}, L={wall_length})"
        )));
    }
    Ok(h * h * mu / wall_length)
}

/// Relative density of walls of thickness `t` and total length `wall_length`.
pub fn relative_density(t: f64, h: f64, wall_length: f64) -> f64 {
    t * wall_length / (h * h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RveGeometry {
    pub h: f64,
    pub vertices: Vec<Point2<f64>>,
    pub walls: Vec<[usize; 2]>,
    /// `(left, right)` vertex pairs with `right = left + (H, 0)`.
    pub boundary_pairs: Vec<(usize, usize)>,
    pub bottom_vertices: Vec<usize>,
    pub top_vertices: Vec<usize>,
    pub n_cells: usize,
    /// Total wall length `L_cell` (mm).
    pub wall_length: f64,
    /// Uniform wall thickness `t_cell` (mm).
    pub thickness: f64,
    pub relative_density: f64,
    pub density: DensitySpec,
    /// Voronoi seeds, empty for lattices and parsed geometries.
    #[serde(default)]
    pub seeds: Vec<Point2<f64>>,
}

impl RveGeometry {
    /// Builds a geometry from raw vertices and walls: classifies boundary vertices,
    /// pairs left/right vertices and applies the density rule.
    ///
    /// Walls must already be clipped to `[0, H]²` with boundary coordinates snapped
    /// exactly onto the edges.
    pub(crate) fn assemble(
        h: f64,
        vertices: Vec<Point2<f64>>,
        walls: Vec<[usize; 2]>,
        n_cells: usize,
        density: DensitySpec,
        seeds: Vec<Point2<f64>>,
    ) -> Result<Self> {
        let (vertices, walls) = keep_largest_component(vertices, walls, h);
        if walls.is_empty() {
            return Err(Error::Generation("wall network is empty".into()));
        }
        let mut geom = RveGeometry {
            h,
            vertices,
            walls,
            boundary_pairs: Vec::new(),
            bottom_vertices: Vec::new(),
            top_vertices: Vec::new(),
            n_cells,
            wall_length: 0.0,
            thickness: 0.0,
            relative_density: 0.0,
            density,
            seeds,
        };
        geom.classify_boundary()?;
        geom.update_density()?;
        Ok(geom)
    }

    /// Recomputes bottom/top vertex lists and left/right pairs from coordinates.
    pub(crate) fn classify_boundary(&mut self) -> Result<()> {
        let h = self.h;
        let tol = MERGE_TOLERANCE * h;
        let mut left = Vec::new();
        let mut right = Vec::new();
        self.bottom_vertices.clear();
        self.top_vertices.clear();
        for (i, p) in self.vertices.iter().enumerate() {
            if p.y <= tol {
                self.bottom_vertices.push(i);
            } else if p.y >= h - tol {
                self.top_vertices.push(i);
            } else if p.x <= tol {
                left.push(i);
            } else if p.x >= h - tol {
                right.push(i);
            }
        }
        left.sort_by(|&a, &b| self.vertices[a].y.total_cmp(&self.vertices[b].y));
        right.sort_by(|&a, &b| self.vertices[a].y.total_cmp(&self.vertices[b].y));
        if left.len() != right.len() {
            return Err(Error::Generation(format!(
                "periodic edges do not match: {} left vs {} right vertices",
                left.len(),
                right.len()
            )));
        }
        self.boundary_pairs.clear();
        for (&l, &r) in left.iter().zip(&right) {
            let (pl, pr) = (self.vertices[l], self.vertices[r]);
            if (pl.y - pr.y).abs() > tol {
                return Err(Error::Generation(format!(
                    "left vertex {l} at y={} has no partner (nearest right at y={})",
                    pl.y, pr.y
                )));
            }
            self.vertices[l].x = 0.0;
            self.vertices[r] = Point2::new(h, pl.y);
            self.boundary_pairs.push((l, r));
        }
        Ok(())
    }

    /// Recomputes `L_cell`, then thickness or density according to [`DensitySpec`].
    pub(crate) fn update_density(&mut self) -> Result<()> {
        self.wall_length = self.walls.iter().map(|&w| self.wall_len(w)).sum();
        match self.density {
            DensitySpec::TargetDensity(mu) => {
                self.thickness = wall_thickness(mu, self.h, self.wall_length)?;
                self.relative_density = mu;
            }
            DensitySpec::FixedThickness(t) => {
                self.thickness = t;
                self.relative_density = relative_density(t, self.h, self.wall_length);
            }
        }
        Ok(())
    }

    pub fn wall_len(&self, [a, b]: [usize; 2]) -> f64 {
        (self.vertices[b] - self.vertices[a]).norm()
    }

    /// Top/bottom vertex pairs related by `(0, H)`. Recorded for completeness;
    /// the frame model puts supports on those edges instead of ties.
    pub fn top_bottom_pairs(&self) -> Vec<(usize, usize)> {
        let tol = MERGE_TOLERANCE * self.h;
        let mut pairs = Vec::new();
        for &b in &self.bottom_vertices {
            let xb = self.vertices[b].x;
            if let Some(&t) = self
                .top_vertices
                .iter()
                .find(|&&t| (self.vertices[t].x - xb).abs() <= tol)
            {
                pairs.push((b, t));
            }
        }
        pairs
    }

    /// Vertices on any of the four edges.
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        let p = self.vertices[v];
        let tol = MERGE_TOLERANCE * self.h;
        p.x <= tol || p.y <= tol || p.x >= self.h - tol || p.y >= self.h - tol
    }

    /// Connected through walls and periodic images.
    pub fn is_connected(&self) -> bool {
        let mut links = self.walls.clone();
        links.extend(self.boundary_pairs.iter().map(|&(l, r)| [l, r]));
        links.extend(self.top_bottom_pairs().into_iter().map(|(b, t)| [b, t]));
        topology::component_count(self.vertices.len(), &links) <= 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &[a, b] in &self.walls {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Checks every structural invariant; used after parsing and in tests.
    pub fn validate(&self) -> Result<()> {
        let h = self.h;
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::config("H", "side length must be positive"));
        }
        let n = self.vertices.len();
        for (i, p) in self.vertices.iter().enumerate() {
            let slack = MERGE_TOLERANCE * h;
            if !(p.x.is_finite() && p.y.is_finite())
                || p.x < -slack
                || p.y < -slack
                || p.x > h + slack
                || p.y > h + slack
            {
                return Err(Error::Integrity(format!("vertex {i} lies outside the RVE")));
            }
        }
        for (k, &[a, b]) in self.walls.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::Integrity(format!("wall {k} references a missing vertex")));
            }
            if self.wall_len([a, b]) <= 0.0 {
                return Err(Error::Integrity(format!("wall {k} has zero length")));
            }
        }
        let mut paired = vec![false; n];
        for &(l, r) in &self.boundary_pairs {
            if l >= n || r >= n {
                return Err(Error::Integrity("boundary pair references a missing vertex".into()));
            }
            if std::mem::replace(&mut paired[l], true) || std::mem::replace(&mut paired[r], true) {
                return Err(Error::Integrity(format!("vertex of pair ({l}, {r}) is paired twice")));
            }
        }
        for &(l, r) in &self.boundary_pairs {
            if l >= n || r >= n {
                return Err(Error::Integrity("boundary pair references a missing vertex".into()));
            }
            let d = self.vertices[r] - self.vertices[l];
            if (d.x - h).abs() > PAIRING_TOLERANCE * h || d.y.abs() > PAIRING_TOLERANCE * h {
                return Err(Error::Integrity(format!("pair ({l}, {r}) is not related by (H, 0)")));
            }
        }
        let length: f64 = self.walls.iter().map(|&w| self.wall_len(w)).sum();
        if (length - self.wall_length).abs() > 1e-9 * length.max(f64::MIN_POSITIVE) {
            return Err(Error::Integrity(format!(
                "stored wall length {} differs from the wall sum {length}",
                self.wall_length
            )));
        }
        let mu = relative_density(self.thickness, h, self.wall_length);
        if (mu - self.relative_density).abs() > 1e-9 * self.relative_density.abs().max(1e-300) {
            return Err(Error::Integrity(format!(
                "t·L/H² = {mu} but relative density is {}",
                self.relative_density
            )));
        }
        if !self.is_connected() {
            return Err(Error::Integrity("wall graph is not connected".into()));
        }
        Ok(())
    }
}

/// Pairs of edge vertices that are periodic images of each other: left/right by `y`,
/// bottom/top by `x`.
fn periodic_links(vertices: &[Point2<f64>], h: f64) -> Vec<[usize; 2]> {
    let tol = MERGE_TOLERANCE * h;
    let on = |lo: &dyn Fn(&Point2<f64>) -> bool, key: fn(&Point2<f64>) -> f64| {
        let mut v: Vec<usize> = (0..vertices.len()).filter(|&i| lo(&vertices[i])).collect();
        v.sort_by(|&a, &b| key(&vertices[a]).total_cmp(&key(&vertices[b])));
        v
    };
    let inner_y = |p: &Point2<f64>| p.y > tol && p.y < h - tol;
    let left = on(&|p| inner_y(p) && p.x <= tol, |p| p.y);
    let right = on(&|p| inner_y(p) && p.x >= h - tol, |p| p.y);
    let bottom = on(&|p| p.y <= tol, |p| p.x);
    let top = on(&|p| p.y >= h - tol, |p| p.x);
    let mut links = Vec::new();
    for (a, b, key) in [
        (left, right, (|p: &Point2<f64>| p.y) as fn(&Point2<f64>) -> f64),
        (bottom, top, |p| p.x),
    ] {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (ka, kb) = (key(&vertices[a[i]]), key(&vertices[b[j]]));
            if (ka - kb).abs() <= tol {
                links.push([a[i], b[j]]);
                i += 1;
                j += 1;
            } else if ka < kb {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    links
}

/// Drops every vertex and wall outside the component with the largest total wall
/// length, where periodic images count as connected. Isolated vertices are dropped
/// too. Vertex order is preserved.
fn keep_largest_component(
    vertices: Vec<Point2<f64>>,
    walls: Vec<[usize; 2]>,
    h: f64,
) -> (Vec<Point2<f64>>, Vec<[usize; 2]>) {
    let mut links = walls.clone();
    links.extend(periodic_links(&vertices, h));
    let labels = topology::component_labels(vertices.len(), &links);
    let mut length_by_label = std::collections::BTreeMap::<usize, f64>::new();
    for &[a, b] in &walls {
        *length_by_label.entry(labels[a]).or_default() += (vertices[b] - vertices[a]).norm();
    }
    let Some((&keep, _)) = length_by_label
        .iter()
        .max_by(|x, y| x.1.total_cmp(y.1).then(y.0.cmp(x.0)))
    else {
        return (Vec::new(), Vec::new());
    };
    let mut used = vec![false; vertices.len()];
    for &[a, b] in &walls {
        if labels[a] == keep {
            used[a] = true;
            used[b] = true;
        }
    }
    let mut remap = vec![usize::MAX; vertices.len()];
    let mut kept = Vec::new();
    for (i, p) in vertices.into_iter().enumerate() {
        if used[i] {
            remap[i] = kept.len();
            kept.push(p);
        }
    }
    let walls = walls
        .into_iter()
        .filter(|&[a, _]| labels[a] == keep)
        .map(|[a, b]| [remap[a], remap[b]])
        .collect();
    (kept, walls)
}

/// Liang–Barsky clip of segment `a→b` to `[0, h]²`; endpoints on an edge are
/// snapped exactly onto it. Returns `None` when nothing of positive length remains.
pub(crate) fn clip_to_square(a: Point2<f64>, b: Point2<f64>, h: f64) -> Option<(Point2<f64>, Point2<f64>)> {
    let d = b - a;
    let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
    let (mut e0, mut e1) = (None, None);
    let planes = [(-d.x, a.x, 0), (d.x, h - a.x, 1), (-d.y, a.y, 2), (d.y, h - a.y, 3)];
    for (p, q, edge) in planes {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                if r > t0 {
                    t0 = r;
                    e0 = Some(edge);
                }
            } else if r < t1 {
                t1 = r;
                e1 = Some(edge);
            }
        }
    }
    if t0 >= t1 {
        return None;
    }
    let snap = |mut p: Point2<f64>, edge: Option<usize>| {
        match edge {
            Some(0) => p.x = 0.0,
            Some(1) => p.x = h,
            Some(2) => p.y = 0.0,
            Some(3) => p.y = h,
            _ => {}
        }
        p.x = p.x.clamp(0.0, h);
        p.y = p.y.clamp(0.0, h);
        p
    };
    let pa = snap(a + d * t0, e0);
    let pb = snap(a + d * t1, e1);
    if (pb - pa).norm() == 0.0 {
        return None;
    }
    Some((pa, pb))
}

/// Merges points closer than a tolerance, assigning indices in first-seen order.
pub(crate) struct VertexMerger {
    tol: f64,
    buckets: std::collections::HashMap<(i64, i64), Vec<usize>>,
    pub points: Vec<Point2<f64>>,
}

impl VertexMerger {
    pub fn new(tol: f64) -> Self {
        VertexMerger {
            tol,
            buckets: Default::default(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: Point2<f64>) -> (i64, i64) {
        ((p.x / self.tol).floor() as i64, (p.y / self.tol).floor() as i64)
    }

    pub fn insert(&mut self, p: Point2<f64>) -> usize {
        let (kx, ky) = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if let Some(&id) = ids.iter().find(|&&id| (self.points[id] - p).norm() <= self.tol) {
                        return id;
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.buckets.entry((kx, ky)).or_default().push(id);
        id
    }
}

/// Collects clipped segments into a deduplicated wall list over merged vertices.
pub(crate) fn build_walls(
    segments: impl IntoIterator<Item = (Point2<f64>, Point2<f64>)>,
    h: f64,
) -> (Vec<Point2<f64>>, Vec<[usize; 2]>) {
    let mut merger = VertexMerger::new(MERGE_TOLERANCE * h);
    let mut seen = std::collections::HashSet::new();
    let mut walls = Vec::new();
    for (a, b) in segments {
        let Some((a, b)) = clip_to_square(a, b, h) else {
            continue;
        };
        let (ia, ib) = (merger.insert(a), merger.insert(b));
        if ia == ib {
            continue;
        }
        let key = (ia.min(ib), ia.max(ib));
        if seen.insert(key) {
            walls.push([key.0, key.1]);
        }
    }
    (merger.points, walls)
}
