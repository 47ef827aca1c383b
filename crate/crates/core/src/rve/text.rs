//! Plain-text geometry format.
//!
//! ```text
//! rve-geometry 1 H=30 t_cell=0.1236 mu=0.0852 n_cells=109
//! v 0 14.2
//! w 0 1
//! p 0 7
//! ```
//!
//! `v x y` lines define vertices in order, `w i j` walls and `p l r` left/right
//! periodic pairs. Blank lines and `#` comments are ignored. A parsed geometry
//! is always in fixed-thickness mode and must pass [`RveGeometry::validate`].

use std::fmt::Write as _;

use nalgebra::Point2;

use super::{DensitySpec, RveGeometry, MERGE_TOLERANCE};
use crate::error::{Error, Result};

pub const GEOMETRY_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "rve-geometry";
/// Upper bound on declared sizes so hostile input cannot force huge allocations.
const MAX_ENTITIES: usize = 10_000_000;

pub fn write_geometry(geom: &RveGeometry) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{MAGIC} {GEOMETRY_FORMAT_VERSION} H={} t_cell={} mu={} n_cells={}",
        geom.h, geom.thickness, geom.relative_density, geom.n_cells
    );
    for p in &geom.vertices {
        let _ = writeln!(out, "v {} {}", p.x, p.y);
    }
    for &[a, b] in &geom.walls {
        let _ = writeln!(out, "w {a} {b}");
    }
    for &(l, r) in &geom.boundary_pairs {
        let _ = writeln!(out, "p {l} {r}");
    }
    out
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("cannot parse {what} from `{tok}`")))
}

pub fn parse_geometry(text: &str) -> Result<RveGeometry> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty geometry file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(MAGIC) {
        return Err(Error::parse(hl, format!("expected `{MAGIC}` header")));
    }
    let version: u32 = number(toks.next(), hl, "format version")?;
    if version != GEOMETRY_FORMAT_VERSION {
        return Err(Error::parse(hl, format!("unsupported format version {version}")));
    }
    let (mut h, mut t, mut mu, mut n_cells) = (None, None, None, None);
    for tok in toks {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(hl, format!("expected key=value, got `{tok}`")))?;
        match key {
            "H" => h = Some(number::<f64>(Some(value), hl, "H")?),
            "t_cell" => t = Some(number::<f64>(Some(value), hl, "t_cell")?),
            "mu" => mu = Some(number::<f64>(Some(value), hl, "mu")?),
            "n_cells" => n_cells = Some(number::<usize>(Some(value), hl, "n_cells")?),
            other => return Err(Error::parse(hl, format!("unknown header key `{other}`"))),
        }
    }
    let missing = |k: &str| Error::parse(hl, format!("header lacks `{k}`"));
    let h = h.ok_or_else(|| missing("H"))?;
    let t = t.ok_or_else(|| missing("t_cell"))?;
    let mu = mu.ok_or_else(|| missing("mu"))?;
    let n_cells = n_cells.ok_or_else(|| missing("n_cells"))?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::parse(hl, "H must be positive"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::parse(hl, "t_cell must be positive"));
    }

    let mut vertices = Vec::new();
    let mut walls = Vec::new();
    let mut pairs = Vec::new();
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let tag = toks.next().unwrap_or_default();
        match tag {
            "v" => {
                let x: f64 = number(toks.next(), ln, "x")?;
                let y: f64 = number(toks.next(), ln, "y")?;
                vertices.push(Point2::new(x, y));
            }
            "w" => walls.push([
                number(toks.next(), ln, "wall start")?,
                number(toks.next(), ln, "wall end")?,
            ]),
            "p" => pairs.push((
                number(toks.next(), ln, "left vertex")?,
                number(toks.next(), ln, "right vertex")?,
            )),
            other => return Err(Error::parse(ln, format!("unknown record `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(Error::parse(ln, "trailing tokens"));
        }
        if vertices.len() + walls.len() + pairs.len() > MAX_ENTITIES {
            return Err(Error::parse(ln, "too many records"));
        }
    }

    let tol = MERGE_TOLERANCE * h;
    let bottom_vertices = (0..vertices.len()).filter(|&i| vertices[i].y <= tol).collect();
    let top_vertices = (0..vertices.len())
        .filter(|&i| vertices[i].y >= h - tol && vertices[i].y > tol)
        .collect();
    let mut geom = RveGeometry {
        h,
        vertices,
        walls,
        boundary_pairs: pairs,
        bottom_vertices,
        top_vertices,
        n_cells,
        wall_length: 0.0,
        thickness: t,
        relative_density: mu,
        density: DensitySpec::FixedThickness(t),
        seeds: Vec::new(),
    };
    let n = geom.vertices.len();
    if geom.walls.iter().flatten().any(|&v| v >= n) || geom.boundary_pairs.iter().any(|&(l, r)| l >= n || r >= n) {
        return Err(Error::Integrity("record references a missing vertex".into()));
    }
    geom.wall_length = geom.walls.iter().map(|&w| geom.wall_len(w)).sum();
    geom.validate()?;
    Ok(geom)
}
