//! Graph utilities on wall networks: connectivity, planar faces, convexity.

use std::collections::HashMap;

use nalgebra::Point2;

use super::{RveGeometry, MERGE_TOLERANCE};

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so labels do not depend on union order
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Component label (smallest member index) of each vertex.
pub fn component_labels(n: usize, walls: &[[usize; 2]]) -> Vec<usize> {
    let mut ds = DisjointSet::new(n);
    for &[a, b] in walls {
        ds.union(a, b);
    }
    (0..n).map(|i| ds.find(i)).collect()
}

/// Number of connected components among vertices touched by at least one wall.
pub fn component_count(n: usize, walls: &[[usize; 2]]) -> usize {
    let labels = component_labels(n, walls);
    let mut roots: Vec<usize> = walls.iter().map(|&[a, _]| labels[a]).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// A bounded face of the wall network, counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub polygon: Vec<Point2<f64>>,
}

impl Face {
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.polygon)
    }

    pub fn centroid(&self) -> Point2<f64> {
        let n = self.polygon.len() as f64;
        let sum = self
            .polygon
            .iter()
            .fold(nalgebra::Vector2::zeros(), |acc, p| acc + p.coords);
        Point2::from(sum / n)
    }

    /// Signed-turn convexity test: every turn of a counter-clockwise polygon is
    /// non-negative up to a relative tolerance.
    pub fn is_convex(&self) -> bool {
        is_convex(&self.polygon)
    }
}

pub fn signed_area(poly: &[Point2<f64>]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum::<f64>()
        * 0.5
}

pub fn is_convex(poly: &[Point2<f64>]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let orientation = signed_area(poly).signum();
    (0..n).all(|i| {
        let (a, b, c) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        let (u, v) = (b - a, c - b);
        let cross = u.x * v.y - u.y * v.x;
        cross * orientation >= -1e-9 * u.norm() * v.norm()
    })
}

/// Bounded faces of the network closed off by the RVE perimeter.
///
/// Perimeter segments between consecutive boundary vertices (and the four corners)
/// are added before tracing, so cells cut by the edges come out as closed polygons.
pub fn faces(geom: &RveGeometry) -> Vec<Face> {
    let h = geom.h;
    let tol = MERGE_TOLERANCE * h;
    let mut points = geom.vertices.clone();
    let mut edges: Vec<[usize; 2]> = geom.walls.clone();

    // perimeter positions: parameter s in [0, 4H) going counter-clockwise from (0,0)
    let perimeter_param = |p: Point2<f64>| -> Option<f64> {
        if p.y <= tol {
            Some(p.x)
        } else if p.x >= h - tol {
            Some(h + p.y)
        } else if p.y >= h - tol {
            Some(3.0 * h - p.x)
        } else if p.x <= tol {
            Some(4.0 * h - p.y)
        } else {
            None
        }
    };
    let mut on_perimeter: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| perimeter_param(p).map(|s| (s, i)))
        .collect();
    for corner in [
        Point2::new(0.0, 0.0),
        Point2::new(h, 0.0),
        Point2::new(h, h),
        Point2::new(0.0, h),
    ] {
        if !points.iter().any(|p| (p - corner).norm() <= tol) {
            let id = points.len();
            points.push(corner);
            on_perimeter.push((perimeter_param(corner).unwrap_or(0.0), id));
        }
    }
    on_perimeter.sort_by(|a, b| a.0.total_cmp(&b.0));
    for k in 0..on_perimeter.len() {
        let a = on_perimeter[k].1;
        let b = on_perimeter[(k + 1) % on_perimeter.len()].1;
        if a != b {
            edges.push([a, b]);
        }
    }
    trace_faces(&points, &edges)
        .into_iter()
        .filter(|f| f.signed_area() > 0.0)
        .collect()
}

/// Traces all faces of a planar straight-line graph (faces on the left of each
/// half-edge). The unbounded face comes out clockwise.
pub fn trace_faces(points: &[Point2<f64>], edges: &[[usize; 2]]) -> Vec<Face> {
    let n = points.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &[a, b] in edges {
        if a != b && !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let angle = |from: usize, to: usize| {
        let d = points[to] - points[from];
        d.y.atan2(d.x)
    };
    for (v, nbrs) in adj.iter_mut().enumerate() {
        nbrs.sort_by(|&a, &b| angle(v, a).total_cmp(&angle(v, b)));
    }
    // position of each neighbour in the sorted list
    let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
    for (v, nbrs) in adj.iter().enumerate() {
        for (k, &w) in nbrs.iter().enumerate() {
            slot.insert((v, w), k);
        }
    }
    let mut visited: HashMap<(usize, usize), bool> = HashMap::new();
    let mut out = Vec::new();
    for start_v in 0..n {
        for &start_w in &adj[start_v] {
            if visited.contains_key(&(start_v, start_w)) {
                continue;
            }
            let mut poly = Vec::new();
            let (mut u, mut v) = (start_v, start_w);
            loop {
                visited.insert((u, v), true);
                poly.push(points[u]);
                // next edge: the one just clockwise of the reversed half-edge v→u
                let k = slot[&(v, u)];
                let deg = adj[v].len();
                let w = adj[v][(k + deg - 1) % deg];
                u = v;
                v = w;
                if (u, v) == (start_v, start_w) || poly.len() > 4 * edges.len() + 4 {
                    break;
                }
            }
            out.push(Face { polygon: poly });
        }
    }
    out
}
