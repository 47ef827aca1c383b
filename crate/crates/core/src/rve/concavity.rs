//! Concave-cell perturbations: a missing wall or a bent wall.

use nalgebra::Point2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{topology, RveGeometry};
use crate::error::{Error, Result};

/// Fractions of the chord-to-vertex distance tried when pushing a vertex inward.
const PUSH_FACTORS: [f64; 3] = [0.35, 0.2, 0.1];

/// Applies `count` perturbations, each either removing one interior wall or
/// pushing one interior vertex past the chord of two of its neighbours. Each
/// one leaves at least one more concave cell and keeps the graph connected.
/// Thickness or density is recomputed afterwards.
pub fn apply_concavity(geom: &RveGeometry, rng_seed: u64, count: usize) -> Result<RveGeometry> {
    let mut out = geom.clone();
    if count == 0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for k in 0..count {
        let before = concave_face_count(&out);
        let mut steps: [Step; 2] = [try_remove_wall, try_push_vertex];
        if !rng.gen_bool(0.5) {
            steps.swap(0, 1);
        }
        let done = steps.iter().any(|step| step(&mut out, &mut rng, before));
        if !done {
            return Err(Error::Perturbation(format!(
                "no admissible wall or vertex left for perturbation {} of {count}",
                k + 1
            )));
        }
    }
    out.update_density()?;
    Ok(out)
}

type Step = fn(&mut RveGeometry, &mut ChaCha8Rng, usize) -> bool;

fn concave_face_count(geom: &RveGeometry) -> usize {
    topology::faces(geom).iter().filter(|f| !f.is_convex()).count()
}

fn interior_walls(geom: &RveGeometry) -> Vec<usize> {
    let deg = geom.degrees();
    geom.walls
        .iter()
        .enumerate()
        .filter(|(_, &[a, b])| !geom.is_boundary_vertex(a) && !geom.is_boundary_vertex(b) && deg[a] >= 3 && deg[b] >= 3)
        .map(|(k, _)| k)
        .collect()
}

fn try_remove_wall(geom: &mut RveGeometry, rng: &mut ChaCha8Rng, concave_before: usize) -> bool {
    let mut candidates = interior_walls(geom);
    candidates.shuffle(rng);
    for k in candidates {
        let mut walls = geom.walls.clone();
        walls.remove(k);
        let trial = RveGeometry { walls, ..geom.clone() };
        if !trial.is_connected() {
            continue;
        }
        if concave_face_count(&trial) > concave_before {
            *geom = trial;
            return true;
        }
    }
    false
}

fn try_push_vertex(geom: &mut RveGeometry, rng: &mut ChaCha8Rng, concave_before: usize) -> bool {
    let deg = geom.degrees();
    let mut candidates: Vec<usize> = (0..geom.vertices.len())
        .filter(|&v| deg[v] >= 3 && !geom.is_boundary_vertex(v))
        .collect();
    candidates.shuffle(rng);
    for v in candidates {
        let mut nbrs: Vec<usize> = geom
            .walls
            .iter()
            .filter_map(|&[a, b]| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        let p = geom.vertices[v];
        nbrs.sort_by(|&a, &b| {
            let (da, db) = (geom.vertices[a] - p, geom.vertices[b] - p);
            da.y.atan2(da.x).total_cmp(&db.y.atan2(db.x))
        });
        // consecutive neighbours bound one face; pick one at random
        let start = rng.gen_range(0..nbrs.len());
        let (n1, n2) = (nbrs[start], nbrs[(start + 1) % nbrs.len()]);
        let (a, b) = (geom.vertices[n1], geom.vertices[n2]);
        let (u, w) = (a - p, b - p);
        if u.x * w.y - u.y * w.x <= 0.0 {
            continue; // angle ≥ 180°: the face on that side is already reflex at v
        }
        let mid = Point2::from((a.coords + b.coords) * 0.5);
        for factor in PUSH_FACTORS {
            let target = mid + (mid - p) * factor;
            let mut trial = geom.clone();
            trial.vertices[v] = target;
            if !walls_are_simple(&trial, v) {
                continue;
            }
            if concave_face_count(&trial) > concave_before {
                *geom = trial;
                return true;
            }
        }
    }
    false
}

/// True when no wall incident to `v` crosses or touches a non-adjacent wall and none is degenerate.
fn walls_are_simple(geom: &RveGeometry, v: usize) -> bool {
    let tol = super::MERGE_TOLERANCE * geom.h;
    let moved: Vec<[usize; 2]> = geom.walls.iter().copied().filter(|w| w.contains(&v)).collect();
    for &[a, b] in &moved {
        let (p, q) = (geom.vertices[a], geom.vertices[b]);
        if (q - p).norm() <= tol {
            return false;
        }
        for &[c, d] in &geom.walls {
            if c == a || c == b || d == a || d == b {
                continue;
            }
            if segments_intersect(p, q, geom.vertices[c], geom.vertices[d]) {
                return false;
            }
        }
    }
    true
}

fn segments_intersect(p: Point2<f64>, q: Point2<f64>, r: Point2<f64>, s: Point2<f64>) -> bool {
    let orient = |a: Point2<f64>, b: Point2<f64>, c: Point2<f64>| {
        let (u, w) = (b - a, c - a);
        u.x * w.y - u.y * w.x
    };
    let (d1, d2) = (orient(r, s, p), orient(r, s, q));
    let (d3, d4) = (orient(p, q, r), orient(p, q, s));
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}
