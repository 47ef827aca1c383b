//! Periodic Voronoi wall networks.
//!
//! Each seed's cell is computed on the torus `[0, H)²` by clipping a box against
//! the bisectors of the surrounding seed images (3×3 replication around the
//! seed's minimum image). Translating every cell by the nine lattice offsets and
//! clipping to the fundamental square yields walls whose crossings of `x = 0`
//! and `x = H` are exact translates.

use nalgebra::{Point2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apply_concavity, build_walls, regular_lattice, LatticeKind, Morphology, RveConfig, RveGeometry};
use crate::error::{Error, Result};

/// Total number of rejected candidate draws tolerated per seed.
const ATTEMPTS_PER_SEED: usize = 20_000;

/// Draws `n` seeds uniformly in `[0, h)²` with a minimum periodic separation.
pub fn sample_seeds(n: usize, h: f64, min_sep: f64, rng: &mut impl Rng) -> Result<Vec<Point2<f64>>> {
    let mut seeds: Vec<Point2<f64>> = Vec::with_capacity(n);
    let budget = ATTEMPTS_PER_SEED * n.max(1);
    let mut attempts = 0;
    while seeds.len() < n {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Generation(format!(
                "placed only {} of {n} seeds with minimum separation {min_sep:.4} mm",
                seeds.len()
            )));
        }
        let p = Point2::new(rng.gen_range(0.0..h), rng.gen_range(0.0..h));
        if seeds.iter().all(|q| periodic_distance(&p, q, h) >= min_sep) {
            seeds.push(p);
        }
    }
    Ok(seeds)
}

fn minimum_image(d: Vector2<f64>, h: f64) -> Vector2<f64> {
    d.map(|c| c - h * (c / h).round())
}

fn periodic_distance(a: &Point2<f64>, b: &Point2<f64>, h: f64) -> f64 {
    minimum_image(b - a, h).norm()
}

/// Keeps the part of a convex polygon with `(x - m)·n ≤ 0`.
fn clip_half_plane(poly: &[Point2<f64>], m: Point2<f64>, n: Vector2<f64>) -> Vec<Point2<f64>> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let len = poly.len();
    for i in 0..len {
        let (p, q) = (poly[i], poly[(i + 1) % len]);
        let (dp, dq) = ((p - m).dot(&n), (q - m).dot(&n));
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let t = dp / (dp - dq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Voronoi cell of every seed on the torus of side `h`, as counter-clockwise
/// polygons in unwrapped coordinates around the seed.
pub fn periodic_voronoi_cells(seeds: &[Point2<f64>], h: f64) -> Vec<Vec<Point2<f64>>> {
    seeds
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut images: Vec<Vector2<f64>> = Vec::with_capacity(9 * seeds.len());
            for (k, &q) in seeds.iter().enumerate() {
                let d = minimum_image(q - s, h);
                for ox in [-h, 0.0, h] {
                    for oy in [-h, 0.0, h] {
                        if k == i && ox == 0.0 && oy == 0.0 {
                            continue;
                        }
                        images.push(d + Vector2::new(ox, oy));
                    }
                }
            }
            images.sort_by(|a, b| {
                a.norm_squared()
                    .total_cmp(&b.norm_squared())
                    .then(a.x.total_cmp(&b.x))
                    .then(a.y.total_cmp(&b.y))
            });
            let r = h;
            let mut cell = vec![
                s + Vector2::new(-r, -r),
                s + Vector2::new(r, -r),
                s + Vector2::new(r, r),
                s + Vector2::new(-r, r),
            ];
            let mut reach = 2.0_f64.sqrt() * r;
            for d in images {
                // bisector can only cut the cell if the image is within twice its radius
                if d.norm() > 2.0 * reach {
                    break;
                }
                cell = clip_half_plane(&cell, s + d * 0.5, d);
                reach = cell.iter().map(|p| (p - s).norm()).fold(0.0, f64::max);
            }
            cell
        })
        .collect()
}

/// Builds the clipped periodic Voronoi wall network for the given seeds.
pub(crate) fn voronoi_geometry(seeds: Vec<Point2<f64>>, h: f64, density: super::DensitySpec) -> Result<RveGeometry> {
    let cells = periodic_voronoi_cells(&seeds, h);
    let mut segments = Vec::new();
    for cell in &cells {
        for ox in [-h, 0.0, h] {
            for oy in [-h, 0.0, h] {
                let shift = Vector2::new(ox, oy);
                for k in 0..cell.len() {
                    segments.push((cell[k] + shift, cell[(k + 1) % cell.len()] + shift));
                }
            }
        }
    }
    let (vertices, walls) = build_walls(segments, h);
    RveGeometry::assemble(h, vertices, walls, seeds.len(), density, seeds)
}

/// Generates an RVE according to `config`; a pure function of the config.
pub fn generate_rve(config: &RveConfig) -> Result<RveGeometry> {
    config.validate()?;
    let n = config.cell_count()?;
    let h = config.h;
    match config.morphology {
        Morphology::RegularHex | Morphology::RegularSquare => {
            let kind = if config.morphology == Morphology::RegularHex {
                LatticeKind::Hex
            } else {
                LatticeKind::Square
            };
            let per_side = ((n as f64).sqrt().round() as usize).max(1);
            regular_lattice(kind, h, per_side, config.density)
        }
        Morphology::RandomConvex | Morphology::ConcavePerturbed => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
            let min_sep = config.min_sep_factor * h / (n as f64).sqrt();
            let seeds = sample_seeds(n, h, min_sep, &mut rng)?;
            let geom = voronoi_geometry(seeds, h, config.density)?;
            if config.morphology == Morphology::ConcavePerturbed {
                let perturb_seed: u64 = rng.gen();
                apply_concavity(&geom, perturb_seed, config.concavity_count)
            } else {
                Ok(geom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rve::topology;
    use crate::rve::DensitySpec;

    #[test]
    fn single_seed_cell_is_the_period_square() {
        let cells = periodic_voronoi_cells(&[Point2::new(3.0, 4.0)], 10.0);
        let area = topology::signed_area(&cells[0]);
        assert!((area - 100.0).abs() < 1e-9);
    }

    #[test]
    fn cells_tile_the_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seeds = sample_seeds(40, 10.0, 0.3 * 10.0 / 40f64.sqrt(), &mut rng).unwrap();
        let cells = periodic_voronoi_cells(&seeds, 10.0);
        let total: f64 = cells.iter().map(|c| topology::signed_area(c)).sum();
        assert!((total - 100.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn separation_rule_is_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = 30.0;
        let min_sep = 0.3 * h / 109f64.sqrt();
        let seeds = sample_seeds(109, h, min_sep, &mut rng).unwrap();
        for (i, a) in seeds.iter().enumerate() {
            for b in &seeds[i + 1..] {
                assert!(periodic_distance(a, b, h) >= min_sep);
            }
        }
    }

    #[test]
    fn impossible_separation_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = sample_seeds(50, 1.0, 0.9, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Generation(_)));
    }

    #[test]
    fn small_networks_are_valid() {
        for n in 1..=6 {
            for seed in 0..5 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let seeds = sample_seeds(n, 30.0, 0.3 * 30.0 / (n as f64).sqrt(), &mut rng).unwrap();
                let g = voronoi_geometry(seeds, 30.0, DensitySpec::TargetDensity(0.1)).unwrap();
                g.validate().unwrap();
            }
        }
    }
}
