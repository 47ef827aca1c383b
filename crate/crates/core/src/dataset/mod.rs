//! Image + label datasets of homogenized RVEs for the image regressor.
//!
//! Layout of an output directory:
//!
//! ```text
//! manifest.csv        id,image,seed,n_cells,mu,morphology,label_mpa,split
//! manifest.json       config echo, split sizes, label range, checksum
//! images/rve_000000.png
//! ```
//!
//! Every sample is a pure function of `(config, seed)` and every seed a pure
//! function of `(master_seed, id, attempt)`, so the output does not depend on
//! the number of workers.

mod manifest;

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fem::{homogenize, MeshOptions};
use crate::material::WallMaterial;
use crate::rve::{
    encode_png, generate_rve, rasterize, regular_lattice, DensitySpec, LatticeKind, Morphology, RveConfig, RveGeometry,
    DEFAULT_MIN_SEP_FACTOR,
};

pub use manifest::{
    dataset_checksum, label_envelope_check, parse_manifest_csv, read_sidecar, verify_dataset, write_manifest_csv,
    EnvelopeReport, ManifestRecord, Sidecar, LABEL_ENVELOPE, MANIFEST_CSV, MANIFEST_JSON,
};

pub const IMAGE_DIR: &str = "images";

/// Empirical `L_cell / (H √n)` of the Voronoi generator, refined per sample.
const VORONOI_LENGTH_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(Error::config("split", format!("unknown split `{other}`"))),
        }
    }
}

/// Fractions of random-convex, concave-perturbed and regular samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphologyMix {
    pub random_convex: f64,
    pub concave_perturbed: f64,
    pub regular: f64,
}

impl Default for MorphologyMix {
    fn default() -> Self {
        MorphologyMix {
            random_convex: 0.90,
            concave_perturbed: 0.07,
            regular: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub count: usize,
    /// RVE side (mm).
    pub h: f64,
    /// Wall thickness shared by all samples (mm).
    pub t_fixed: f64,
    pub mu_range: [f64; 2],
    pub mix: MorphologyMix,
    pub image_px: u32,
    /// Train, validation, test.
    pub split: [f64; 3],
    pub master_seed: u64,
    pub concavity_count: usize,
    /// Fallback seeds tried after a failed sample.
    pub max_retries: usize,
    pub material: WallMaterial,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            count: 2051,
            h: 30.0,
            t_fixed: 0.1142,
            mu_range: [0.061, 0.201],
            mix: MorphologyMix::default(),
            image_px: 512,
            split: [0.70, 0.20, 0.10],
            master_seed: 0,
            concavity_count: 1,
            max_retries: 4,
            material: WallMaterial::aluminium(),
        }
    }
}

fn fractions_ok(f: &[f64]) -> bool {
    f.iter().all(|&x| (0.0..=1.0).contains(&x)) && (f.iter().sum::<f64>() - 1.0).abs() <= 1e-9
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::config("count", "at least one sample is required"));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::config(
                "H",
                format!("side length must be positive, got {}", self.h),
            ));
        }
        DensitySpec::FixedThickness(self.t_fixed).validate()?;
        let [lo, hi] = self.mu_range;
        if !(lo > 0.0 && lo <= hi && hi < 1.0) {
            return Err(Error::config(
                "mu_range",
                format!("need 0 < lo ≤ hi < 1, got [{lo}, {hi}]"),
            ));
        }
        let mix = self.mix;
        if !fractions_ok(&[mix.random_convex, mix.concave_perturbed, mix.regular]) {
            return Err(Error::config(
                "mix",
                "morphology fractions must be in [0, 1] and sum to 1",
            ));
        }
        if !fractions_ok(&self.split) {
            return Err(Error::config("split", "split fractions must be in [0, 1] and sum to 1"));
        }
        if self.image_px < 64 {
            return Err(Error::config(
                "image_px",
                format!("images need at least 64 px, got {}", self.image_px),
            ));
        }
        self.material.validate()
    }
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of sample `id` on its `attempt`-th try.
pub fn sample_seed(master_seed: u64, id: usize, attempt: usize) -> u64 {
    mix64(mix64(mix64(master_seed) ^ id as u64) ^ attempt as u64)
}

/// Split sizes: `floor(f_train·n)`, `floor(f_val·n)`, remainder to test, except
/// that a non-empty dataset always gets at least one training sample.
pub fn split_sizes(count: usize, fractions: [f64; 3]) -> [usize; 3] {
    let floor = |f: f64| ((f * count as f64).floor() as usize).min(count);
    let mut train = floor(fractions[0]);
    if count > 0 && train == 0 {
        train = 1;
    }
    let val = floor(fractions[1]).min(count - train);
    [train, val, count - train - val]
}

/// Seed-derived permutation of `0..count` cut by [`split_sizes`].
pub fn split_assign(count: usize, fractions: [f64; 3], master_seed: u64) -> Vec<Split> {
    let mut order: Vec<usize> = (0..count).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(master_seed ^ 0x5b1d_5b1d));
    order.shuffle(&mut rng);
    let [train, val, _] = split_sizes(count, fractions);
    let mut tags = vec![Split::Test; count];
    for (rank, &id) in order.iter().enumerate() {
        tags[id] = if rank < train {
            Split::Train
        } else if rank < train + val {
            Split::Val
        } else {
            Split::Test
        };
    }
    tags
}

/// One generated and homogenized sample.
#[derive(Debug, Clone)]
pub struct Sample {
    pub seed: u64,
    pub morphology: Morphology,
    pub mu_target: f64,
    pub geometry: RveGeometry,
    pub label_mpa: f64,
}

fn pick_morphology(mix: &MorphologyMix, rng: &mut ChaCha8Rng) -> Morphology {
    let u: f64 = rng.gen();
    if u < mix.random_convex {
        Morphology::RandomConvex
    } else if u < mix.random_convex + mix.concave_perturbed {
        Morphology::ConcavePerturbed
    } else if rng.gen_bool(0.5) {
        Morphology::RegularHex
    } else {
        Morphology::RegularSquare
    }
}

fn voronoi_rve(config: &DatasetConfig, morphology: Morphology, n: usize, seed: u64) -> Result<RveGeometry> {
    generate_rve(&RveConfig {
        h: config.h,
        cell_size: None,
        n_cells: Some(n.max(1)),
        density: DensitySpec::FixedThickness(config.t_fixed),
        min_sep_factor: DEFAULT_MIN_SEP_FACTOR,
        morphology,
        concavity_count: config.concavity_count,
        rng_seed: seed,
    })
}

/// Builds and homogenizes the sample for `seed`. The target density is hit
/// approximately by choosing the cell count; the realized density is recorded.
pub fn generate_sample(config: &DatasetConfig, seed: u64) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [lo, hi] = config.mu_range;
    let mu_target = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
    let morphology = pick_morphology(&config.mix, &mut rng);
    let h = config.h;
    let target_length = mu_target * h * h / config.t_fixed;
    let geometry = match morphology {
        Morphology::RegularHex | Morphology::RegularSquare => {
            // both lattices carry about 2nH of wall for n cells per side
            let per_side = ((target_length / (2.0 * h)).round() as usize).max(1);
            let kind = if morphology == Morphology::RegularHex {
                LatticeKind::Hex
            } else {
                LatticeKind::Square
            };
            regular_lattice(kind, h, per_side, DensitySpec::FixedThickness(config.t_fixed))?
        }
        _ => {
            let guess = |factor: f64| ((target_length / (factor * h)).powi(2).round() as usize).max(2);
            let n0 = guess(VORONOI_LENGTH_FACTOR);
            let first = voronoi_rve(config, morphology, n0, seed)?;
            let n1 = guess(first.wall_length / (h * (n0 as f64).sqrt()));
            if n1 == n0 {
                first
            } else {
                voronoi_rve(config, morphology, n1, seed)?
            }
        }
    };
    let record = homogenize(&geometry, &config.material, &MeshOptions::default())?;
    if !(record.modulus > 0.0 && record.modulus.is_finite()) {
        return Err(Error::Mechanism(format!("non-positive modulus {}", record.modulus)));
    }
    Ok(Sample {
        seed,
        morphology,
        mu_target,
        geometry,
        label_mpa: record.modulus,
    })
}

pub fn image_name(id: usize) -> String {
    format!("{IMAGE_DIR}/rve_{id:06}.png")
}

/// Result of [`build_dataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub records: Vec<ManifestRecord>,
    pub sidecar: Sidecar,
}

/// Generates `config.count` samples with `workers` threads and writes the
/// dataset under `out_dir`. Samples that fail on all seeds abort the build with
/// [`Error::PartialDataset`]; nothing but images is written in that case.
pub fn build_dataset(config: &DatasetConfig, out_dir: &Path, workers: usize) -> Result<DatasetManifest> {
    config.validate()?;
    if workers == 0 {
        return Err(Error::config("workers", "at least one worker is required"));
    }
    fs::create_dir_all(out_dir.join(IMAGE_DIR))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    let splits = split_assign(config.count, config.split, config.master_seed);

    let job = |id: usize| -> Result<Option<(ManifestRecord, [u8; 32])>> {
        for attempt in 0..=config.max_retries {
            let seed = sample_seed(config.master_seed, id, attempt);
            let Ok(sample) = generate_sample(config, seed) else {
                continue;
            };
            let png = encode_png(&rasterize(&sample.geometry, config.image_px)?)?;
            let image = image_name(id);
            fs::write(out_dir.join(&image), &png)?;
            let record = ManifestRecord {
                id,
                image,
                seed,
                n_cells: sample.geometry.n_cells,
                mu: sample.geometry.relative_density,
                morphology: sample.morphology,
                label_mpa: sample.label_mpa,
                split: splits[id],
            };
            return Ok(Some((record, Sha256::digest(&png).into())));
        }
        Ok(None)
    };
    let results: Vec<Option<(ManifestRecord, [u8; 32])>> =
        pool.install(|| (0..config.count).into_par_iter().map(job).collect::<Result<_>>())?;

    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_none())
        .map(|(i, _)| i)
        .collect();
    if !failed.is_empty() {
        return Err(Error::PartialDataset { failed });
    }
    let (records, digests): (Vec<_>, Vec<_>) = results.into_iter().flatten().unzip();
    let csv = write_manifest_csv(&records)?;
    let checksum = dataset_checksum(csv.as_bytes(), &digests);
    let sidecar = Sidecar::new(config.clone(), &records, checksum)?;
    fs::write(out_dir.join(MANIFEST_CSV), csv)?;
    fs::write(out_dir.join(MANIFEST_JSON), serde_json::to_string_pretty(&sidecar)?)?;
    Ok(DatasetManifest { records, sidecar })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_size_examples() {
        let f = [0.7, 0.2, 0.1];
        assert_eq!(split_sizes(2051, f), [1435, 410, 206]);
        assert_eq!(split_sizes(10, f), [7, 2, 1]);
        assert_eq!(split_sizes(1, f), [1, 0, 0]);
        assert_eq!(split_sizes(2, f), [1, 0, 1]);
        assert_eq!(split_sizes(0, f), [0, 0, 0]);
        assert_eq!(split_assign(1, f, 3), vec![Split::Train]);
    }

    #[test]
    fn split_assignment_is_a_partition() {
        let tags = split_assign(2051, [0.7, 0.2, 0.1], 11);
        let count = |s| tags.iter().filter(|&&t| t == s).count();
        assert_eq!(
            [count(Split::Train), count(Split::Val), count(Split::Test)],
            [1435, 410, 206]
        );
        assert_eq!(tags, split_assign(2051, [0.7, 0.2, 0.1], 11));
        assert_ne!(tags, split_assign(2051, [0.7, 0.2, 0.1], 12));
    }

    #[test]
    fn seeds_differ_per_sample_and_attempt() {
        let mut seen = std::collections::HashSet::new();
        for id in 0..100 {
            for attempt in 0..4 {
                assert!(seen.insert(sample_seed(5, id, attempt)));
            }
        }
    }

    #[test]
    fn sample_hits_density_roughly() {
        let config = DatasetConfig::default();
        for seed in 0..4 {
            let s = generate_sample(&config, seed).unwrap();
            let rel = (s.geometry.relative_density - s.mu_target).abs() / s.mu_target;
            assert!(
                rel < 0.15,
                "seed {seed}: target {} got {}",
                s.mu_target,
                s.geometry.relative_density
            );
            assert!(s.label_mpa > 0.0);
        }
    }

    #[test]
    fn config_validation() {
        DatasetConfig::default().validate().unwrap();
        let bad = DatasetConfig {
            split: [0.7, 0.2, 0.2],
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig { field, .. }) if field == "split"));
        let bad = DatasetConfig {
            mu_range: [0.2, 0.1],
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = DatasetConfig {
            count: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
