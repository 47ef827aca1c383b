use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DatasetConfig, Split};
use crate::error::{Error, Result};
use crate::rve::Morphology;

pub const MANIFEST_CSV: &str = "manifest.csv";
pub const MANIFEST_JSON: &str = "manifest.json";
const HEADER: [&str; 8] = [
    "id",
    "image",
    "seed",
    "n_cells",
    "mu",
    "morphology",
    "label_mpa",
    "split",
];
const SIDECAR_VERSION: u32 = 1;

/// Label range (MPa) of the reference image set, used as a sanity envelope.
pub const LABEL_ENVELOPE: [f64; 2] = [282.5, 4587.3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: usize,
    /// Image path relative to the dataset directory.
    pub image: String,
    pub seed: u64,
    pub n_cells: usize,
    /// Realized relative density.
    pub mu: f64,
    pub morphology: Morphology,
    pub label_mpa: f64,
    pub split: Split,
}

pub fn write_manifest_csv(records: &[ManifestRecord]) -> Result<String> {
    // header written by hand so an empty manifest still carries it
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(HEADER).map_err(csv_error)?;
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::parse(line, e.to_string())
}

/// Parses and checks a manifest: exact header, ids dense `0..n` in order,
/// relative image paths, positive labels, densities in `(0, 1)`.
pub fn parse_manifest_csv(text: &str) -> Result<Vec<ManifestRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_error)?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::parse(1, format!("expected header `{}`", HEADER.join(","))));
    }
    let mut records = Vec::new();
    for (k, row) in r.deserialize::<ManifestRecord>().enumerate() {
        let rec = row.map_err(csv_error)?;
        let line = k + 2;
        if rec.id != k {
            return Err(Error::parse(line, format!("expected id {k}, found {}", rec.id)));
        }
        let path = Path::new(&rec.image);
        if rec.image.is_empty()
            || path.is_absolute()
            || path.components().any(|c| matches!(c, std::path::Component::ParentDir))
        {
            return Err(Error::parse(
                line,
                format!("image path `{}` must be relative and inside the dataset", rec.image),
            ));
        }
        if !(rec.label_mpa > 0.0 && rec.label_mpa.is_finite()) {
            return Err(Error::parse(
                line,
                format!("label must be positive, got {}", rec.label_mpa),
            ));
        }
        if !(rec.mu > 0.0 && rec.mu < 1.0) {
            return Err(Error::parse(
                line,
                format!("relative density must lie in (0, 1), got {}", rec.mu),
            ));
        }
        records.push(rec);
    }
    Ok(records)
}

/// SHA-256 over the manifest bytes followed by each image's SHA-256 in id order, hex.
pub fn dataset_checksum(manifest_csv: &[u8], image_digests: &[[u8; 32]]) -> String {
    let mut h = Sha256::new();
    h.update(manifest_csv);
    for d in image_digests {
        h.update(d);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub format_version: u32,
    pub config: DatasetConfig,
    pub n_samples: usize,
    pub split_counts: BTreeMap<String, usize>,
    pub envelope: EnvelopeReport,
    pub checksum: String,
}

impl Sidecar {
    pub fn new(config: DatasetConfig, records: &[ManifestRecord], checksum: String) -> Result<Self> {
        let mut split_counts = BTreeMap::new();
        for s in [Split::Train, Split::Val, Split::Test] {
            split_counts.insert(s.as_str().to_string(), records.iter().filter(|r| r.split == s).count());
        }
        Ok(Sidecar {
            format_version: SIDECAR_VERSION,
            config,
            n_samples: records.len(),
            split_counts,
            envelope: label_envelope_check(records)?,
            checksum,
        })
    }
}

pub fn read_sidecar(dir: &Path) -> Result<Sidecar> {
    Ok(serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_JSON))?)?)
}

/// Re-reads a dataset directory and checks that the manifest, every image and
/// the recorded checksum agree.
pub fn verify_dataset(dir: &Path) -> Result<Vec<ManifestRecord>> {
    let csv = fs::read_to_string(dir.join(MANIFEST_CSV))?;
    let records = parse_manifest_csv(&csv)?;
    let sidecar = read_sidecar(dir)?;
    if sidecar.n_samples != records.len() {
        return Err(Error::Integrity(format!(
            "sidecar lists {} samples, manifest has {}",
            sidecar.n_samples,
            records.len()
        )));
    }
    let mut digests = Vec::with_capacity(records.len());
    for r in &records {
        let bytes = fs::read(dir.join(&r.image))
            .map_err(|e| Error::Integrity(format!("sample {}: cannot read {}: {e}", r.id, r.image)))?;
        digests.push(Sha256::digest(&bytes).into());
    }
    let checksum = dataset_checksum(csv.as_bytes(), &digests);
    if checksum != sidecar.checksum {
        return Err(Error::Integrity(format!(
            "checksum mismatch: recorded {}, computed {checksum}",
            sidecar.checksum
        )));
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Share of labels outside [`LABEL_ENVELOPE`].
    pub fraction_outside: f64,
}

/// Label statistics against the reference envelope. Diagnostic only.
pub fn label_envelope_check(records: &[ManifestRecord]) -> Result<EnvelopeReport> {
    if records.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    let labels = records.iter().map(|r| r.label_mpa);
    let n = records.len();
    let [lo, hi] = LABEL_ENVELOPE;
    Ok(EnvelopeReport {
        n,
        min: labels.clone().fold(f64::INFINITY, f64::min),
        max: labels.clone().fold(f64::NEG_INFINITY, f64::max),
        mean: labels.clone().sum::<f64>() / n as f64,
        fraction_outside: labels.filter(|&l| l < lo || l > hi).count() as f64 / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: usize) -> ManifestRecord {
        ManifestRecord {
            id,
            image: super::super::image_name(id),
            seed: 12345678901234567890,
            n_cells: 109,
            mu: 0.08517,
            morphology: Morphology::ConcavePerturbed,
            label_mpa: 1093.25,
            split: Split::Val,
        }
    }

    #[test]
    fn csv_roundtrip() {
        let recs: Vec<_> = (0..3).map(record).collect();
        let csv = write_manifest_csv(&recs).unwrap();
        assert!(csv.starts_with("id,image,seed,n_cells,mu,morphology,label_mpa,split\n"));
        assert!(csv.contains("0,images/rve_000000.png,12345678901234567890,109,0.08517,concave-perturbed,1093.25,val"));
        assert_eq!(parse_manifest_csv(&csv).unwrap(), recs);
    }

    #[test]
    fn rejects_bad_manifests() {
        let good = write_manifest_csv(&[record(0), record(1)]).unwrap();
        for bad in [
            good.replace("id,image", "idx,image"),
            good.replace("\n1,", "\n2,"),
            good.replace("images/rve_000001.png", "../etc/passwd"),
            good.replace("1093.25,val", "-1,val"),
            good.replace("concave-perturbed", "blobby"),
            good.replace(",val", ",holdout"),
            good.replace("0.08517", "1.5"),
            "id,image\n".to_string(),
        ] {
            assert!(parse_manifest_csv(&bad).is_err(), "{bad}");
        }
        assert!(
            parse_manifest_csv("id,image,seed,n_cells,mu,morphology,label_mpa,split\n")
                .unwrap()
                .is_empty()
        );
        assert_eq!(
            write_manifest_csv(&[]).unwrap(),
            "id,image,seed,n_cells,mu,morphology,label_mpa,split\n"
        );
    }

    #[test]
    fn envelope() {
        assert!(matches!(label_envelope_check(&[]), Err(Error::Domain(m)) if m == "no samples"));
        let mut recs: Vec<_> = (0..4).map(record).collect();
        recs[3].label_mpa = 5000.0;
        let rep = label_envelope_check(&recs).unwrap();
        assert_eq!(rep.fraction_outside, 0.25);
        assert_eq!(rep.max, 5000.0);
    }

    #[test]
    fn checksum_depends_on_images() {
        let a = dataset_checksum(b"x", &[[0; 32]]);
        assert_eq!(a.len(), 64);
        assert_ne!(a, dataset_checksum(b"x", &[[1; 32]]));
        assert_ne!(a, dataset_checksum(b"y", &[[0; 32]]));
    }
}
