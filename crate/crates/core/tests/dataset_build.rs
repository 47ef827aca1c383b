use std::fs;

use foam_core::dataset::{
    build_dataset, parse_manifest_csv, split_sizes, verify_dataset, DatasetConfig, Split, MANIFEST_CSV,
};
use foam_core::Error;

fn small(count: usize, seed: u64) -> DatasetConfig {
    DatasetConfig {
        count,
        master_seed: seed,
        image_px: 64,
        ..Default::default()
    }
}

#[test]
fn build_is_reproducible_across_workers() {
    let cfg = small(12, 3);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let one = build_dataset(&cfg, a.path(), 1).unwrap();
    let four = build_dataset(&cfg, b.path(), 4).unwrap();
    assert_eq!(one.sidecar.checksum, four.sidecar.checksum);
    assert_eq!(one.records, four.records);
    assert_eq!(
        fs::read(a.path().join(MANIFEST_CSV)).unwrap(),
        fs::read(b.path().join(MANIFEST_CSV)).unwrap()
    );

    let other = tempfile::tempdir().unwrap();
    let reseeded = build_dataset(&small(12, 4), other.path(), 2).unwrap();
    assert_ne!(reseeded.sidecar.checksum, one.sidecar.checksum);
}

#[test]
fn built_dataset_verifies_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let built = build_dataset(&small(6, 9), dir.path(), 2).unwrap();
    let records = verify_dataset(dir.path()).unwrap();
    assert_eq!(records, built.records);
    let [train, val, test] = split_sizes(6, DatasetConfig::default().split);
    let count = |s| records.iter().filter(|r| r.split == s).count();
    assert_eq!(
        (count(Split::Train), count(Split::Val), count(Split::Test)),
        (train, val, test)
    );
    for r in &records {
        assert!(dir.path().join(&r.image).is_file());
        assert!(r.label_mpa > 0.0);
        assert!(
            (DatasetConfig::default().mu_range[0] * 0.5..0.5).contains(&r.mu),
            "{r:?}"
        );
    }

    let img = dir.path().join(&records[2].image);
    let mut bytes = fs::read(&img).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    fs::write(&img, bytes).unwrap();
    assert!(matches!(verify_dataset(dir.path()), Err(Error::Integrity(_))));
}

#[test]
fn manifest_lists_images_in_id_order() {
    let dir = tempfile::tempdir().unwrap();
    build_dataset(&small(5, 1), dir.path(), 1).unwrap();
    let recs = parse_manifest_csv(&fs::read_to_string(dir.path().join(MANIFEST_CSV)).unwrap()).unwrap();
    for (k, r) in recs.iter().enumerate() {
        assert_eq!(r.id, k);
        assert_eq!(r.image, format!("images/rve_{k:06}.png"));
    }
}

#[test]
fn zero_workers_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        build_dataset(&small(2, 0), dir.path(), 0),
        Err(Error::InvalidConfig { .. })
    ));
}
