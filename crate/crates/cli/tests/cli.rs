use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn foam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foam")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn checksum(o: &Output) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("checksum ").map(str::to_owned))
        .unwrap_or_else(|| panic!("no checksum in {}", stdout(o)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn crisp_beam_prints_layered_deflection() {
    let o = foam(&["beam", "solve"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "1.344");
}

#[test]
fn unloaded_beam_does_not_deflect() {
    let o = foam(&["beam", "solve", "--P", "0"]);
    assert_eq!(stdout(&o).trim(), "0.000");
}

#[test]
fn invalid_beam_is_a_config_error() {
    let o = foam(&["beam", "solve", "--L=-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('L'), "{}", stderr(&o));
    let o = foam(&["beam", "solve", "--n-terms", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_csv_has_table_shape() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("both.csv");
    let o = foam(&[
        "beam",
        "sweep",
        "--layer",
        "both",
        "--alpha-step",
        "0.1",
        "--beta-step",
        "0.25",
        "-o",
        path(&csv),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["alpha", "0", "0.25", "0.5", "0.75", "1"]);
    assert_eq!(rows.len(), 12);
    assert!(rows[1..].iter().all(|r| r.len() == 6));
    assert_eq!(rows[11][1..], ["1.344"; 5]);
}

#[test]
fn error_band_from_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    fs::write(&report, r#"{"mean_relative_error": 0.0592, "split": "test"}"#).unwrap();
    let from_file = foam(&[
        "beam",
        "solve",
        "--alpha1",
        "0",
        "--beta1",
        "0",
        "--error-band-from",
        path(&report),
    ]);
    let inline = foam(&[
        "beam",
        "solve",
        "--alpha1",
        "0",
        "--beta1",
        "0",
        "--error-band",
        "0.0592",
    ]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&inline));
    assert_eq!(stdout(&inline).trim(), "1.412");

    fs::write(&report, r#"{"mean_relative_error": 2.0}"#).unwrap();
    assert_eq!(
        foam(&["beam", "solve", "--error-band-from", path(&report)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn rve_gen_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path());
    let o = foam(&[
        "rve", "gen", "--H", "30", "--cells", "109", "--mu", "0.0852", "--seed", "7", "--png", "64", "-o", out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let geom = dir.path().join("geom.txt");
    assert!(geom.is_file() && dir.path().join("rve.png").is_file());

    let o = foam(&["rve", "solve", path(&geom), "--E0", "61700", "--nu0", "0.3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let record: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let e = record["modulus"].as_f64().unwrap();
    assert!((900.0..1300.0).contains(&e), "{e}");

    let text = fs::read_to_string(&geom).unwrap();
    let parsed = foam_core::rve::parse_geometry(&text).unwrap();
    let direct = foam_core::fem::homogenized_modulus(&parsed, &foam_core::material::WallMaterial::aluminium()).unwrap();
    assert!((direct - e).abs() <= 1e-9 * e, "{direct} vs {e}");
}

#[test]
fn rve_gen_rejects_bad_density() {
    let dir = tempfile::tempdir().unwrap();
    let o = foam(&["rve", "gen", "--mu", "1.5", "-o", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mu"), "{}", stderr(&o));
}

#[test]
fn solver_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let geom = dir.path().join("flat.txt");
    // a single horizontal wall never reaches the loaded edges
    fs::write(
        &geom,
        "rve-geometry 1 H=10 t_cell=0.1 mu=0.01 n_cells=1\nv 0 5\nv 10 5\nw 0 1\np 0 1\n",
    )
    .unwrap();
    assert_eq!(foam(&["rve", "solve", path(&geom)]).status.code(), Some(3));
}

#[test]
fn unreadable_inputs_exit_2() {
    assert_eq!(foam(&["rve", "solve", "/nonexistent/geom.txt"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[beam]\nloud = 1\n").unwrap();
    let o = foam(&["--config", path(&cfg), "beam", "solve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("loud"), "{}", stderr(&o));
}

#[test]
fn config_file_feeds_the_beam() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[beam]\nload = 200.0\n").unwrap();
    let o = foam(&["--config", path(&cfg), "beam", "solve"]);
    assert_eq!(stdout(&o).trim(), "2.687");
    // flags win over the file
    let o = foam(&["--config", path(&cfg), "beam", "solve", "--P", "100"]);
    assert_eq!(stdout(&o).trim(), "1.344");
}

#[test]
fn dataset_build_is_deterministic_and_verifies() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let run = |d: &Path, workers: &str| {
        let o = foam(&[
            "dataset",
            "build",
            "--count",
            "20",
            "--seed",
            "1",
            "--image-px",
            "64",
            "--workers",
            workers,
            "-o",
            path(d),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        o
    };
    let a = run(dirs[0].path(), "1");
    let b = run(dirs[1].path(), "1");
    let c = run(dirs[2].path(), "8");
    assert_eq!(checksum(&a), checksum(&b));
    assert_eq!(checksum(&a), checksum(&c));
    assert!(
        stdout(&a).contains("20 samples: train 14 / val 4 / test 2"),
        "{}",
        stdout(&a)
    );

    let o = foam(&["dataset", "verify", path(dirs[2].path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    fs::write(dirs[2].path().join("images/rve_000003.png"), b"not a png").unwrap();
    assert_eq!(
        foam(&["dataset", "verify", path(dirs[2].path())]).status.code(),
        Some(3)
    );
}
