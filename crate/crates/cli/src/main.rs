//! `foam`: RVE generation and homogenization, layered-beam bending and
//! dataset builds from one binary.
//!
//! Exit status: 0 success, 2 invalid input or config, 3 generation/solver
//! failure, 4 dataset samples failed after retries.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use foam_core::beam::{fuzzy_sweep, ritz_solve, FuzzyParams, RitzBasis, SweepLayer};
use foam_core::config::RunConfig;
use foam_core::dataset::{build_dataset, verify_dataset, Split};
use foam_core::fem::homogenize;
use foam_core::fuzzy::parse_error_band;
use foam_core::rve::{generate_rve, parse_geometry, rasterize, write_geometry, write_png, Morphology};
use foam_core::Error;

#[derive(Parser)]
#[command(
    name = "foam",
    version,
    about = "Closed-cell foam RVEs, homogenization and fuzzy beam bending"
)]
struct Cli {
    /// TOML file with [rve], [beam], [dataset] and [material] sections; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or homogenize RVEs.
    #[command(subcommand)]
    Rve(RveCommand),
    /// Solve the three-layer beam.
    #[command(subcommand)]
    Beam(BeamCommand),
    /// Build or verify an image + label dataset.
    #[command(subcommand)]
    Dataset(DatasetCommand),
}

#[derive(Subcommand)]
enum RveCommand {
    /// Write `geom.txt` (and optionally `rve.png`) into the output directory.
    Gen(RveGen),
    /// Homogenize a geometry file under 1 % compression; prints E in MPa.
    Solve(RveSolve),
}

#[derive(Args)]
struct MaterialArgs {
    /// Wall Young's modulus (MPa).
    #[arg(long = "E0")]
    e0: Option<f64>,
    /// Wall Poisson's ratio.
    #[arg(long = "nu0")]
    nu0: Option<f64>,
}

#[derive(Args)]
struct RveGen {
    /// RVE side (mm).
    #[arg(long = "H")]
    h: Option<f64>,
    /// Number of cells.
    #[arg(long, conflicts_with = "phi")]
    cells: Option<usize>,
    /// Mean cell size (mm); the cell count becomes round((H/phi)²).
    #[arg(long)]
    phi: Option<f64>,
    /// Target relative density; sets the wall thickness.
    #[arg(long, conflicts_with = "t")]
    mu: Option<f64>,
    /// Fixed wall thickness (mm).
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// random-convex, concave-perturbed, regular-hex or regular-square.
    #[arg(long)]
    morphology: Option<String>,
    /// Also write a PNG of this size (px).
    #[arg(long)]
    png: Option<u32>,
    #[arg(short, long, default_value = ".")]
    output: PathBuf,
}

#[derive(Args)]
struct RveSolve {
    geometry: PathBuf,
    #[command(flatten)]
    material: MaterialArgs,
    /// Frame element length (mm); defaults to H/100.
    #[arg(long)]
    element_size: Option<f64>,
    /// Also clamp the rotation of the loaded top vertices.
    #[arg(long)]
    fix_top_rotation: bool,
    /// Record file (JSON); printed to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BeamArgs {
    /// Mid-span load (N).
    #[arg(long = "P")]
    load: Option<f64>,
    /// Span (m).
    #[arg(long = "L")]
    span: Option<f64>,
    /// Ritz terms per field.
    #[arg(long)]
    n_terms: Option<usize>,
    /// half-span or full-span.
    #[arg(long)]
    basis: Option<String>,
    /// Relative error band r of the layer moduli.
    #[arg(long, conflicts_with = "error_band_from")]
    error_band: Option<f64>,
    /// Regressor error report (JSON with `mean_relative_error`).
    #[arg(long)]
    error_band_from: Option<PathBuf>,
    #[command(flatten)]
    material: MaterialArgs,
}

#[derive(Subcommand)]
enum BeamCommand {
    /// Print the mid-span deflection (mm).
    Solve {
        #[command(flatten)]
        beam: BeamArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha1: f64,
        #[arg(long, default_value_t = 1.0)]
        beta1: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha2: f64,
        #[arg(long, default_value_t = 1.0)]
        beta2: f64,
    },
    /// Sweep the fuzzy parameters of one or both layers into a CSV table.
    Sweep {
        #[command(flatten)]
        beam: BeamArgs,
        /// high, low or both.
        #[arg(long, default_value = "both")]
        layer: String,
        #[arg(long, default_value_t = 0.1)]
        alpha_step: f64,
        #[arg(long, default_value_t = 0.25)]
        beta_step: f64,
        /// CSV output; printed to stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Full grid with scenario and per-cell moduli.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DatasetCommand {
    Build {
        #[arg(long)]
        count: Option<usize>,
        /// Master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default 1); outputs do not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        image_px: Option<u32>,
        #[command(flatten)]
        material: MaterialArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the manifest, images and checksum of a built dataset.
    Verify { dir: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig { .. } | Error::Parse { .. } | Error::Domain(_) | Error::Io(_) | Error::Json(_) => 2,
        Error::PartialDataset { .. } => 4,
        _ => 3,
    }
}

fn apply_material(cfg: &mut RunConfig, m: &MaterialArgs) {
    cfg.material.e0 = m.e0.or(cfg.material.e0);
    cfg.material.nu0 = m.nu0.or(cfg.material.nu0);
}

fn parse_flag<T: std::str::FromStr<Err = Error>>(v: &Option<String>) -> Result<Option<T>, Error> {
    v.as_deref().map(str::parse).transpose()
}

fn parse_basis(v: &Option<String>) -> Result<Option<RitzBasis>, Error> {
    match v.as_deref() {
        None => Ok(None),
        Some("half-span") => Ok(Some(RitzBasis::HalfSpan)),
        Some("full-span") => Ok(Some(RitzBasis::FullSpan)),
        Some(other) => Err(Error::InvalidConfig {
            field: "basis".into(),
            message: format!("expected half-span or full-span, got `{other}`"),
        }),
    }
}

fn apply_beam(cfg: &mut RunConfig, b: &BeamArgs) -> Result<(), Error> {
    let s = &mut cfg.beam;
    s.load = b.load.or(s.load);
    s.span = b.span.or(s.span);
    s.n_terms = b.n_terms.or(s.n_terms);
    s.basis = parse_basis(&b.basis)?.or(s.basis);
    s.error_band = b.error_band.or(s.error_band);
    if let Some(path) = &b.error_band_from {
        s.error_band = Some(parse_error_band(&fs::read_to_string(path)?)?);
    }
    apply_material(cfg, &b.material);
    Ok(())
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Rve(RveCommand::Gen(a)) => {
            let r = &mut cfg.rve;
            r.h = a.h.or(r.h);
            if a.cells.is_some() || a.phi.is_some() {
                (r.cells, r.phi) = (a.cells, a.phi);
            }
            if a.mu.is_some() || a.t.is_some() {
                (r.mu, r.t) = (a.mu, a.t);
            }
            r.seed = a.seed.or(r.seed);
            r.morphology = parse_flag::<Morphology>(&a.morphology)?.or(r.morphology);
            let config = cfg.rve_config()?;
            let geom = generate_rve(&config)?;
            fs::create_dir_all(&a.output)?;
            let path = a.output.join("geom.txt");
            fs::write(&path, write_geometry(&geom))?;
            if let Some(px) = a.png.or(cfg.rve.image_px) {
                write_png(&rasterize(&geom, px)?, &a.output.join("rve.png"))?;
            }
            println!(
                "{}: {} vertices, {} walls, L = {:.3} mm, t = {:.5} mm, mu = {:.5}, seed {}",
                path.display(),
                geom.vertices.len(),
                geom.walls.len(),
                geom.wall_length,
                geom.thickness,
                geom.relative_density,
                config.rng_seed
            );
        }
        Command::Rve(RveCommand::Solve(a)) => {
            apply_material(&mut cfg, &a.material);
            cfg.rve.element_size = a.element_size.or(cfg.rve.element_size);
            if a.fix_top_rotation {
                cfg.rve.fix_top_rotation = Some(true);
            }
            let geom = parse_geometry(&fs::read_to_string(&a.geometry)?)?;
            let record = homogenize(&geom, &cfg.material()?, &cfg.mesh_options())?;
            let json = serde_json::to_string_pretty(&record)?;
            match &a.output {
                Some(p) => {
                    fs::write(p, json + "\n")?;
                    println!("E = {:.3} MPa", record.modulus);
                }
                None => println!("{json}"),
            }
        }
        Command::Beam(BeamCommand::Solve {
            beam,
            alpha1,
            beta1,
            alpha2,
            beta2,
        }) => {
            apply_beam(&mut cfg, &beam)?;
            let scenario = cfg.beam_scenario()?;
            let sol = ritz_solve(&scenario, &FuzzyParams::new(alpha1, beta1, alpha2, beta2))?;
            println!("{:.3}", sol.deflection);
        }
        Command::Beam(BeamCommand::Sweep {
            beam,
            layer,
            alpha_step,
            beta_step,
            output,
            json,
        }) => {
            apply_beam(&mut cfg, &beam)?;
            let scenario = cfg.beam_scenario()?;
            let layer: SweepLayer = layer.parse()?;
            let grid = fuzzy_sweep(&scenario, layer, alpha_step, beta_step)?;
            write_or_print(output.as_deref(), &grid.to_csv())?;
            if let Some(p) = json {
                fs::write(p, serde_json::to_string_pretty(&grid)? + "\n")?;
            }
            if output.is_some() {
                println!("deflection range {:.3} .. {:.3} mm", grid.min(), grid.max());
            }
        }
        Command::Dataset(DatasetCommand::Build {
            count,
            seed,
            workers,
            image_px,
            material,
            output,
        }) => {
            apply_material(&mut cfg, &material);
            let d = &mut cfg.dataset;
            d.count = count.or(d.count);
            d.seed = seed.or(d.seed);
            d.image_px = image_px.or(d.image_px);
            let workers = workers.or(cfg.dataset.workers).unwrap_or(1);
            let config = cfg.dataset_config()?;
            let manifest = build_dataset(&config, &output, workers)?;
            let count = |s: Split| manifest.records.iter().filter(|r| r.split == s).count();
            let env = manifest.sidecar.envelope;
            println!(
                "{} samples: train {} / val {} / test {}",
                manifest.records.len(),
                count(Split::Train),
                count(Split::Val),
                count(Split::Test)
            );
            println!("labels {:.1} .. {:.1} MPa (mean {:.1})", env.min, env.max, env.mean);
            println!("checksum {}", manifest.sidecar.checksum);
        }
        Command::Dataset(DatasetCommand::Verify { dir }) => {
            let records = verify_dataset(&dir)?;
            println!("{} samples ok", records.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::PartialDataset { failed } = &e {
                eprintln!("failed sample ids: {failed:?}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
