mod common;

use approx::assert_relative_eq;
use common::*;
use foam_core::fem::{homogenize, mesh_geometry_with, solve, Dof, MeshOptions};
use foam_core::material::WallMaterial;

#[test]
fn cantilever_matches_timoshenko() {
    let (fe, exact) = cantilever_tip();
    assert_relative_eq!(fe, exact, max_relative = 1e-3);
}

#[test]
fn axial_reaction_exact() {
    let (fe, exact) = axial_reaction();
    assert_relative_eq!(fe, exact, max_relative = 1e-12);
}

#[test]
fn rve_solves_balance_and_respect_ties() {
    let mat = aluminium();
    for seed in [3, 17, 29] {
        let geom = validation_rve(seed);
        let model = mesh_geometry_with(&geom, &mat, &MeshOptions::default()).unwrap();
        let r = solve(&model).unwrap();
        assert!(r.f_top > 0.0);
        assert!(vertical_imbalance(&r) < 1e-8, "seed {seed}: {}", vertical_imbalance(&r));
        let scale = r.displacements.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for tie in &model.ties {
            for &dof in &tie.dofs {
                let (m, s) = (r.displacement(tie.master, dof), r.displacement(tie.slave, dof));
                assert!((m - s).abs() <= 1e-10 * scale, "seed {seed}: tie {tie:?}");
            }
        }
        // top edge moved rigidly down, bottom clamped
        for &n in &model.top_nodes {
            assert_relative_eq!(r.displacement(n, Dof::Uy), -0.01 * geom.h, max_relative = 1e-12);
        }
        for &n in &model.bottom_nodes {
            assert_eq!(r.displacement(n, Dof::Uy), 0.0);
        }
    }
}

#[test]
fn modulus_is_linear_in_wall_modulus() {
    let geom = validation_rve(5);
    let base = aluminium();
    let doubled = WallMaterial::new(2.0 * base.e0, base.nu0, base.rho0).unwrap();
    let opts = MeshOptions::default();
    let a = homogenize(&geom, &base, &opts).unwrap();
    let b = homogenize(&geom, &doubled, &opts).unwrap();
    assert_relative_eq!(b.f_top, 2.0 * a.f_top, max_relative = 1e-9);
    assert_relative_eq!(b.modulus, 2.0 * a.modulus, max_relative = 1e-9);
}

#[test]
fn mesh_refinement_changes_modulus_little() {
    let mat = aluminium();
    for seed in [1, 2, 3] {
        let geom = validation_rve(seed);
        let coarse = homogenize(&geom, &mat, &MeshOptions::default()).unwrap();
        let fine = homogenize(
            &geom,
            &mat,
            &MeshOptions {
                target_h: Some(0.005 * geom.h),
                ..Default::default()
            },
        )
        .unwrap();
        let change = (fine.modulus - coarse.modulus).abs() / coarse.modulus;
        assert!(
            change < 5e-3,
            "seed {seed}: {:.1} vs {:.1} MPa",
            coarse.modulus,
            fine.modulus
        );
        assert!(fine.n_elements > coarse.n_elements);
    }
}

#[test]
fn fixing_top_rotations_stiffens() {
    let mat = aluminium();
    let geom = validation_rve(11);
    let free = homogenize(&geom, &mat, &MeshOptions::default()).unwrap();
    let fixed = homogenize(
        &geom,
        &mat,
        &MeshOptions {
            fix_top_rotation: true,
            ..Default::default()
        },
    )
    .unwrap();
    let delta = (fixed.modulus - free.modulus) / free.modulus;
    println!(
        "top rotations free {:.1} MPa, fixed {:.1} MPa ({:+.2} %)",
        free.modulus,
        fixed.modulus,
        100.0 * delta
    );
    assert!(fixed.modulus >= free.modulus * (1.0 - 1e-12));
}
