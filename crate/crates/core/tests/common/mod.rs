//! Oracles and reference data shared by the integration tests.
#![allow(dead_code)]

use foam_core::fem::{
    solve, Dirichlet, Dof, FrameElement, FrameModel, NodalLoad, Section, SolveResult, SHEAR_CORRECTION,
};
use foam_core::material::WallMaterial;
use foam_core::rve::{generate_rve, RveConfig, RveGeometry};
use nalgebra::Point2;

pub fn aluminium() -> WallMaterial {
    WallMaterial::new(61_700.0, 0.3, 2700.0).unwrap()
}

/// The 109-cell, 8.52 % validation RVE.
pub fn validation_rve(seed: u64) -> RveGeometry {
    generate_rve(&RveConfig::new(30.0, 109, 0.0852, seed)).unwrap()
}

/// Straight frame from the origin to `end`, node 0 clamped.
pub fn straight_bar(n_el: usize, end: Point2<f64>, section: Section, material: WallMaterial) -> FrameModel {
    let nodes = (0..=n_el)
        .map(|k| Point2::origin() + end.coords * (k as f64 / n_el as f64))
        .collect();
    FrameModel {
        nodes,
        elements: (0..n_el)
            .map(|k| FrameElement {
                nodes: [k, k + 1],
                section,
                material,
            })
            .collect(),
        dirichlet: Dof::ALL
            .iter()
            .map(|&dof| Dirichlet {
                node: 0,
                dof,
                value: 0.0,
            })
            .collect(),
        ties: Vec::new(),
        loads: Vec::new(),
        top_nodes: Vec::new(),
        bottom_nodes: vec![0],
    }
}

/// `(computed, analytic)` tip deflection of an 8-element cantilever under a tip load.
pub fn cantilever_tip() -> (f64, f64) {
    let (len, p) = (12.0, 0.05);
    let s = Section { depth: 0.3, width: 0.3 };
    let mat = aluminium();
    let mut m = straight_bar(8, Point2::new(len, 0.0), s, mat);
    m.loads.push(NodalLoad {
        node: 8,
        dof: Dof::Uy,
        value: p,
    });
    let r = solve(&m).unwrap();
    let exact = p * len.powi(3) / (3.0 * mat.e0 * s.inertia())
        + p * len / (SHEAR_CORRECTION * mat.wall_shear_modulus() * s.area());
    (r.displacement(8, Dof::Uy), exact)
}

/// `(computed, analytic)` end reaction of a bar clamped at both ends with a
/// prescribed axial end displacement.
pub fn axial_reaction() -> (f64, f64) {
    let (len, d) = (7.5, 0.003);
    let s = Section::square(0.1142);
    let mat = aluminium();
    let mut m = straight_bar(6, Point2::new(len, 0.0), s, mat);
    m.dirichlet.push(Dirichlet {
        node: 6,
        dof: Dof::Ux,
        value: d,
    });
    m.dirichlet.push(Dirichlet {
        node: 6,
        dof: Dof::Uy,
        value: 0.0,
    });
    m.dirichlet.push(Dirichlet {
        node: 6,
        dof: Dof::Rz,
        value: 0.0,
    });
    let r = solve(&m).unwrap();
    (r.reactions[Dof::Ux.index(6)], mat.e0 * s.area() * d / len)
}

/// `|Σ vertical reactions| / |F_top|`.
pub fn vertical_imbalance(r: &SolveResult) -> f64 {
    let n = r.reactions.len() / 3;
    let sum: f64 = (0..n).map(|k| r.reactions[Dof::Uy.index(k)]).sum();
    sum.abs() / r.f_top.abs()
}

/// Mid-span deflections (mm) printed for the fuzzy sweeps, rows α = 0, 0.1, …, 1
/// and columns β = 0, 0.25, 0.5, 0.75, 1. Only the α = 0.5 row has a β = 0.5 entry.
pub const HIGH_LAYER_TABLE: [[f64; 4]; 11] = [
    [1.412, 1.378, 1.313, 1.283],
    [1.405, 1.374, 1.316, 1.288],
    [1.398, 1.371, 1.319, 1.294],
    [1.391, 1.367, 1.322, 1.300],
    [1.384, 1.364, 1.325, 1.307],
    [1.378, 1.361, 1.328, 1.313],
    [1.371, 1.357, 1.332, 1.319],
    [1.364, 1.354, 1.335, 1.325],
    [1.357, 1.351, 1.338, 1.332],
    [1.351, 1.348, 1.341, 1.338],
    [1.344, 1.344, 1.344, 1.344],
];

pub const LOW_LAYER_TABLE: [[f64; 4]; 11] = [
    [1.358, 1.351, 1.337, 1.331],
    [1.357, 1.351, 1.338, 1.332],
    [1.356, 1.350, 1.339, 1.333],
    [1.354, 1.349, 1.339, 1.335],
    [1.353, 1.349, 1.340, 1.336],
    [1.351, 1.348, 1.341, 1.337],
    [1.350, 1.347, 1.342, 1.339],
    [1.349, 1.346, 1.342, 1.340],
    [1.347, 1.346, 1.343, 1.342],
    [1.346, 1.345, 1.344, 1.343],
    [1.344, 1.344, 1.344, 1.344],
];

pub const BOTH_LAYERS_TABLE: [[f64; 4]; 11] = [
    [1.428, 1.385, 1.306, 1.270],
    [1.419, 1.381, 1.310, 1.277],
    [1.410, 1.377, 1.314, 1.284],
    [1.402, 1.372, 1.317, 1.291],
    [1.393, 1.368, 1.321, 1.299],
    [1.385, 1.364, 1.325, 1.306],
    [1.377, 1.360, 1.329, 1.314],
    [1.368, 1.356, 1.333, 1.321],
    [1.360, 1.352, 1.337, 1.329],
    [1.352, 1.348, 1.340, 1.337],
    [1.344, 1.344, 1.344, 1.344],
];

/// The printed centre cell of every table.
pub const CENTRE_CELL: f64 = 1.344;
/// Grid columns of the four β values printed for every row.
pub const PRINTED_BETA_COLUMNS: [usize; 4] = [0, 1, 3, 4];
