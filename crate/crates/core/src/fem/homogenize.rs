use serde::{Deserialize, Serialize};

use super::model::{mesh_geometry_with, MeshOptions, COMPRESSION_STRAIN};
use super::solve::solve;
use crate::error::{Error, Result};
use crate::material::WallMaterial;
use crate::rve::RveGeometry;

/// Everything `rve solve` writes out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogenizationRecord {
    /// Homogenized compressive modulus (MPa).
    pub modulus: f64,
    /// Top-edge reaction (N).
    pub f_top: f64,
    pub h: f64,
    pub thickness: f64,
    pub relative_density: f64,
    pub strain: f64,
    pub n_nodes: usize,
    pub n_elements: usize,
    pub n_free_dofs: usize,
    pub fix_top_rotation: bool,
    /// Nodal `(ux, uy, rz)` triples; nodes `0..n_vertices` are the RVE vertices.
    pub displacements: Vec<[f64; 3]>,
}

/// `E = F_top / (ε·H·t)` for the RVE under 1 % compression.
pub fn homogenized_modulus(geom: &RveGeometry, material: &WallMaterial) -> Result<f64> {
    Ok(homogenize(geom, material, &MeshOptions::default())?.modulus)
}

pub fn homogenize(geom: &RveGeometry, material: &WallMaterial, options: &MeshOptions) -> Result<HomogenizationRecord> {
    if geom.top_vertices.is_empty() || geom.bottom_vertices.is_empty() {
        return Err(Error::Mechanism(
            "RVE has no wall reaching the top or bottom edge".into(),
        ));
    }
    let model = mesh_geometry_with(geom, material, options)?;
    let result = solve(&model)?;
    let modulus = result.f_top / (COMPRESSION_STRAIN * geom.h * geom.thickness);
    Ok(HomogenizationRecord {
        modulus,
        f_top: result.f_top,
        h: geom.h,
        thickness: geom.thickness,
        relative_density: geom.relative_density,
        strain: COMPRESSION_STRAIN,
        n_nodes: model.nodes.len(),
        n_elements: model.elements.len(),
        n_free_dofs: result.n_free_dofs,
        fix_top_rotation: options.fix_top_rotation,
        displacements: result
            .displacements
            .chunks_exact(3)
            .map(|c| [c[0], c[1], c[2]])
            .collect(),
    })
}
