//! Two-node shear-deformable (Timoshenko) frame element in the plane.

use nalgebra::{Matrix6, Point2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::WallMaterial;

/// Shear correction factor of a rectangular section.
pub const SHEAR_CORRECTION: f64 = 5.0 / 6.0;

/// Rectangular wall section: `depth` lies in the plane, `width` out of plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub depth: f64,
    pub width: f64,
}

impl Section {
    pub fn square(t: f64) -> Self {
        Section { depth: t, width: t }
    }

    pub fn area(&self) -> f64 {
        self.depth * self.width
    }

    /// Second moment about the out-of-plane axis.
    pub fn inertia(&self) -> f64 {
        self.width * self.depth.powi(3) / 12.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameElement {
    pub nodes: [usize; 2],
    pub section: Section,
    pub material: WallMaterial,
}

/// Stiffness in local axes (axial, transverse, rotation at each end) of an
/// element of length `len`. Exact for end-loaded Timoshenko beams.
pub fn local_stiffness(len: f64, section: &Section, material: &WallMaterial) -> Matrix6<f64> {
    let e = material.e0;
    let g = material.wall_shear_modulus();
    let a = section.area();
    let i = section.inertia();
    let phi = 12.0 * e * i / (SHEAR_CORRECTION * g * a * len * len);
    let axial = e * a / len;
    let b = e * i / ((1.0 + phi) * len.powi(3));
    let l = len;
    #[rustfmt::skip]
    let k = Matrix6::new(
         axial,  0.0,          0.0,                        -axial,  0.0,          0.0,
         0.0,    12.0 * b,     6.0 * l * b,                 0.0,   -12.0 * b,     6.0 * l * b,
         0.0,    6.0 * l * b,  (4.0 + phi) * l * l * b,     0.0,   -6.0 * l * b,  (2.0 - phi) * l * l * b,
        -axial,  0.0,          0.0,                         axial,  0.0,          0.0,
         0.0,   -12.0 * b,    -6.0 * l * b,                 0.0,    12.0 * b,    -6.0 * l * b,
         0.0,    6.0 * l * b,  (2.0 - phi) * l * l * b,     0.0,   -6.0 * l * b,  (4.0 + phi) * l * l * b,
    );
    k
}

/// Element stiffness in global axes, DOF order `(ux, uy, rz)` at each end.
/// The result is exactly symmetric.
pub fn element_stiffness(
    p0: Point2<f64>,
    p1: Point2<f64>,
    section: &Section,
    material: &WallMaterial,
) -> Result<Matrix6<f64>> {
    let d = p1 - p0;
    let len = d.norm();
    if !(len > 0.0) {
        return Err(Error::SingularElement(0));
    }
    if !(section.area() > 0.0) {
        return Err(Error::Domain(format!(
            "section area must be positive, got {}",
            section.area()
        )));
    }
    let (c, s) = (d.x / len, d.y / len);
    let mut t = Matrix6::zeros();
    for block in [0, 3] {
        t[(block, block)] = c;
        t[(block, block + 1)] = s;
        t[(block + 1, block)] = -s;
        t[(block + 1, block + 1)] = c;
        t[(block + 2, block + 2)] = 1.0;
    }
    let k = t.transpose() * local_stiffness(len, section, material) * t;
    Ok((k + k.transpose()) * 0.5)
}
