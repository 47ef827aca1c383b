use nalgebra::Point2;
use serde::{Deserialize, Serialize};

use super::element::{FrameElement, Section};
use crate::error::{Error, Result};
use crate::material::WallMaterial;
use crate::rve::RveGeometry;

pub const DOFS_PER_NODE: usize = 3;
/// Prescribed compressive strain of the top edge.
pub const COMPRESSION_STRAIN: f64 = 0.01;
/// Default element size as a fraction of `H`.
pub const DEFAULT_MESH_FRACTION: f64 = 0.01;
pub const MIN_ELEMENTS_PER_WALL: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dof {
    Ux = 0,
    Uy = 1,
    Rz = 2,
}

impl Dof {
    pub const ALL: [Dof; 3] = [Dof::Ux, Dof::Uy, Dof::Rz];

    pub fn index(self, node: usize) -> usize {
        DOFS_PER_NODE * node + self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dirichlet {
    pub node: usize,
    pub dof: Dof,
    pub value: f64,
}

/// Slave DOFs follow the master node's DOFs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tie {
    pub master: usize,
    pub slave: usize,
    pub dofs: Vec<Dof>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodalLoad {
    pub node: usize,
    pub dof: Dof,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameModel {
    pub nodes: Vec<Point2<f64>>,
    pub elements: Vec<FrameElement>,
    pub dirichlet: Vec<Dirichlet>,
    pub ties: Vec<Tie>,
    #[serde(default)]
    pub loads: Vec<NodalLoad>,
    /// Loaded edge; their vertical reactions sum to `F_top`.
    #[serde(default)]
    pub top_nodes: Vec<usize>,
    #[serde(default)]
    pub bottom_nodes: Vec<usize>,
}

impl FrameModel {
    pub fn n_dofs(&self) -> usize {
        DOFS_PER_NODE * self.nodes.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        if self.elements.is_empty() {
            return Err(Error::EmptyModel);
        }
        for (k, el) in self.elements.iter().enumerate() {
            let [a, b] = el.nodes;
            if a >= n || b >= n {
                return Err(Error::InvalidModel(format!("element {k} references a missing node")));
            }
            if a == b || (self.nodes[b] - self.nodes[a]).norm() == 0.0 {
                return Err(Error::SingularElement(k));
            }
        }
        let mut state = vec![0u8; self.n_dofs()]; // 1 = dirichlet, 2 = slave
        for d in &self.dirichlet {
            if d.node >= n {
                return Err(Error::InvalidModel(format!("constraint on missing node {}", d.node)));
            }
            state[d.dof.index(d.node)] |= 1;
        }
        for tie in &self.ties {
            if tie.master >= n || tie.slave >= n || tie.master == tie.slave {
                return Err(Error::InvalidModel(format!("bad tie {} -> {}", tie.master, tie.slave)));
            }
            for &dof in &tie.dofs {
                let s = dof.index(tie.slave);
                if state[s] & 2 != 0 {
                    return Err(Error::InvalidModel(format!(
                        "node {} is a slave in more than one tie",
                        tie.slave
                    )));
                }
                if state[s] & 1 != 0 || state[dof.index(tie.master)] & 1 != 0 {
                    return Err(Error::InvalidModel(format!(
                        "tie {} -> {} touches a Dirichlet-constrained {:?}",
                        tie.master, tie.slave, dof
                    )));
                }
                state[s] |= 2;
            }
        }
        for l in &self.loads {
            if l.node >= n {
                return Err(Error::InvalidModel(format!("load on missing node {}", l.node)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeshOptions {
    /// Target element length (mm); `None` means `H/100`.
    pub target_h: Option<f64>,
    /// Clamp the rotations of the loaded top nodes as well.
    pub fix_top_rotation: bool,
}

/// Meshes every wall with `max(2, ceil(len / target_h))` equal elements and
/// applies the compression setup with periodic side ties.
pub fn mesh_geometry(geom: &RveGeometry, material: &WallMaterial, target_h: f64) -> Result<FrameModel> {
    mesh_geometry_with(
        geom,
        material,
        &MeshOptions {
            target_h: Some(target_h),
            ..Default::default()
        },
    )
}

pub fn mesh_geometry_with(geom: &RveGeometry, material: &WallMaterial, options: &MeshOptions) -> Result<FrameModel> {
    material.validate()?;
    if geom.walls.is_empty() {
        return Err(Error::EmptyModel);
    }
    let target_h = options.target_h.unwrap_or(DEFAULT_MESH_FRACTION * geom.h);
    if !(target_h > 0.0 && target_h.is_finite()) {
        return Err(Error::config(
            "target_h",
            format!("element size must be positive, got {target_h}"),
        ));
    }
    let section = Section::square(geom.thickness);
    let mut nodes = geom.vertices.clone();
    let mut elements = Vec::new();
    for &[a, b] in &geom.walls {
        let (pa, pb) = (geom.vertices[a], geom.vertices[b]);
        let len = (pb - pa).norm();
        let count = ((len / target_h).ceil() as usize).max(MIN_ELEMENTS_PER_WALL);
        let mut prev = a;
        for k in 1..=count {
            let next = if k == count {
                b
            } else {
                nodes.push(pa + (pb - pa) * (k as f64 / count as f64));
                nodes.len() - 1
            };
            elements.push(FrameElement {
                nodes: [prev, next],
                section,
                material: *material,
            });
            prev = next;
        }
    }

    let mut dirichlet = Vec::new();
    for &v in &geom.bottom_vertices {
        for dof in Dof::ALL {
            dirichlet.push(Dirichlet {
                node: v,
                dof,
                value: 0.0,
            });
        }
    }
    let drop = -COMPRESSION_STRAIN * geom.h;
    for &v in &geom.top_vertices {
        dirichlet.push(Dirichlet {
            node: v,
            dof: Dof::Ux,
            value: 0.0,
        });
        dirichlet.push(Dirichlet {
            node: v,
            dof: Dof::Uy,
            value: drop,
        });
        if options.fix_top_rotation {
            dirichlet.push(Dirichlet {
                node: v,
                dof: Dof::Rz,
                value: 0.0,
            });
        }
    }
    let ties = geom
        .boundary_pairs
        .iter()
        .map(|&(l, r)| Tie {
            master: l,
            slave: r,
            dofs: vec![Dof::Ux, Dof::Uy],
        })
        .collect();

    let model = FrameModel {
        nodes,
        elements,
        dirichlet,
        ties,
        loads: Vec::new(),
        top_nodes: geom.top_vertices.clone(),
        bottom_nodes: geom.bottom_vertices.clone(),
    };
    model.validate()?;
    Ok(model)
}
