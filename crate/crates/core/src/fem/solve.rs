//! Linear static solve with master–slave elimination and sparse Cholesky.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use nalgebra::Matrix6;
use serde::{Deserialize, Serialize};

use super::element::element_stiffness;
use super::model::{Dof, FrameModel, DOFS_PER_NODE};
use crate::error::{Error, Result};
use crate::rve::topology::DisjointSet;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Free(usize),
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Nodal `(ux, uy, rz)` triples, flattened.
    pub displacements: Vec<f64>,
    /// `K u − f` at every DOF; non-zero only at supports (and tie pairs).
    pub reactions: Vec<f64>,
    /// Compressive force carried by the top edge, `−Σ R_uy`.
    pub f_top: f64,
    pub n_free_dofs: usize,
}

impl SolveResult {
    pub fn displacement(&self, node: usize, dof: Dof) -> f64 {
        self.displacements[dof.index(node)]
    }
}

/// Maps every DOF to its free equation number or prescribed value; slave DOFs
/// resolve to whatever their master chain ends in.
fn dof_status(model: &FrameModel) -> Result<(Vec<Status>, usize)> {
    let n = model.n_dofs();
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    for d in &model.dirichlet {
        let k = d.dof.index(d.node);
        if let Some(prev) = fixed[k] {
            if prev != d.value {
                return Err(Error::InvalidModel(format!(
                    "node {} {:?} prescribed twice ({prev} and {})",
                    d.node, d.dof, d.value
                )));
            }
        }
        fixed[k] = Some(d.value);
    }
    let mut master: Vec<Option<usize>> = vec![None; n];
    for tie in &model.ties {
        for &dof in &tie.dofs {
            master[dof.index(tie.slave)] = Some(dof.index(tie.master));
        }
    }
    let root = |mut k: usize| -> Result<usize> {
        for _ in 0..=n {
            match master[k] {
                Some(m) => k = m,
                None => return Ok(k),
            }
        }
        Err(Error::InvalidModel("cyclic periodic ties".into()))
    };
    let mut status = vec![Status::Fixed(0.0); n];
    let mut index = vec![usize::MAX; n];
    let mut n_free = 0;
    for (k, s) in status.iter_mut().enumerate() {
        let r = root(k)?;
        *s = match fixed[r] {
            Some(v) => Status::Fixed(v),
            None => {
                if index[r] == usize::MAX {
                    index[r] = n_free;
                    n_free += 1;
                }
                Status::Free(index[r])
            }
        };
    }
    Ok((status, n_free))
}

fn element_dofs(nodes: [usize; 2]) -> [usize; 6] {
    let [a, b] = nodes;
    let (a, b) = (DOFS_PER_NODE * a, DOFS_PER_NODE * b);
    [a, a + 1, a + 2, b, b + 1, b + 2]
}

fn element_matrices(model: &FrameModel) -> Result<Vec<Matrix6<f64>>> {
    model
        .elements
        .iter()
        .enumerate()
        .map(|(k, el)| {
            let [a, b] = el.nodes;
            element_stiffness(model.nodes[a], model.nodes[b], &el.section, &el.material).map_err(|e| match e {
                Error::SingularElement(_) => Error::SingularElement(k),
                e => e,
            })
        })
        .collect()
}

/// Every group of nodes joined by elements or ties must touch a prescribed DOF,
/// otherwise it floats as a rigid body.
fn check_supported(model: &FrameModel) -> Result<()> {
    let mut sets = DisjointSet::new(model.nodes.len());
    for el in &model.elements {
        sets.union(el.nodes[0], el.nodes[1]);
    }
    for tie in &model.ties {
        sets.union(tie.master, tie.slave);
    }
    let mut supported = vec![false; model.nodes.len()];
    for d in &model.dirichlet {
        let r = sets.find(d.node);
        supported[r] = true;
    }
    let mut used = vec![false; model.nodes.len()];
    for el in &model.elements {
        used[el.nodes[0]] = true;
        used[el.nodes[1]] = true;
    }
    for node in 0..model.nodes.len() {
        if used[node] && !supported[sets.find(node)] {
            return Err(Error::Mechanism(format!(
                "node {node} belongs to an unsupported part of the frame"
            )));
        }
    }
    Ok(())
}

/// Unconstrained global stiffness as `(row, col, value)` entries over all DOFs,
/// duplicates summed.
pub fn assemble_stiffness(model: &FrameModel) -> Result<Vec<(usize, usize, f64)>> {
    model.validate()?;
    let mats = element_matrices(model)?;
    let mut map = std::collections::BTreeMap::new();
    for (el, ke) in model.elements.iter().zip(&mats) {
        let g = element_dofs(el.nodes);
        for i in 0..6 {
            for j in 0..6 {
                *map.entry((g[i], g[j])).or_insert(0.0) += ke[(i, j)];
            }
        }
    }
    Ok(map.into_iter().map(|((i, j), v)| (i, j, v)).collect())
}

/// Solves `K u = f` under the model's Dirichlet conditions and ties.
pub fn solve(model: &FrameModel) -> Result<SolveResult> {
    model.validate()?;
    check_supported(model)?;
    let (status, n_free) = dof_status(model)?;
    let mats = element_matrices(model)?;
    let n = model.n_dofs();

    let mut rhs = vec![0.0; n_free];
    for load in &model.loads {
        if let Status::Free(j) = status[load.dof.index(load.node)] {
            rhs[j] += load.value;
        }
    }
    let mut triplets = Vec::with_capacity(model.elements.len() * 36);
    for (el, ke) in model.elements.iter().zip(&mats) {
        let g = element_dofs(el.nodes);
        for i in 0..6 {
            let Status::Free(r) = status[g[i]] else { continue };
            for j in 0..6 {
                match status[g[j]] {
                    Status::Free(c) if r >= c => triplets.push(Triplet::new(r, c, ke[(i, j)])),
                    Status::Free(_) => {}
                    Status::Fixed(v) => rhs[r] -= ke[(i, j)] * v,
                }
            }
        }
    }

    let free = if n_free == 0 {
        Vec::new()
    } else {
        let k = SparseColMat::<usize, f64>::try_new_from_triplets(n_free, n_free, &triplets)
            .map_err(|e| Error::InvalidModel(format!("sparse assembly failed: {e:?}")))?;
        let llt = k
            .sp_cholesky(Side::Lower)
            .map_err(|e| Error::Mechanism(format!("reduced stiffness is not positive definite: {e}")))?;
        let mut x = Mat::from_fn(n_free, 1, |i, _| rhs[i]);
        llt.solve_in_place(&mut x);
        let x: Vec<f64> = (0..n_free).map(|i| x[(i, 0)]).collect();
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Mechanism("solution is not finite".into()));
        }
        x
    };

    let displacements: Vec<f64> = status
        .iter()
        .map(|s| match *s {
            Status::Free(j) => free[j],
            Status::Fixed(v) => v,
        })
        .collect();
    let mut reactions = vec![0.0; n];
    for (el, ke) in model.elements.iter().zip(&mats) {
        let g = element_dofs(el.nodes);
        for i in 0..6 {
            reactions[g[i]] += (0..6).map(|j| ke[(i, j)] * displacements[g[j]]).sum::<f64>();
        }
    }
    for load in &model.loads {
        reactions[load.dof.index(load.node)] -= load.value;
    }
    let f_top = -model
        .top_nodes
        .iter()
        .map(|&v| reactions[Dof::Uy.index(v)])
        .sum::<f64>();
    Ok(SolveResult {
        displacements,
        reactions,
        f_top,
        n_free_dofs: n_free,
    })
}
