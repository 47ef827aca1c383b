//! Ritz minimisation of the beam's total potential energy.
//!
//! Fields are expanded in shifted Legendre polynomials `Q_j(s) = P_j(2s − 1)`
//! multiplied by factors that enforce the essential conditions, which keeps
//! the Gram-type system well conditioned at the default term count.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_legendre, legendre};
use super::{section_stiffnesses, BeamScenario, FuzzyParams, SectionStiffness, MM_PER_M};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RitzBasis {
    /// Half span `x ∈ [0, L/2]` with mirror symmetry at mid-span:
    /// `u = η(1−η)Q_j`, `w = ηQ_j`, `φ = (1−η)Q_j`, `η = 2x/L`.
    /// The point load sits at the end of the domain, so the piecewise-polynomial
    /// exact solution lies in the trial space once `n ≥ 4`.
    #[default]
    HalfSpan,
    /// Whole span, `u = w = ξ(1−ξ)Q_j`, `φ = Q_j`, `ξ = x/L`. Converges slowly
    /// because `w′` has a kink under the load.
    FullSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RitzSolution {
    /// Mid-span deflection (mm), positive along the load.
    pub deflection: f64,
    pub stiffness: SectionStiffness,
    /// Axial coefficients; zero for a symmetric layup.
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

/// Shape values and derivatives (w.r.t. the local coordinate `s`) of one field term.
#[derive(Clone, Copy)]
struct Shape {
    v: f64,
    dv: f64,
}

fn shifted(j: usize, s: f64) -> Shape {
    let (p, dp) = legendre(j, 2.0 * s - 1.0);
    Shape { v: p, dv: 2.0 * dp }
}

impl RitzBasis {
    /// `(u, w, φ)` shapes of term `j` at local coordinate `s ∈ [0, 1]`.
    fn shapes(self, j: usize, s: f64) -> [Shape; 3] {
        let q = shifted(j, s);
        let bubble = Shape {
            v: s * (1.0 - s) * q.v,
            dv: (1.0 - 2.0 * s) * q.v + s * (1.0 - s) * q.dv,
        };
        match self {
            RitzBasis::FullSpan => [bubble, bubble, q],
            RitzBasis::HalfSpan => [
                bubble,
                Shape {
                    v: s * q.v,
                    dv: q.v + s * q.dv,
                },
                Shape {
                    v: (1.0 - s) * q.v,
                    dv: -q.v + (1.0 - s) * q.dv,
                },
            ],
        }
    }

    /// `(domain length, load point s, share of the load carried)`.
    fn layout(self, span: f64) -> (f64, f64, f64) {
        match self {
            RitzBasis::FullSpan => (span, 0.5, 1.0),
            RitzBasis::HalfSpan => (0.5 * span, 1.0, 0.5),
        }
    }
}

pub fn ritz_solve(scenario: &BeamScenario, params: &FuzzyParams) -> Result<RitzSolution> {
    let stiffness = section_stiffnesses(scenario, params)?;
    let SectionStiffness { a11, b11, d11, s55 } = stiffness;
    let n = scenario.n_terms;
    let basis = scenario.basis;
    let (len, s_load, share) = basis.layout(scenario.span);

    let (xs, ws) = gauss_legendre(n + 4);
    let size = 3 * n;
    let mut k = DMatrix::<f64>::zeros(size, size);
    let mut eps = DVector::<f64>::zeros(size);
    let mut kap = DVector::<f64>::zeros(size);
    let mut gam = DVector::<f64>::zeros(size);
    for (&x, &w) in xs.iter().zip(&ws) {
        let s = 0.5 * (x + 1.0);
        let weight = 0.5 * w * len;
        eps.fill(0.0);
        kap.fill(0.0);
        gam.fill(0.0);
        for j in 0..n {
            let [u, wv, phi] = basis.shapes(j, s);
            eps[j] = u.dv / len;
            gam[n + j] = wv.dv / len;
            kap[2 * n + j] = phi.dv / len;
            gam[2 * n + j] = phi.v;
        }
        k.ger(weight * a11, &eps, &eps, 1.0);
        k.ger(weight * b11, &eps, &kap, 1.0);
        k.ger(weight * b11, &kap, &eps, 1.0);
        k.ger(weight * d11, &kap, &kap, 1.0);
        k.ger(weight * s55, &gam, &gam, 1.0);
    }
    let mut f = DVector::<f64>::zeros(size);
    let w_load: Vec<f64> = (0..n).map(|j| basis.shapes(j, s_load)[1].v).collect();
    for j in 0..n {
        f[n + j] = share * scenario.load * w_load[j];
    }

    let k = (&k + k.transpose()) * 0.5;
    let chol = k
        .cholesky()
        .ok_or_else(|| Error::Conditioning(format!("Ritz matrix with {n} terms is not positive definite")))?;
    let coef = chol.solve(&f);
    if coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::Conditioning("Ritz coefficients are not finite".into()));
    }
    let deflection = (0..n).map(|j| coef[n + j] * w_load[j]).sum::<f64>() * MM_PER_M;
    Ok(RitzSolution {
        deflection,
        stiffness,
        a: coef.rows(0, n).iter().copied().collect(),
        c: coef.rows(n, n).iter().copied().collect(),
        d: coef.rows(2 * n, n).iter().copied().collect(),
    })
}

/// Mid-span deflection (mm).
pub fn ritz_deflection(scenario: &BeamScenario, params: &FuzzyParams) -> Result<f64> {
    Ok(ritz_solve(scenario, params)?.deflection)
}
