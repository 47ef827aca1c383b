use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ritz::ritz_deflection;
use super::{BeamScenario, FuzzyParams};
use crate::error::{Error, Result};

/// Which layer's modulus is uncertain; the other stays crisp. `Both` moves the
/// face and core parameters together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepLayer {
    High,
    Low,
    Both,
}

impl SweepLayer {
    pub fn params(self, alpha: f64, beta: f64) -> FuzzyParams {
        match self {
            SweepLayer::High => FuzzyParams::new(alpha, beta, 1.0, 1.0),
            SweepLayer::Low => FuzzyParams::new(1.0, 1.0, alpha, beta),
            SweepLayer::Both => FuzzyParams::new(alpha, beta, alpha, beta),
        }
    }
}

impl FromStr for SweepLayer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high" => Ok(SweepLayer::High),
            "low" => Ok(SweepLayer::Low),
            "both" => Ok(SweepLayer::Both),
            other => Err(Error::config(
                "layer",
                format!("expected high, low or both, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeflectionGrid {
    pub layer: SweepLayer,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `values[i][j]` at `(alphas[i], betas[j])`, mm.
    pub values: Vec<Vec<f64>>,
    /// Face and core moduli (MPa) used in each cell.
    pub moduli: Vec<Vec<[f64; 2]>>,
    pub scenario: BeamScenario,
}

impl DeflectionGrid {
    /// Table layout: header row of β values, first column α, three decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha");
        for b in &self.betas {
            write!(out, ",{b}").unwrap();
        }
        out.push('\n');
        for (a, row) in self.alphas.iter().zip(&self.values) {
            write!(out, "{a}").unwrap();
            for v in row {
                write!(out, ",{v:.3}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn min(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `0, step, 2·step, …, 1`; `step` must divide 1 evenly.
pub fn grid_axis(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::config("step", format!("step must lie in (0, 1], got {step}")));
    }
    let m = (1.0 / step).round();
    if (m * step - 1.0).abs() > 1e-9 || m > 1e6 {
        return Err(Error::config("step", format!("step {step} does not divide 1 evenly")));
    }
    let m = m as usize;
    Ok((0..=m).map(|k| k as f64 / m as f64).collect())
}

pub fn fuzzy_sweep(
    scenario: &BeamScenario,
    layer: SweepLayer,
    alpha_step: f64,
    beta_step: f64,
) -> Result<DeflectionGrid> {
    scenario.validate()?;
    let alphas = grid_axis(alpha_step).map_err(|e| rename_step(e, "alpha_step"))?;
    let betas = grid_axis(beta_step).map_err(|e| rename_step(e, "beta_step"))?;
    let cells: Vec<(f64, [f64; 2])> = (0..alphas.len() * betas.len())
        .into_par_iter()
        .map(|k| {
            let p = layer.params(alphas[k / betas.len()], betas[k % betas.len()]);
            let (eh, el) = p.moduli(scenario)?;
            Ok((ritz_deflection(scenario, &p)?, [eh, el]))
        })
        .collect::<Result<_>>()?;
    let values = cells
        .chunks(betas.len())
        .map(|r| r.iter().map(|c| c.0).collect())
        .collect();
    let moduli = cells
        .chunks(betas.len())
        .map(|r| r.iter().map(|c| c.1).collect())
        .collect();
    Ok(DeflectionGrid {
        layer,
        alphas,
        betas,
        values,
        moduli,
        scenario: scenario.clone(),
    })
}

fn rename_step(e: Error, field: &str) -> Error {
    match e {
        Error::InvalidConfig { message, .. } => Error::config(field, message),
        e => e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis() {
        assert_eq!(grid_axis(0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(grid_axis(0.1).unwrap().len(), 11);
        assert_eq!(grid_axis(0.1).unwrap()[3], 0.3);
        assert!(grid_axis(0.3).is_err());
        assert!(grid_axis(0.0).is_err());
    }

    #[test]
    fn table_shape_and_csv() {
        let g = fuzzy_sweep(&BeamScenario::default(), SweepLayer::Both, 0.1, 0.25).unwrap();
        assert_eq!((g.values.len(), g.values[0].len()), (11, 5));
        let csv = g.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "alpha,0,0.25,0.5,0.75,1");
        assert_eq!(lines.len(), 12);
        assert!(lines[11].starts_with("1,1.344,1.344"));
        assert_eq!(g.max(), g.values[0][0]);
        assert_eq!(g.min(), g.values[0][4]);
    }

    #[test]
    fn layer_names() {
        assert_eq!("both".parse::<SweepLayer>().unwrap(), SweepLayer::Both);
        assert!("middle".parse::<SweepLayer>().is_err());
    }
}
