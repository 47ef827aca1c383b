//! Triangular fuzzy numbers in double parametric form.
//!
//! A triangular fuzzy number `(e1, e2, e3)` is evaluated at `(α, β) ∈ [0,1]²` as
//!
//! ```text
//! E(α, β) = (e1 − e3)αβ + (e3 − e1)β + (e2 − e1)α + e1
//! ```
//!
//! `α` selects the α-cut (`α = 1` is the crisp peak `e2`) and `β` sweeps that
//! cut from its lower to its upper end.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative error band of the image regressor.
pub const DEFAULT_ERROR_BAND: f64 = 0.0592;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyTriangular {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl FuzzyTriangular {
    pub fn new(e1: f64, e2: f64, e3: f64) -> Result<Self> {
        if !(e1 <= e2 && e2 <= e3) || !(e1.is_finite() && e3.is_finite()) {
            return Err(Error::Domain(format!(
                "fuzzy number needs e1 ≤ e2 ≤ e3, got ({e1}, {e2}, {e3})"
            )));
        }
        Ok(FuzzyTriangular { e1, e2, e3 })
    }

    pub fn crisp(value: f64) -> Self {
        FuzzyTriangular {
            e1: value,
            e2: value,
            e3: value,
        }
    }

    /// Double-parametric value at `(alpha, beta)`.
    pub fn eval(&self, alpha: f64, beta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::Domain(format!(
                "alpha and beta must lie in [0, 1], got ({alpha}, {beta})"
            )));
        }
        let FuzzyTriangular { e1, e2, e3 } = *self;
        Ok((e1 - e3) * alpha * beta + (e3 - e1) * beta + (e2 - e1) * alpha + e1)
    }
}

/// `((1 − r)·e2, e2, (1 + r)·e2)`.
pub fn make_fuzzy(e2: f64, r: f64) -> Result<FuzzyTriangular> {
    if !(e2 > 0.0 && e2.is_finite()) {
        return Err(Error::Domain(format!("peak value must be positive, got {e2}")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::config(
            "error_band",
            format!("relative error band must lie in [0, 1), got {r}"),
        ));
    }
    Ok(FuzzyTriangular {
        e1: (1.0 - r) * e2,
        e2,
        e3: (1.0 + r) * e2,
    })
}

pub fn eval_fuzzy(f: &FuzzyTriangular, alpha: f64, beta: f64) -> Result<f64> {
    f.eval(alpha, beta)
}

/// Error report written by the image regressor's evaluation step.
///
/// Only `mean_relative_error` is required; other fields are tolerated so the
/// report can carry histograms and per-sample data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBandReport {
    pub mean_relative_error: f64,
    #[serde(default)]
    pub split: Option<String>,
    #[serde(default)]
    pub n_samples: Option<u64>,
}

/// Reads the error band `r` from a regressor report (JSON).
pub fn parse_error_band(json: &str) -> Result<f64> {
    let report: ErrorBandReport = serde_json::from_str(json)?;
    let r = report.mean_relative_error;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::config(
            "mean_relative_error",
            format!("error band must lie in (0, 1), got {r}"),
        ));
    }
    Ok(r)
}
