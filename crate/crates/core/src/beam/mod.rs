//! Static bending of a three-layer porous foam beam (stiff faces, soft core)
//! under a mid-span point load, hinged at both ends.
//!
//! Units: lengths in m, load in N, moduli in MPa on input; deflections are
//! reported in mm.

mod quadrature;
mod ritz;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{make_fuzzy, FuzzyTriangular, DEFAULT_ERROR_BAND};
use crate::material::{foam_constants, WallMaterial};

pub use quadrature::{gauss_legendre, legendre};
pub use ritz::{ritz_deflection, ritz_solve, RitzBasis, RitzSolution};
pub use sweep::{fuzzy_sweep, grid_axis, DeflectionGrid, SweepLayer};

pub const MIN_RITZ_TERMS: usize = 4;
pub const DEFAULT_RITZ_TERMS: usize = 10;

const MPA: f64 = 1e6;
const MM_PER_M: f64 = 1e3;

/// Peak (crisp) face and core moduli obtained from homogenized RVE sets (MPa).
pub const DEFAULT_E2_HIGH: f64 = 1693.92;
pub const DEFAULT_E2_LOW: f64 = 865.98;
pub const DEFAULT_MU_HIGH: f64 = 0.1381;
pub const DEFAULT_MU_LOW: f64 = 0.0692;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamScenario {
    /// Span `L` (m).
    pub span: f64,
    /// Width `b` (m).
    pub width: f64,
    /// Total thickness `h_T` (m); each face is `h_T/6`, the core `2h_T/3`.
    pub thickness: f64,
    /// Mid-span point load `P` (N), positive downward.
    pub load: f64,
    pub mu_high: f64,
    pub mu_low: f64,
    /// Face modulus (MPa).
    pub e_high: FuzzyTriangular,
    /// Core modulus (MPa).
    pub e_low: FuzzyTriangular,
    /// Cell-wall material behind the foam shear modulus and Poisson's ratio.
    pub matrix: WallMaterial,
    pub n_terms: usize,
    pub basis: RitzBasis,
}

impl Default for BeamScenario {
    fn default() -> Self {
        BeamScenario {
            span: 2.0,
            width: 0.1,
            thickness: 0.1,
            load: 100.0,
            mu_high: DEFAULT_MU_HIGH,
            mu_low: DEFAULT_MU_LOW,
            e_high: make_fuzzy(DEFAULT_E2_HIGH, DEFAULT_ERROR_BAND).expect("valid default"),
            e_low: make_fuzzy(DEFAULT_E2_LOW, DEFAULT_ERROR_BAND).expect("valid default"),
            matrix: WallMaterial::aluminium(),
            n_terms: DEFAULT_RITZ_TERMS,
            basis: RitzBasis::default(),
        }
    }
}

impl BeamScenario {
    /// Rebuilds both fuzzy moduli around their peaks with relative band `r`.
    pub fn with_error_band(mut self, r: f64) -> Result<Self> {
        self.e_high = make_fuzzy(self.e_high.e2, r)?;
        self.e_low = make_fuzzy(self.e_low.e2, r)?;
        Ok(self)
    }

    /// Single-material beam made entirely of the face (`high = true`) or core foam.
    pub fn homogeneous(mut self, high: bool) -> Self {
        if high {
            self.e_low = self.e_high;
            self.mu_low = self.mu_high;
        } else {
            self.e_high = self.e_low;
            self.mu_high = self.mu_low;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [("L", self.span), ("b", self.width), ("h_T", self.thickness)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(field, format!("must be positive, got {v}")));
            }
        }
        if !(self.load >= 0.0 && self.load.is_finite()) {
            return Err(Error::config(
                "P",
                format!("load must be non-negative, got {}", self.load),
            ));
        }
        for (field, mu) in [("mu_high", self.mu_high), ("mu_low", self.mu_low)] {
            if !(mu > 0.0 && mu < 1.0) {
                return Err(Error::config(
                    field,
                    format!("relative density must lie in (0, 1), got {mu}"),
                ));
            }
        }
        for (field, e) in [("E_high", &self.e_high), ("E_low", &self.e_low)] {
            if !(e.e1 > 0.0 && e.e1 <= e.e2 && e.e2 <= e.e3 && e.e3.is_finite()) {
                return Err(Error::config(field, format!("need 0 < e1 ≤ e2 ≤ e3, got {e:?}")));
            }
        }
        if self.n_terms < MIN_RITZ_TERMS {
            return Err(Error::config(
                "n_terms",
                format!("at least {MIN_RITZ_TERMS} Ritz terms are needed, got {}", self.n_terms),
            ));
        }
        self.matrix.validate()
    }

    /// Layer interfaces through the thickness, bottom to top.
    pub fn interfaces(&self) -> [f64; 4] {
        let h = self.thickness;
        let face = h / 6.0;
        [-0.5 * h, -0.5 * h + face, 0.5 * h - face, 0.5 * h]
    }
}

/// Fuzzy parameters of the face (`1`) and core (`2`) moduli.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyParams {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl FuzzyParams {
    pub const CRISP: FuzzyParams = FuzzyParams {
        alpha1: 1.0,
        beta1: 1.0,
        alpha2: 1.0,
        beta2: 1.0,
    };

    pub fn new(alpha1: f64, beta1: f64, alpha2: f64, beta2: f64) -> Self {
        FuzzyParams {
            alpha1,
            beta1,
            alpha2,
            beta2,
        }
    }

    /// Face and core moduli (MPa) selected by these parameters.
    pub fn moduli(&self, scenario: &BeamScenario) -> Result<(f64, f64)> {
        Ok((
            scenario.e_high.eval(self.alpha1, self.beta1)?,
            scenario.e_low.eval(self.alpha2, self.beta2)?,
        ))
    }
}

/// Through-thickness resultant stiffnesses of the whole section (SI).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionStiffness {
    /// N
    pub a11: f64,
    /// N·m
    pub b11: f64,
    /// N·m²
    pub d11: f64,
    /// N
    pub s55: f64,
}

pub fn section_stiffnesses(scenario: &BeamScenario, params: &FuzzyParams) -> Result<SectionStiffness> {
    scenario.validate()?;
    let (e_high, e_low) = params.moduli(scenario)?;
    let high = foam_constants(scenario.mu_high, &scenario.matrix)?;
    let low = foam_constants(scenario.mu_low, &scenario.matrix)?;
    let layers = [(e_high, high), (e_low, low), (e_high, high)];
    let z = scenario.interfaces();
    let b = scenario.width;
    let mut s = SectionStiffness {
        a11: 0.0,
        b11: 0.0,
        d11: 0.0,
        s55: 0.0,
    };
    for (k, (e, c)) in layers.iter().enumerate() {
        let q = e * MPA / (1.0 - c.nu * c.nu);
        let (z0, z1) = (z[k], z[k + 1]);
        s.a11 += b * q * (z1 - z0);
        s.b11 += b * q * (z1 * z1 - z0 * z0) / 2.0;
        s.d11 += b * q * (z1.powi(3) - z0.powi(3)) / 3.0;
        s.s55 += b * c.g * MPA * (z1 - z0);
    }
    Ok(s)
}

/// `P L³ / (48 E′ I′)` in mm, with `E′` in MPa, `P` in N, `L` in m and `I′` in m⁴.
pub fn closed_form_homogeneous(load: f64, span: f64, e_prime: f64, i_prime: f64) -> Result<f64> {
    if !(e_prime > 0.0 && i_prime > 0.0) {
        return Err(Error::Domain(format!(
            "bending stiffness must be positive, got E′={e_prime}, I′={i_prime}"
        )));
    }
    Ok(load * span.powi(3) / (48.0 * e_prime * MPA * i_prime) * MM_PER_M)
}

/// Simply supported shear-deformable beam under a central point load (mm):
/// `P L³ / (48 D11) + P L / (4 S55)`.
pub fn closed_form_layered(load: f64, span: f64, d11: f64, s55: f64) -> Result<f64> {
    if !(d11 > 0.0 && s55 > 0.0) {
        return Err(Error::Domain(format!(
            "stiffnesses must be positive, got D11={d11}, S55={s55}"
        )));
    }
    Ok((load * span.powi(3) / (48.0 * d11) + load * span / (4.0 * s55)) * MM_PER_M)
}

/// `E / (1 − ν²)` (MPa) for a foam layer of relative density `mu`.
pub fn plane_strain_modulus(e: f64, mu: f64, matrix: &WallMaterial) -> Result<f64> {
    let nu = foam_constants(mu, matrix)?.nu;
    Ok(e / (1.0 - nu * nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn crisp_section() {
        let s = section_stiffnesses(&BeamScenario::default(), &FuzzyParams::CRISP).unwrap();
        assert_relative_eq!(s.d11, 1.2531e4, max_relative = 1e-4);
        assert_relative_eq!(s.s55, 3.666e6, max_relative = 2e-4);
        assert!(s.b11.abs() <= 1e-12 * s.a11);
    }

    #[test]
    fn soft_face_corner() {
        let s = section_stiffnesses(&BeamScenario::default(), &FuzzyParams::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        assert_relative_eq!(s.d11, 1.1920e4, max_relative = 1e-4);
    }

    #[test]
    fn closed_forms() {
        let sc = BeamScenario::default();
        let i = sc.width * sc.thickness.powi(3) / 12.0;
        let e_h = plane_strain_modulus(sc.e_high.e2, sc.mu_high, &sc.matrix).unwrap();
        assert_relative_eq!(e_h, 1759.5, max_relative = 1e-4);
        assert_relative_eq!(
            closed_form_homogeneous(100.0, 2.0, e_h, i).unwrap(),
            1.137,
            max_relative = 5e-4
        );
        assert_eq!(closed_form_homogeneous(0.0, 2.0, e_h, i).unwrap(), 0.0);
        assert!(closed_form_homogeneous(100.0, 2.0, 0.0, i).is_err());
        let s = section_stiffnesses(&sc, &FuzzyParams::CRISP).unwrap();
        assert_relative_eq!(
            closed_form_layered(100.0, 2.0, s.d11, s.s55).unwrap(),
            1.344,
            max_relative = 5e-4
        );
        // shear-rigid limit
        let rigid = closed_form_layered(100.0, 2.0, s.d11, f64::MAX).unwrap();
        assert_relative_eq!(rigid, 100.0 * 8.0 / (48.0 * s.d11) * 1e3, max_relative = 1e-12);
    }

    #[test]
    fn scenario_validation() {
        let ok = BeamScenario::default();
        ok.validate().unwrap();
        let bad = BeamScenario {
            n_terms: 3,
            ..ok.clone()
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig { .. })));
        let bad = BeamScenario {
            span: 0.0,
            ..ok.clone()
        };
        assert!(bad.validate().is_err());
        assert!(section_stiffnesses(&ok, &FuzzyParams::new(1.5, 0.0, 1.0, 1.0)).is_err());
    }
}
