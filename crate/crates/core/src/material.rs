//! Cell-wall matrix material and the density-dependent foam constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Isotropic cell-wall material. Moduli in MPa, density in kg/m³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallMaterial {
    pub e0: f64,
    pub nu0: f64,
    pub rho0: f64,
    /// Shear modulus of the matrix used by the foam relations.
    pub g0: f64,
}

impl WallMaterial {
    /// Material with `g0 = e0 / (2(1 + nu0))`.
    pub fn new(e0: f64, nu0: f64, rho0: f64) -> Result<Self> {
        let m = WallMaterial {
            e0,
            nu0,
            rho0,
            g0: e0 / (2.0 * (1.0 + nu0)),
        };
        m.validate()?;
        Ok(m)
    }

    /// Aluminium cell walls: 61.7 GPa, ν = 0.3, 2700 kg/m³, G0 = 23.731 GPa.
    pub fn aluminium() -> Self {
        WallMaterial {
            e0: 61_700.0,
            nu0: 0.3,
            rho0: 2700.0,
            g0: 23_731.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e0 > 0.0 && self.e0.is_finite()) {
            return Err(Error::config(
                "E0",
                format!("Young's modulus must be positive, got {}", self.e0),
            ));
        }
        if !(self.nu0 > -1.0 && self.nu0 < 0.5) {
            return Err(Error::config(
                "nu0",
                format!("Poisson's ratio must lie in (-1, 0.5), got {}", self.nu0),
            ));
        }
        if !(self.g0 > 0.0 && self.g0.is_finite()) {
            return Err(Error::config(
                "G0",
                format!("shear modulus must be positive, got {}", self.g0),
            ));
        }
        if !(self.rho0 >= 0.0 && self.rho0.is_finite()) {
            return Err(Error::config(
                "rho0",
                format!("density must be non-negative, got {}", self.rho0),
            ));
        }
        Ok(())
    }

    /// Shear modulus used by the frame element, `E0 / (2(1 + ν0))`.
    pub fn wall_shear_modulus(&self) -> f64 {
        self.e0 / (2.0 * (1.0 + self.nu0))
    }
}

impl Default for WallMaterial {
    fn default() -> Self {
        Self::aluminium()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoamConstants {
    pub mu: f64,
    /// Shear modulus (MPa).
    pub g: f64,
    pub nu: f64,
    /// Mass density (kg/m³).
    pub rho: f64,
}

/// Shear modulus, Poisson's ratio and density of a closed-cell foam of relative density `mu`.
pub fn foam_constants(mu: f64, matrix: &WallMaterial) -> Result<FoamConstants> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain(format!("relative density must lie in [0, 1], got {mu}")));
    }
    let nu0 = matrix.nu0;
    let g = matrix.g0 * ((0.75 * 0.4886) * (1.0 + nu0) * (0.5 * mu * mu + 0.3 * mu));
    let nu = nu0 + 3.0 * (1.0 - 5.0 * nu0) * (1.0 - nu0 * nu0) * (1.0 - mu) / (2.0 * (7.0 - 5.0 * nu0));
    Ok(FoamConstants {
        mu,
        g,
        nu,
        rho: mu * matrix.rho0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn high_density_layer_constants() {
        let c = foam_constants(0.1381, &WallMaterial::aluminium()).unwrap();
        assert_relative_eq!(c.g, 576.2, max_relative = 1e-4);
        assert_relative_eq!(c.nu, 0.1930, max_relative = 3e-4);
    }

    #[test]
    fn limits() {
        let m = WallMaterial::aluminium();
        let dense = foam_constants(1.0, &m).unwrap();
        assert_eq!(dense.nu, 0.3);
        assert_eq!(dense.rho, 2700.0);
        let void = foam_constants(0.0, &m).unwrap();
        assert_eq!(void.g, 0.0);
        assert_eq!(void.rho, 0.0);
        assert!(matches!(foam_constants(1.2, &m), Err(Error::Domain(_))));
        assert!(matches!(foam_constants(-0.1, &m), Err(Error::Domain(_))));
    }

    #[test]
    fn material_validation() {
        assert!(WallMaterial::new(61_700.0, 0.3, 2700.0).is_ok());
        assert!(WallMaterial::new(-1.0, 0.3, 2700.0).is_err());
        assert!(WallMaterial::new(61_700.0, 0.5, 2700.0).is_err());
        let g = WallMaterial::new(61_700.0, 0.3, 2700.0).unwrap().g0;
        assert_relative_eq!(g, 23_731.0, max_relative = 1e-4);
    }

    proptest! {
        #[test]
        fn shear_modulus_and_poisson_increase(a in 0.001f64..0.999, d in 1e-4f64..0.5) {
            let m = WallMaterial::aluminium();
            let b = (a + d).min(1.0);
            prop_assume!(b > a);
            let (ca, cb) = (foam_constants(a, &m).unwrap(), foam_constants(b, &m).unwrap());
            prop_assert!(cb.g > ca.g);
            prop_assert!(cb.nu > ca.nu);
        }

        #[test]
        fn density_is_linear(mu in 0.0f64..0.5, c in 0.0f64..2.0) {
            let m = WallMaterial::aluminium();
            let scaled = foam_constants(c * mu, &m).unwrap().rho;
            let base = foam_constants(mu, &m).unwrap().rho;
            prop_assert!((scaled - c * base).abs() <= 1e-12 * scaled.abs().max(1.0));
        }
    }
}
