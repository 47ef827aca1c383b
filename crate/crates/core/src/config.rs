//! TOML run configuration shared by the command-line tool.
//!
//! ```toml
//! [material]      # cell-wall matrix: e0, g0 in MPa, rho0 in kg/m³
//! e0 = 61700.0
//! nu0 = 0.3
//!
//! [rve]           # lengths in mm
//! h = 30.0
//! cells = 109     # or phi = 2.88 (mean cell size)
//! mu = 0.0852     # or t = 0.1142 (fixed wall thickness)
//! seed = 7
//!
//! [beam]          # lengths in m, load in N, moduli in MPa
//! load = 100.0
//! error_band = 0.0592
//!
//! [dataset]
//! count = 50
//! seed = 1
//! ```
//!
//! Every key is optional; unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::beam::{BeamScenario, RitzBasis};
use crate::dataset::{DatasetConfig, MorphologyMix};
use crate::error::{Error, Result};
use crate::fem::MeshOptions;
use crate::fuzzy::make_fuzzy;
use crate::material::WallMaterial;
use crate::rve::{DensitySpec, Morphology, RveConfig, DEFAULT_MIN_SEP_FACTOR};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialSection,
    pub rve: RveSection,
    pub beam: BeamSection,
    pub dataset: DatasetSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialSection {
    pub e0: Option<f64>,
    pub nu0: Option<f64>,
    pub rho0: Option<f64>,
    /// Overrides `e0 / (2(1 + nu0))` in the foam shear-modulus relation.
    pub g0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RveSection {
    pub h: Option<f64>,
    pub cells: Option<usize>,
    pub phi: Option<f64>,
    pub mu: Option<f64>,
    pub t: Option<f64>,
    pub seed: Option<u64>,
    pub morphology: Option<Morphology>,
    pub concavity_count: Option<usize>,
    pub min_sep_factor: Option<f64>,
    pub image_px: Option<u32>,
    /// Frame element length (mm).
    pub element_size: Option<f64>,
    pub fix_top_rotation: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamSection {
    pub span: Option<f64>,
    pub width: Option<f64>,
    pub thickness: Option<f64>,
    pub load: Option<f64>,
    pub mu_high: Option<f64>,
    pub mu_low: Option<f64>,
    pub e2_high: Option<f64>,
    pub e2_low: Option<f64>,
    pub error_band: Option<f64>,
    pub n_terms: Option<usize>,
    pub basis: Option<RitzBasis>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    pub count: Option<usize>,
    pub h: Option<f64>,
    pub t_fixed: Option<f64>,
    pub mu_range: Option<[f64; 2]>,
    pub mix: Option<MorphologyMix>,
    pub image_px: Option<u32>,
    pub split: Option<[f64; 3]>,
    pub seed: Option<u64>,
    pub concavity_count: Option<usize>,
    pub max_retries: Option<usize>,
    pub workers: Option<usize>,
}

fn toml_error(text: &str, e: toml::de::Error) -> Error {
    let line = e
        .span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
        .unwrap_or(0);
    Error::parse(line, e.message().to_string())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| toml_error(text, e))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn material(&self) -> Result<WallMaterial> {
        let base = WallMaterial::aluminium();
        let m = &self.material;
        let mut out = if m.e0.is_some() || m.nu0.is_some() {
            WallMaterial::new(m.e0.unwrap_or(base.e0), m.nu0.unwrap_or(base.nu0), base.rho0)?
        } else {
            base
        };
        if let Some(rho0) = m.rho0 {
            out.rho0 = rho0;
        }
        if let Some(g0) = m.g0 {
            out.g0 = g0;
        }
        out.validate()?;
        Ok(out)
    }

    /// RVE generation settings. Without `cells`/`phi` the 109-cell validation
    /// case is used; without `mu`/`t` the density defaults to 8.52 %.
    pub fn rve_config(&self) -> Result<RveConfig> {
        let r = &self.rve;
        let density = match (r.mu, r.t) {
            (Some(_), Some(_)) => return Err(Error::config("mu", "give either `mu` or `t`, not both")),
            (Some(mu), None) => DensitySpec::TargetDensity(mu),
            (None, Some(t)) => DensitySpec::FixedThickness(t),
            (None, None) => DensitySpec::TargetDensity(0.0852),
        };
        let (cell_size, n_cells) = match (r.phi, r.cells) {
            (None, None) => (None, Some(109)),
            other => other,
        };
        let config = RveConfig {
            h: r.h.unwrap_or(30.0),
            cell_size,
            n_cells,
            density,
            min_sep_factor: r.min_sep_factor.unwrap_or(DEFAULT_MIN_SEP_FACTOR),
            morphology: r.morphology.unwrap_or(Morphology::RandomConvex),
            concavity_count: r.concavity_count.unwrap_or(1),
            rng_seed: r.seed.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn mesh_options(&self) -> MeshOptions {
        MeshOptions {
            target_h: self.rve.element_size,
            fix_top_rotation: self.rve.fix_top_rotation.unwrap_or(false),
        }
    }

    pub fn beam_scenario(&self) -> Result<BeamScenario> {
        let b = &self.beam;
        let d = BeamScenario::default();
        let r = b.error_band.unwrap_or(crate::fuzzy::DEFAULT_ERROR_BAND);
        let scenario = BeamScenario {
            span: b.span.unwrap_or(d.span),
            width: b.width.unwrap_or(d.width),
            thickness: b.thickness.unwrap_or(d.thickness),
            load: b.load.unwrap_or(d.load),
            mu_high: b.mu_high.unwrap_or(d.mu_high),
            mu_low: b.mu_low.unwrap_or(d.mu_low),
            e_high: make_fuzzy(b.e2_high.unwrap_or(d.e_high.e2), r)?,
            e_low: make_fuzzy(b.e2_low.unwrap_or(d.e_low.e2), r)?,
            matrix: self.material()?,
            n_terms: b.n_terms.unwrap_or(d.n_terms),
            basis: b.basis.unwrap_or(d.basis),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn dataset_config(&self) -> Result<DatasetConfig> {
        let s = &self.dataset;
        let d = DatasetConfig::default();
        let config = DatasetConfig {
            count: s.count.unwrap_or(d.count),
            h: s.h.unwrap_or(d.h),
            t_fixed: s.t_fixed.unwrap_or(d.t_fixed),
            mu_range: s.mu_range.unwrap_or(d.mu_range),
            mix: s.mix.unwrap_or(d.mix),
            image_px: s.image_px.unwrap_or(d.image_px),
            split: s.split.unwrap_or(d.split),
            master_seed: s.seed.unwrap_or(d.master_seed),
            concavity_count: s.concavity_count.unwrap_or(d.concavity_count),
            max_retries: s.max_retries.unwrap_or(d.max_retries),
            material: self.material()?,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c.beam_scenario().unwrap(), BeamScenario::default());
        assert_eq!(c.dataset_config().unwrap(), DatasetConfig::default());
        assert_eq!(c.material().unwrap(), WallMaterial::aluminium());
        assert_eq!(c.rve_config().unwrap().n_cells, Some(109));
    }

    #[test]
    fn sections_are_read() {
        let c = RunConfig::parse(
            "[rve]\nh = 20.0\nphi = 2.0\nt = 0.1\nmorphology = \"regular-hex\"\n\
             [beam]\nload = 50.0\nbasis = \"full-span\"\n[dataset]\ncount = 5\nmix = { random_convex = 1.0, concave_perturbed = 0.0, regular = 0.0 }\n\
             [material]\ne0 = 70000.0\n",
        )
        .unwrap();
        let r = c.rve_config().unwrap();
        assert_eq!((r.h, r.cell_size, r.n_cells), (20.0, Some(2.0), None));
        assert_eq!(r.density, DensitySpec::FixedThickness(0.1));
        assert_eq!(r.morphology, Morphology::RegularHex);
        let b = c.beam_scenario().unwrap();
        assert_eq!((b.load, b.basis, b.matrix.e0), (50.0, RitzBasis::FullSpan, 70000.0));
        assert_eq!(c.dataset_config().unwrap().count, 5);
    }

    #[test]
    fn unknown_keys_and_bad_values() {
        let err = RunConfig::parse("[rve]\nh = 30.0\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(RunConfig::parse("[extra]\n").is_err());
        let c = RunConfig::parse("[rve]\nmu = 1.5\n").unwrap();
        assert!(c.rve_config().unwrap_err().to_string().contains("mu"));
        let c = RunConfig::parse("[rve]\ncells = 10\nphi = 3.0\n").unwrap();
        assert!(c.rve_config().is_err());
    }
}
