use crate::algebra::DiscreteBaseSpace;
use crate::error::{Error, Result};
use crate::fpp::{CountMethod, IntensityMeasure, Window};
use crate::mittag_leffler::MlParams;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A verification run, read from TOML:
///
/// ```toml
/// [experiment]
/// name = "psd-sweep"
/// seed = 3
/// alpha = 0.6
///
/// [window]
/// lower = [0.0, 0.0]
/// upper = [1.0, 1.0]
/// density = 2.0
///
/// [base]
/// masses = [0.4, 0.7, 0.3]
///
/// [tolerances]
/// scale = 1.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub window: WindowSection,
    pub base: BaseSection,
    pub tolerances: ToleranceSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: String,
    pub seed: Option<u64>,
    pub alpha: f64,
    /// Window mass used by the count checks.
    pub mass: f64,
    /// Monte Carlo sample size; each suite has its own default.
    pub samples: Option<usize>,
    pub method: CountMethod,
    /// Test functions per Gram matrix.
    pub nfuncs: usize,
    /// Randomized cases per exact check.
    pub cases: usize,
    pub out: Option<String>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            name: "verify".into(),
            seed: None,
            alpha: 0.5,
            mass: 1.0,
            samples: None,
            method: CountMethod::Direct,
            nfuncs: 20,
            cases: 100,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowSection {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Constant intensity on the window.
    pub density: f64,
}

impl Default for WindowSection {
    fn default() -> Self {
        Self { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0], density: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaseSection {
    pub masses: Vec<f64>,
}

impl Default for BaseSection {
    fn default() -> Self {
        Self { masses: vec![0.4, 0.7, 0.3, 0.9, 0.5] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSection {
    /// Multiplies every budget.
    pub scale: f64,
    /// Monte Carlo budget in standard errors.
    pub sigmas: f64,
}

impl Default for ToleranceSection {
    fn default() -> Self {
        Self { scale: 1.0, sigmas: 4.0 }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn seed(&self) -> Result<u64> {
        self.experiment.seed.ok_or_else(|| Error::Config("a seed is mandatory".into()))
    }

    pub fn samples_or(&self, default: usize) -> usize {
        self.experiment.samples.unwrap_or(default)
    }

    pub fn ml(&self) -> Result<MlParams> {
        MlParams::new(self.experiment.alpha)
    }

    pub fn window(&self) -> Result<Window> {
        Window::new(self.window.lower.clone(), self.window.upper.clone())
    }

    pub fn intensity(&self) -> Result<IntensityMeasure> {
        IntensityMeasure::constant(self.window.density)
    }

    pub fn base(&self) -> Result<DiscreteBaseSpace> {
        DiscreteBaseSpace::new(self.base.masses.clone())
    }

    /// Checks everything the suites rely on.
    pub fn validate(&self) -> Result<()> {
        self.seed()?;
        self.ml()?;
        self.window()?;
        self.intensity()?;
        self.base()?;
        let e = &self.experiment;
        if !(e.mass >= 0.0 && e.mass.is_finite()) {
            return Err(Error::Config(format!("mass = {}", e.mass)));
        }
        if e.samples.is_some_and(|n| n < 2) {
            return Err(Error::Config("samples must be at least 2".into()));
        }
        if e.nfuncs == 0 || e.nfuncs > crate::fpp::PSD_MAX_FUNCTIONS {
            return Err(Error::Config(format!("nfuncs = {}", e.nfuncs)));
        }
        if e.cases == 0 {
            return Err(Error::Config("cases must be positive".into()));
        }
        let t = &self.tolerances;
        if !(t.scale > 0.0 && t.scale.is_finite() && t.sigmas > 0.0 && t.sigmas.is_finite()) {
            return Err(Error::Config(format!("tolerances {t:?}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_defaults() {
        let c = ExperimentConfig::from_toml_str(
            "[experiment]\nseed = 9\nalpha = 0.7\nmethod = \"mixture\"\n[base]\nmasses = [1.0, 2.0]\n",
        )
        .unwrap();
        assert_eq!(c.experiment.seed, Some(9));
        assert_eq!(c.experiment.method, CountMethod::Mixture);
        assert_eq!(c.base.masses, vec![1.0, 2.0]);
        assert_eq!(c.window, WindowSection::default());
        c.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_keys_and_missing_seed() {
        assert!(ExperimentConfig::from_toml_str("[experiment]\nsed = 1\n").is_err());
        assert!(matches!(ExperimentConfig::default().validate(), Err(Error::Config(_))));
    }
}
