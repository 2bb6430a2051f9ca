use super::configuration::Configuration;
use super::intensity::IntensityMeasure;
use super::window::Window;
use crate::error::{Error, Result};
use crate::mittag_leffler::{count_weights_adaptive, CountWeights, MlParams};
use crate::rng::RngStream;
use crate::stable::{sample_nu, StableParams};
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Tail mass left out of the inverse-CDF table.
pub const COUNT_TAIL: f64 = 1e-12;

/// How the number of points is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    /// Inverse CDF of the count weights.
    Direct,
    /// `τ ~ ν_α`, then `Poisson(τ μ(Λ))`.
    Mixture,
}

impl FromStr for CountMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(CountMethod::Direct),
            "mixture" => Ok(CountMethod::Mixture),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}, expected direct or mixture"))),
        }
    }
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Direct => "direct",
            CountMethod::Mixture => "mixture",
        })
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if mass >= 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("mass = {mass} must be finite and non-negative")))
    }
}

/// Poisson draw with mean `lambda >= 0`.
fn poisson(lambda: f64, rng: &mut RngStream) -> Result<u64> {
    if lambda == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(lambda).map_err(|e| Error::Domain(format!("Poisson mean {lambda}: {e}")))?;
    Ok(d.sample(rng) as u64)
}

/// Fractional Poisson count law on one window, prepared for repeated draws.
#[derive(Debug, Clone)]
pub struct CountSampler {
    method: CountMethod,
    mass: f64,
    stable: StableParams,
    weights: Option<CountWeights>,
    cdf: Vec<f64>,
}

impl CountSampler {
    pub fn new(ml: &MlParams, mass: f64, method: CountMethod) -> Result<Self> {
        ml.validate()?;
        check_mass(mass)?;
        let stable = StableParams::new(ml.alpha)?;
        let (weights, cdf) = match method {
            CountMethod::Direct => {
                let w = count_weights_adaptive(ml, mass, COUNT_TAIL)?;
                let cdf = w
                    .weights
                    .iter()
                    .scan(0.0, |acc, x| {
                        *acc += x;
                        Some(*acc)
                    })
                    .collect();
                (Some(w), cdf)
            }
            CountMethod::Mixture => (None, Vec::new()),
        };
        Ok(Self { method, mass, stable, weights, cdf })
    }

    pub fn method(&self) -> CountMethod {
        self.method
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// The weights behind the inverse CDF (direct method only).
    pub fn weights(&self) -> Option<&CountWeights> {
        self.weights.as_ref()
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<u64> {
        if self.mass == 0.0 {
            return Ok(0);
        }
        match self.method {
            CountMethod::Direct => {
                let u = rng.open01();
                // The table stops at tail < COUNT_TAIL; a uniform beyond it
                // lands on the last count.
                let n = self.cdf.partition_point(|&c| c < u);
                Ok(n.min(self.cdf.len() - 1) as u64)
            }
            CountMethod::Mixture => {
                let tau = sample_nu(&self.stable, rng);
                poisson(tau * self.mass, rng)
            }
        }
    }
}

/// One count by inverse CDF over the count weights.
pub fn sample_count_direct(ml: &MlParams, mass: f64, rng: &mut RngStream) -> Result<u64> {
    CountSampler::new(ml, mass, CountMethod::Direct)?.sample(rng)
}

/// One count from the Poisson mixture over `ν_α`.
pub fn sample_count_mixture(stable: &StableParams, mass: f64, rng: &mut RngStream) -> Result<u64> {
    stable.validate()?;
    check_mass(mass)?;
    if mass == 0.0 {
        return Ok(0);
    }
    let tau = sample_nu(stable, rng);
    poisson(tau * mass, rng)
}

/// Configurations on a fixed window, prepared for repeated draws.
#[derive(Debug, Clone)]
pub struct ConfigurationSampler {
    window: Window,
    mu: IntensityMeasure,
    counts: CountSampler,
}

impl ConfigurationSampler {
    pub fn new(ml: &MlParams, window: &Window, mu: &IntensityMeasure, method: CountMethod) -> Result<Self> {
        let mass = mu.mass(window)?;
        Ok(Self {
            window: window.clone(),
            mu: mu.clone(),
            counts: CountSampler::new(ml, mass, method)?,
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn mass(&self) -> f64 {
        self.counts.mass()
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<Configuration> {
        let n = self.counts.sample(rng)?;
        let d = self.window.dim();
        let mut u = vec![0.0; d];
        let mut points = Vec::with_capacity(n as usize);
        let sup = self.mu.sup();
        let uniform = self.mu.constant_value().is_some();
        while points.len() < n as usize {
            for v in u.iter_mut() {
                *v = rng.open01();
            }
            let x = self.window.at(&u);
            if !self.window.contains(&x) {
                continue;
            }
            if !uniform {
                let rho = self.mu.density(&x);
                if !(rho >= 0.0 && rho <= sup) {
                    return Err(Error::RejectionBound(format!("density {rho} at {x:?} against declared sup {sup}")));
                }
                if rng.open01() * sup >= rho {
                    continue;
                }
            }
            points.push(x);
        }
        Ok(Configuration::new(points))
    }
}

/// Count by `method`, then that many i.i.d. points from `μ` normalized on
/// the window.
pub fn sample_configuration(
    ml: &MlParams,
    window: &Window,
    mu: &IntensityMeasure,
    rng: &mut RngStream,
    method: CountMethod,
) -> Result<Configuration> {
    ConfigurationSampler::new(ml, window, mu, method)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::mean_stderr;

    #[test]
    fn empty_window_gives_no_points() {
        let ml = MlParams::new(0.5).unwrap();
        let mut rng = RngStream::new(1, 0);
        assert_eq!(sample_count_direct(&ml, 0.0, &mut rng).unwrap(), 0);
        assert_eq!(sample_count_mixture(&StableParams::new(0.5).unwrap(), 0.0, &mut rng).unwrap(), 0);
        let mu = IntensityMeasure::constant(0.0).unwrap();
        for m in [CountMethod::Direct, CountMethod::Mixture] {
            assert!(sample_configuration(&ml, &Window::unit(2), &mu, &mut rng, m).unwrap().is_empty());
        }
    }

    #[test]
    fn method_parsing() {
        assert_eq!("mixture".parse::<CountMethod>().unwrap(), CountMethod::Mixture);
        assert!("other".parse::<CountMethod>().is_err());
        assert_eq!(CountMethod::Direct.to_string(), "direct");
    }

    #[test]
    fn rejection_bound_violation_is_detected() {
        let ml = MlParams::new(1.0).unwrap();
        let mu = IntensityMeasure::from_fn(|x: &[f64]| 10.0 * x[0], 2.0).unwrap();
        let s = ConfigurationSampler::new(&ml, &Window::unit(1), &mu, CountMethod::Direct).unwrap();
        let mut rng = RngStream::new(2, 0);
        let err = (0..100).map(|_| s.sample(&mut rng)).find(|r| r.is_err());
        assert!(matches!(err, Some(Err(Error::RejectionBound(_)))));
    }

    #[test]
    fn poisson_case_mean_and_variance() {
        let ml = MlParams::new(1.0).unwrap();
        let s = CountSampler::new(&ml, 3.0, CountMethod::Direct).unwrap();
        let mut rng = RngStream::new(9, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| s.sample(&mut rng).unwrap() as f64).collect();
        let (m, se) = mean_stderr(&xs);
        assert!((m - 3.0).abs() < 4.0 * se);
        let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0);
        assert!((var - 3.0).abs() < 0.1);
    }

    #[test]
    fn points_follow_the_density() {
        let ml = MlParams::new(0.7).unwrap();
        let mu = IntensityMeasure::from_fn(|x: &[f64]| 2.0 * x[0], 2.0).unwrap();
        let s = ConfigurationSampler::new(&ml, &Window::unit(1), &mu, CountMethod::Mixture).unwrap();
        let mut rng = RngStream::new(4, 0);
        let xs: Vec<f64> = (0..20_000).flat_map(|_| s.sample(&mut rng).unwrap().points).map(|p| p[0]).collect();
        let (m, se) = mean_stderr(&xs);
        assert!((m - 2.0 / 3.0).abs() < 4.0 * se, "{m} ± {se}");
    }
}
