use super::configuration::Configuration;
use super::intensity::IntensityMeasure;
use super::sampler::{ConfigurationSampler, CountMethod, CountSampler};
use super::test_function::TestFunction;
use super::window::Window;
use crate::error::{Error, Result};
use crate::mittag_leffler::{ml_eval, MlParams};
use crate::rng::{par_chunks, RngStream};
use crate::stats::{chi_square_two_sample, covariance_stderr, histogram, jackknife_mean, mean_stderr, ChiSquareTest};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest Gram matrix accepted by [`psd_check`].
pub const PSD_MAX_FUNCTIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfEstimate {
    pub value: Complex64,
    pub stderr: f64,
    pub samples: usize,
}

/// Mean of `e^{i⟨γ, φ⟩}` over the samples, with jackknife standard error.
pub fn empirical_cf(samples: &[Configuration], phi: &TestFunction) -> Result<CfEstimate> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter(format!("{} samples, need at least 2", samples.len())));
    }
    let obs: Vec<Complex64> = samples.iter().map(|g| Complex64::from_polar(1.0, g.pairing(phi))).collect();
    let (value, stderr) = jackknife_mean(&obs);
    Ok(CfEstimate { value, stderr, samples: samples.len() })
}

/// `∫ (e^{iφ} - 1) dμ`, exact over the cells of a step function.
pub fn cf_argument(phi: &TestFunction, mu: &IntensityMeasure) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match phi.cells() {
        Some(cells) => cells.iter().try_fold(Complex64::new(0.0, 0.0), |acc, (w, c)| {
            Ok(acc + (Complex64::from_polar(1.0, *c) - one) * mu.mass(w)?)
        }),
        None => mu.integrate(phi.support(), |x| Complex64::from_polar(1.0, phi.eval(x)) - one),
    }
}

/// `E_α(∫ (e^{iφ} - 1) dμ)`.
pub fn analytic_cf(ml: &MlParams, phi: &TestFunction, mu: &IntensityMeasure) -> Result<Complex64> {
    ml_eval(ml, cf_argument(phi, mu)?)
}

/// Smallest eigenvalue of the Hermitian matrix `C_ab = C_α(φ_a - φ_b)`.
pub fn psd_check(ml: &MlParams, functions: &[TestFunction], mu: &IntensityMeasure) -> Result<f64> {
    let k = functions.len();
    if k == 0 || k > PSD_MAX_FUNCTIONS {
        return Err(Error::InvalidParameter(format!("{k} functions, expected 1..={PSD_MAX_FUNCTIONS}")));
    }
    let mut c = DMatrix::from_element(k, k, Complex64::new(1.0, 0.0));
    for a in 0..k {
        for b in a + 1..k {
            let v = analytic_cf(ml, &functions[a].difference(&functions[b])?, mu)?;
            c[(a, b)] = v;
            c[(b, a)] = v.conj();
        }
    }
    let eig = c.symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

/// `n` configurations drawn in parallel, chunk `i` from `rng.child(i)`.
pub fn sample_many(sampler: &ConfigurationSampler, n: usize, rng: &RngStream) -> Result<Vec<Configuration>> {
    par_chunks(rng, n, |r, k| (0..k).map(|_| sampler.sample(r)).collect()).into_iter().collect()
}

/// `n` counts drawn in parallel, chunk `i` from `rng.child(i)`.
pub fn sample_counts(sampler: &CountSampler, n: usize, rng: &RngStream) -> Result<Vec<u64>> {
    par_chunks(rng, n, |r, k| (0..k).map(|_| sampler.sample(r)).collect()).into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub inner_mass: f64,
    pub mean_restricted: f64,
    pub mean_direct: f64,
    pub chi_square: ChiSquareTest,
}

/// Restricts configurations sampled on `outer` to `inner` and compares the
/// count law with direct sampling on `inner`.
pub fn consistency_check(
    ml: &MlParams,
    inner: &Window,
    outer: &Window,
    mu: &IntensityMeasure,
    n_samples: usize,
    rng: &RngStream,
) -> Result<ConsistencyReport> {
    if !outer.contains_window(inner) {
        return Err(Error::InvalidParameter("inner window is not contained in the outer one".into()));
    }
    let big = ConfigurationSampler::new(ml, outer, mu, CountMethod::Direct)?;
    let restricted: Vec<u64> =
        sample_many(&big, n_samples, &rng.child(0))?.iter().map(|g| g.count_in(inner) as u64).collect();
    let inner_mass = mu.mass(inner)?;
    let direct = sample_counts(&CountSampler::new(ml, inner_mass, CountMethod::Direct)?, n_samples, &rng.child(1))?;
    let mean = |v: &[u64]| v.iter().sum::<u64>() as f64 / v.len() as f64;
    Ok(ConsistencyReport {
        inner_mass,
        mean_restricted: mean(&restricted),
        mean_direct: mean(&direct),
        chi_square: chi_square_two_sample(&histogram(&restricted), &histogram(&direct), 5.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    pub covariance: f64,
    pub stderr: f64,
    pub mean_a: f64,
    pub mean_a_stderr: f64,
    pub mean_b: f64,
    pub mean_b_stderr: f64,
}

/// `Cov(N_A, N_B)` for configurations on `window`, with `A, B ⊂ window`.
pub fn count_covariance(
    ml: &MlParams,
    window: &Window,
    a: &Window,
    b: &Window,
    mu: &IntensityMeasure,
    n_samples: usize,
    rng: &RngStream,
) -> Result<CovarianceEstimate> {
    if !window.contains_window(a) || !window.contains_window(b) {
        return Err(Error::InvalidParameter("count windows must lie inside the sampling window".into()));
    }
    let sampler = ConfigurationSampler::new(ml, window, mu, CountMethod::Direct)?;
    let samples = sample_many(&sampler, n_samples, rng)?;
    let na: Vec<f64> = samples.iter().map(|g| g.count_in(a) as f64).collect();
    let nb: Vec<f64> = samples.iter().map(|g| g.count_in(b) as f64).collect();
    let (covariance, stderr) = covariance_stderr(&na, &nb);
    let (mean_a, mean_a_stderr) = mean_stderr(&na);
    let (mean_b, mean_b_stderr) = mean_stderr(&nb);
    Ok(CovarianceEstimate { covariance, stderr, mean_a, mean_a_stderr, mean_b, mean_b_stderr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_step(c: f64) -> TestFunction {
        let (left, _) = Window::unit(1).split(0, 0.5).unwrap();
        TestFunction::step(Window::unit(1), vec![(left, c)]).unwrap()
    }

    #[test]
    fn zero_function_has_unit_cf() {
        let mu = IntensityMeasure::constant(3.0).unwrap();
        let phi = TestFunction::zero(Window::unit(2));
        assert_eq!(analytic_cf(&MlParams::new(0.4).unwrap(), &phi, &mu).unwrap(), Complex64::new(1.0, 0.0));
        let samples = vec![Configuration::new(vec![vec![0.1, 0.2]]), Configuration::default()];
        let e = empirical_cf(&samples, &phi).unwrap();
        assert_eq!(e.value, Complex64::new(1.0, 0.0));
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn poisson_cf_closed_form() {
        let mu = IntensityMeasure::constant(2.0).unwrap();
        let v = analytic_cf(&MlParams::new(1.0).unwrap(), &unit_step(0.7), &mu).unwrap();
        let want = ((Complex64::from_polar(1.0, 0.7) - 1.0) * 1.0).exp();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn step_and_quadrature_arguments_agree() {
        let mu = IntensityMeasure::from_fn(|x: &[f64]| 1.0 + x[0], 2.0).unwrap();
        let phi = unit_step(1.3);
        let exact = cf_argument(&phi, &mu).unwrap();
        // μ([0, 1/2)) = 5/8
        assert!((exact - (Complex64::from_polar(1.0, 1.3) - 1.0) * 0.625).norm() < 1e-9);
        let smooth = TestFunction::from_fn(Window::unit(1), |x| if x[0] < 0.5 { 1.3 } else { 0.0 });
        let q = cf_argument(&smooth, &mu);
        // the jump makes midpoint refinement slow but it must not be wrong
        if let Ok(q) = q {
            assert!((q - exact).norm() < 1e-6);
        }
        let smooth = TestFunction::from_fn(Window::unit(1), |x| x[0]);
        let q = cf_argument(&smooth, &mu).unwrap();
        // ∫ (e^{ix} - 1)(1 + x) dx
        let i = Complex64::new(0.0, 1.0);
        let e = i.exp();
        let want = (e - 1.0) / i + (e / i + (e - 1.0)) - 1.5;
        assert!((q - want).norm() < 1e-9, "{q} vs {want}");
    }

    #[test]
    fn single_function_gram_is_one() {
        let mu = IntensityMeasure::constant(1.0).unwrap();
        let l = psd_check(&MlParams::new(0.6).unwrap(), &[unit_step(2.0)], &mu).unwrap();
        assert_relative_eq!(l, 1.0, max_relative = 1e-15);
        assert!(psd_check(&MlParams::new(0.6).unwrap(), &[], &mu).is_err());
    }
}
