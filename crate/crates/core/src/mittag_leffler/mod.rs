//! The Mittag-Leffler function `E_α(z) = Σ z^k / Γ(αk + 1)`, its derivatives
//! on the negative real axis, and the fractional Poisson count weights.
//!
//! Evaluation is hybrid. The Taylor series is tried first with a rounding
//! and truncation estimate; when cancellation makes it unreliable the value
//! is taken from a Hankel-contour integral instead. Either way the returned
//! value meets `rel_tol` or an error is raised.

mod contour;
mod contour_mp;
pub mod oracle;
mod series;

use crate::error::{Error, Result};
use crate::special::{ln_factorial_over_gamma, ln_gamma};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use oracle::{ml_oracle, ml_oracle_deriv, Enclosure};

/// Largest exponent whose `exp` is finite.
const LN_MAX: f64 = 709.0;

/// Absolute accuracy demanded of each count weight.
pub const WEIGHT_ABS_TOL: f64 = 1e-13;

/// Order and accuracy controls for every Mittag-Leffler evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlParams {
    pub alpha: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Radius beyond which arguments with positive real part are refused.
    pub z_max: f64,
    /// Largest derivative order accepted.
    pub n_max: u32,
}

impl MlParams {
    pub fn new(alpha: f64) -> Result<Self> {
        let p = Self {
            alpha,
            rel_tol: 1e-13,
            max_terms: 10_000,
            z_max: 50.0,
            n_max: 200,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Result<Self> {
        self.rel_tol = rel_tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha = {} must lie in (0, 1]", self.alpha)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-6) {
            return Err(Error::InvalidParameter(format!("rel_tol = {} must lie in (0, 1e-6)", self.rel_tol)));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidParameter("max_terms must be positive".into()));
        }
        if !(self.z_max > 0.0) {
            return Err(Error::InvalidParameter("z_max must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Tol {
    Rel(f64),
    Abs(f64),
}

impl Tol {
    fn met(self, value: Complex64, err: f64) -> bool {
        match self {
            Tol::Rel(r) => err <= r * value.norm(),
            Tol::Abs(a) => err <= a,
        }
    }
}

/// `exp(ln_scale) · E_α^{(n)}(z)` for `0 < α < 1`, `z != 0`.
fn evaluate(alpha: f64, n: u32, z: Complex64, ln_scale: f64, tol: Tol, max_terms: usize) -> Result<Complex64> {
    let ln_c0 = ln_scale + ln_factorial_over_gamma(alpha, n);
    let (rel, abs) = match tol {
        Tol::Rel(r) => (r, 0.0),
        Tol::Abs(a) => (0.0, a * (-ln_c0).exp()),
    };

    let mut best: Option<(Complex64, f64)> = None;
    if let Some(p) = series::taylor(alpha, n, z, max_terms, rel, abs) {
        let ln_mag = p.sum.norm().ln() + ln_c0;
        if ln_mag > LN_MAX {
            // A cancelling sum can be huge without the value being so.
            if p.abs_err <= 0.5 * p.sum.norm() {
                return Err(Error::Overflow(format!("|E| ~ exp({ln_mag:.1})")));
            }
        } else {
            let scale = ln_c0.exp();
            let value = p.sum * scale;
            let err = p.abs_err * scale;
            let strict = match tol {
                Tol::Rel(r) => Tol::Rel(0.25 * r),
                Tol::Abs(a) => Tol::Abs(0.25 * a),
            };
            if strict.met(value, err) {
                return Ok(value);
            }
            best = Some((value, err));
        }
    }

    let theta = contour::ray_angle(alpha, n, z);
    if z.arg().abs() < alpha * theta {
        let ln_res = z.powf(1.0 / alpha).re - alpha.ln() + ln_scale;
        if ln_res > LN_MAX {
            return Err(Error::Overflow(format!("residue ~ exp({ln_res:.1})")));
        }
    }
    let ln_pref = ln_scale + ln_gamma(f64::from(n) + 1.0);
    let (r, a) = match tol {
        Tol::Rel(r) => (r, 0.0),
        Tol::Abs(a) => (0.0, a),
    };
    let c = contour::hankel(alpha, n, z, ln_pref, theta, r, a);
    if tol.met(c.value, c.abs_err) && c.value.re.is_finite() && c.value.im.is_finite() {
        return Ok(c.value);
    }
    if let Some((value, err)) = best {
        if tol.met(value, err) {
            return Ok(value);
        }
    }
    let m = contour_mp::hankel(alpha, n, z, ln_pref, theta, r, a);
    if tol.met(m.value, m.abs_err) && m.value.re.is_finite() && m.value.im.is_finite() {
        return Ok(m.value);
    }
    let (value, err) = [best, Some((c.value, c.abs_err)), Some((m.value, m.abs_err))]
        .into_iter()
        .flatten()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("contour estimates present");
    Err(Error::Convergence(format!(
        "alpha = {alpha}, n = {n}, z = {z}: best estimate {value} with error {err:.3e}"
    )))
}

/// `E_α(z)`.
///
/// Any `z` with `Re z <= 0` is accepted; otherwise `|z| <= z_max` is
/// required.
pub fn ml_eval(p: &MlParams, z: Complex64) -> Result<Complex64> {
    p.validate()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re > 0.0 && z.norm() > p.z_max {
        return Err(Error::Domain(format!("|z| = {} exceeds z_max = {} with Re z > 0", z.norm(), p.z_max)));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if p.alpha == 1.0 {
        if z.re > LN_MAX {
            return Err(Error::Overflow(format!("exp({})", z.re)));
        }
        return Ok(z.exp());
    }
    evaluate(p.alpha, 0, z, 0.0, Tol::Rel(p.rel_tol), p.max_terms)
}

/// Real-argument convenience wrapper around [`ml_eval`].
pub fn ml_eval_real(p: &MlParams, x: f64) -> Result<f64> {
    ml_eval(p, Complex64::new(x, 0.0)).map(|v| v.re)
}

/// `E_α^{(n)}(x)` for `x <= 0`, which is non-negative.
pub fn ml_deriv(p: &MlParams, n: u32, x: f64) -> Result<f64> {
    p.validate()?;
    if !(x <= 0.0) {
        return Err(Error::Domain(format!("derivative requested at x = {x} > 0")));
    }
    if n > p.n_max {
        return Err(Error::Domain(format!("n = {n} exceeds n_max = {}", p.n_max)));
    }
    if x == 0.0 {
        let ln = ln_factorial_over_gamma(p.alpha, n);
        if ln > LN_MAX {
            return Err(Error::Overflow(format!("E^({n})(0) ~ exp({ln:.1})")));
        }
        return Ok(ln.exp());
    }
    if p.alpha == 1.0 {
        return Ok(x.exp());
    }
    let v = evaluate(p.alpha, n, Complex64::new(x, 0.0), 0.0, Tol::Rel(p.rel_tol), p.max_terms)?;
    Ok(v.re.max(0.0))
}

/// Survival probability `Ψ(σ) = E_α(-σ^α)` of the fractional Poisson process.
pub fn survival(p: &MlParams, sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::Domain(format!("sigma = {sigma} must be non-negative")));
    }
    ml_eval_real(p, -sigma.powf(p.alpha))
}

/// Fractional Poisson count law on a window of intensity mass `mass`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountWeights {
    pub alpha: f64,
    pub mass: f64,
    /// `w_n = mass^n E_α^{(n)}(-mass) / n!` for `n = 0..=N`.
    pub weights: Vec<f64>,
    /// `1 - Σ w_n`, clamped at zero.
    pub tail_bound: f64,
}

impl CountWeights {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum()
    }

    fn finish(alpha: f64, mass: f64, weights: Vec<f64>) -> Self {
        let tail_bound = (1.0 - weights.iter().sum::<f64>()).max(0.0);
        Self { alpha, mass, weights, tail_bound }
    }
}

/// One count weight `mass^n E_α^{(n)}(-mass) / n!`.
pub fn count_weight(p: &MlParams, mass: f64, n: u32) -> Result<f64> {
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::Domain(format!("mass = {mass} must be finite and non-negative")));
    }
    if mass == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = f64::from(n);
    if p.alpha == 1.0 {
        return Ok((nf * mass.ln() - mass - ln_gamma(nf + 1.0)).exp());
    }
    let ln_scale = nf * mass.ln() - ln_gamma(nf + 1.0);
    let v = evaluate(p.alpha, n, Complex64::new(-mass, 0.0), ln_scale, Tol::Abs(WEIGHT_ABS_TOL), p.max_terms)?;
    Ok(v.re.max(0.0))
}

/// Count weights `w_0..=w_{n_max}`.
pub fn count_weights(p: &MlParams, mass: f64, n_max: u32) -> Result<CountWeights> {
    p.validate()?;
    if n_max > p.n_max {
        return Err(Error::Domain(format!("n_max = {n_max} exceeds the configured {}", p.n_max)));
    }
    let weights = (0..=n_max).map(|n| count_weight(p, mass, n)).collect::<Result<Vec<_>>>()?;
    Ok(CountWeights::finish(p.alpha, mass, weights))
}

/// Count weights extended until `tail_bound < tail_target`.
pub fn count_weights_adaptive(p: &MlParams, mass: f64, tail_target: f64) -> Result<CountWeights> {
    p.validate()?;
    let mut weights = Vec::new();
    let mut total = 0.0;
    for n in 0..=p.n_max {
        let w = count_weight(p, mass, n)?;
        weights.push(w);
        total += w;
        // Past the mode, a zero weight means the rest underflow too.
        if 1.0 - total < tail_target || (w == 0.0 && n as f64 > mass) {
            return Ok(CountWeights::finish(p.alpha, mass, weights));
        }
    }
    Err(Error::Convergence(format!(
        "tail {:.3e} still above {tail_target:.1e} at n = {}",
        1.0 - total,
        p.n_max
    )))
}
