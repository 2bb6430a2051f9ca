//! One-sided α-stable laws with Laplace transform `E[e^{-tS}] = e^{-t^α}`,
//! and the mixing measure `ν_α`, the law of `τ = S^{-α}`, whose Laplace
//! transform is `E_α(-t)` and whose moments are `n!/Γ(αn+1)`.
//!
//! Density and distribution function come from Zolotarev's integral over
//! `φ ∈ (0, π)` with Kanter's function
//!
//! ```text
//! A(φ) = [sin(αφ)^α sin((1-α)φ)^{1-α} / sin φ]^{1/(1-α)},
//! F(s) = (1/π) ∫ exp(-c A(φ)) dφ,      c = s^{-α/(1-α)},
//! f(s) = α / ((1-α) π s) ∫ c A(φ) exp(-c A(φ)) dφ.
//! ```
//!
//! Sampling uses Kanter's representation `S = (A(U)/E)^{(1-α)/α}` with
//! `U ~ Uniform(0, π)` and `E ~ Exp(1)`.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::rng::RngStream;
use crate::special::ln_factorial_over_gamma;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    /// Stability index; `α = 1` is the degenerate law `S = τ = 1`.
    pub alpha: f64,
    /// Integrand evaluations allowed per density or CDF value.
    pub quad_points: usize,
}

impl StableParams {
    pub fn new(alpha: f64) -> Result<Self> {
        let p = Self { alpha, quad_points: 4096 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha = {} must lie in (0, 1]", self.alpha)));
        }
        if self.quad_points < 30 {
            return Err(Error::InvalidParameter(format!("quad_points = {} is below 30", self.quad_points)));
        }
        Ok(())
    }

    fn is_degenerate(&self) -> bool {
        self.alpha == 1.0
    }
}

/// `ln A(φ)` for `0 < φ < π`.
fn ln_kanter(alpha: f64, phi: f64) -> f64 {
    let b = 1.0 - alpha;
    (alpha * (alpha * phi).sin().ln() + b * (b * phi).sin().ln() - phi.sin().ln()) / b
}

/// Relative accuracy requested from the φ-quadrature.
const REL_TOL: f64 = 1e-11;

/// `∫_0^π h(c A(φ)) dφ` with breakpoints where `c A` crosses the scales on
/// which `h` varies.
fn zolotarev<H: Fn(f64) -> f64>(p: &StableParams, ln_c: f64, h: H) -> Result<f64> {
    let alpha = p.alpha;
    let ln_y = |phi: f64| ln_c + ln_kanter(alpha, phi);
    // A increases from (1-α) α^{α/(1-α)} at 0 to ∞ at π.
    let lo = 1e-9;
    let hi = PI * (1.0 - 1e-15);
    if ln_y(lo) > 745f64.ln() {
        return Ok(0.0);
    }
    let mut breaks = Vec::new();
    for level in [-4.0f64, -1.0, 0.0, 1.0, 2.5, 4.0, 5.5] {
        if ln_y(lo) < level && ln_y(hi) > level {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if ln_y(m) < level {
                    a = m;
                } else {
                    b = m;
                }
            }
            breaks.push(0.5 * (a + b));
        }
    }
    let q = integrate(
        |phi: f64| {
            let y = ln_y(phi).exp();
            if y.is_finite() {
                h(y)
            } else {
                0.0
            }
        },
        0.0,
        PI,
        &breaks,
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: REL_TOL,
            max_evals: p.quad_points,
        },
    );
    if !q.converged && q.abs_error > 1e-14 {
        return Err(Error::Quadrature(format!(
            "alpha = {alpha}: error {:.2e} on integral {:.6e} after {} evaluations",
            q.abs_error, q.value, q.evaluations
        )));
    }
    Ok(q.value)
}

/// Density `f_α(s)` of the one-sided stable law.
pub fn stable_density(p: &StableParams, s: f64) -> Result<f64> {
    p.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("density requested at s = {s}")));
    }
    if p.is_degenerate() {
        return Err(Error::Domain("alpha = 1 is a point mass at 1 and has no density".into()));
    }
    let b = 1.0 - p.alpha;
    let ln_c = -p.alpha / b * s.ln();
    let i = zolotarev(p, ln_c, |y| y * (-y).exp())?;
    Ok((p.alpha / (b * PI * s) * i).max(0.0))
}

/// Distribution function `P(S <= s)`.
pub fn stable_cdf(p: &StableParams, s: f64) -> Result<f64> {
    p.validate()?;
    if s.is_nan() {
        return Err(Error::Domain("cdf requested at NaN".into()));
    }
    if p.is_degenerate() {
        return Ok(if s >= 1.0 { 1.0 } else { 0.0 });
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    if s == f64::INFINITY {
        return Ok(1.0);
    }
    let ln_c = -p.alpha / (1.0 - p.alpha) * s.ln();
    let i = zolotarev(p, ln_c, |y| (-y).exp())?;
    Ok((i / PI).clamp(0.0, 1.0))
}

/// `ln A(U) - ln E` for one Kanter draw.
fn kanter_log(alpha: f64, rng: &mut RngStream) -> f64 {
    let u = PI * rng.open01();
    ln_kanter(alpha, u) - rng.exp1().ln()
}

/// One draw of `S`.
pub fn sample_stable(p: &StableParams, rng: &mut RngStream) -> f64 {
    if p.is_degenerate() {
        return 1.0;
    }
    ((1.0 - p.alpha) / p.alpha * kanter_log(p.alpha, rng)).exp()
}

/// One draw of `τ ~ ν_α`, i.e. `S^{-α}`, formed without passing through `S`.
pub fn sample_nu(p: &StableParams, rng: &mut RngStream) -> f64 {
    if p.is_degenerate() {
        return 1.0;
    }
    (-(1.0 - p.alpha) * kanter_log(p.alpha, rng)).exp()
}

/// `m_n(ν_α) = n!/Γ(αn+1)`.
pub fn nu_moment(alpha: f64, n: u32) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    let ln = ln_factorial_over_gamma(alpha, n);
    if ln > 709.0 {
        return Err(Error::Overflow(format!("m_{n} ~ exp({ln:.1})")));
    }
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn levy(s: f64) -> f64 {
        (-0.25 / s).exp() / (2.0 * PI.sqrt() * s.powf(1.5))
    }

    #[test]
    fn half_order_density_is_levy() {
        let p = StableParams::new(0.5).unwrap();
        for s in [1e-3, 0.05, 0.3, 1.0, 4.0, 50.0, 1e4] {
            assert_relative_eq!(stable_density(&p, s).unwrap(), levy(s), max_relative = 1e-10);
        }
        assert!(stable_density(&p, 1e-4).unwrap() < 1e-6);
    }

    #[test]
    fn half_order_cdf_is_erfc() {
        let p = StableParams::new(0.5).unwrap();
        for s in [0.01f64, 0.2, 1.0, 10.0, 1e3] {
            let want = libm::erfc(0.5 / s.sqrt());
            assert!((stable_cdf(&p, s).unwrap() - want).abs() < 1e-11);
        }
    }

    #[test]
    fn degenerate_order_is_a_point_mass() {
        let p = StableParams::new(1.0).unwrap();
        let mut rng = RngStream::new(1, 0);
        assert_eq!(sample_stable(&p, &mut rng), 1.0);
        assert_eq!(sample_nu(&p, &mut rng), 1.0);
        assert!(stable_density(&p, 1.0).is_err());
        assert_eq!(stable_cdf(&p, 0.999).unwrap(), 0.0);
        assert_eq!(stable_cdf(&p, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn moments() {
        assert_eq!(nu_moment(0.3, 0).unwrap(), 1.0);
        assert_relative_eq!(nu_moment(1.0, 7).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(nu_moment(0.5, 2).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(nu_moment(0.5, 1).unwrap(), std::f64::consts::FRAC_2_SQRT_PI, max_relative = 1e-14);
        assert!(matches!(nu_moment(0.1, 200), Err(Error::Overflow(_))));
    }

    #[test]
    fn draws_are_positive_and_reproducible() {
        let p = StableParams::new(0.3).unwrap();
        let mut a = RngStream::new(5, 2);
        let mut b = RngStream::new(5, 2);
        for _ in 0..1000 {
            let s = sample_stable(&p, &mut a);
            assert!(s > 0.0);
            assert_eq!(s, sample_stable(&p, &mut b));
        }
    }
}
