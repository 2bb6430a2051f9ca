//! Hankel-contour representation of `E_α^{(n)}(z)`.
//!
//! With the rays `s = r e^{±iθ}` and the substitution `u = r^α`,
//!
//! ```text
//! E_α^{(n)}(z) = 1/(2πi) [∫_0^∞ F_θ(u) du - ∫_0^∞ F_{-θ}(u) du] + residue,
//! F_θ(u) = (n!/α) exp(u^{1/α} e^{iθ}) e^{iαθ} / (u e^{iαθ} - z)^{n+1},
//! ```
//!
//! where the residue `(1/α) exp(z^{1/α})` is present when `|arg z| < αθ`.
//! For real `z` the two rays are complex conjugates and only one is
//! integrated.

use crate::quadrature::{integrate, QuadOptions};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Exponent reached by `u^{1/α} cos θ` at the truncation point.
pub(crate) const DECAY: f64 = 42.0;

/// Rounding error of the oscillatory integrands, in units of `ε ∫|F|`.
const ROUNDING: f64 = 16.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct ContourValue {
    pub value: Complex64,
    pub abs_err: f64,
}

/// Ray angle used for `(α, n, z)`.
pub(crate) fn ray_angle(alpha: f64, n: u32, z: Complex64) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        if n == 0 || alpha <= 0.5 {
            return PI;
        }
        return (PI / (2.0 * alpha)).max(0.55 * PI);
    }
    let arg = z.arg().abs();
    let gap = |theta: f64| (arg - alpha * theta).abs();
    if gap(PI) >= 0.1 * PI {
        return PI;
    }
    [PI, 0.85 * PI, 0.7 * PI, 0.55 * PI]
        .into_iter()
        .max_by(|a, b| gap(*a).total_cmp(&gap(*b)))
        .unwrap_or(PI)
}

/// `e^{ln_pref} / n! · E_α^{(n)}(z)`, i.e. the contour integral with the
/// factorial replaced by an arbitrary log-prefactor.
///
/// Residues are only supported for `n = 0`; for real negative `z` there is
/// never one. The caller guarantees `z != 0` and `0 < α < 1`.
pub(crate) fn hankel(
    alpha: f64,
    n: u32,
    z: Complex64,
    ln_pref: f64,
    theta: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> ContourValue {
    let inv_alpha = 1.0 / alpha;
    let u_max = (DECAY / theta.cos().abs()).powf(alpha);
    let np1 = f64::from(n) + 1.0;

    let mut breaks: Vec<f64> = (1..16).map(|j| (f64::from(j) / 16.0).powf(alpha) * u_max).collect();
    breaks.push(z.norm());

    let opts = QuadOptions {
        abs_tol: 0.05 * abs_tol,
        rel_tol: 0.05 * rel_tol,
        max_evals: 40_000,
    };
    if z.im == 0.0 && z.re < 0.0 && n == 0 && theta == PI {
        return negative_axis(alpha, -z.re, ln_pref, &breaks, u_max, opts);
    }

    let ray = |sign: f64, opts: QuadOptions| {
        let rot = Complex64::from_polar(1.0, sign * theta);
        let rot_a = Complex64::from_polar(1.0, sign * alpha * theta);
        integrate(
            move |u: f64| {
                let r = u.powf(inv_alpha);
                let w = rot_a * u - z;
                let expo = rot * r + ln_pref - w.ln() * np1;
                expo.exp() * rot_a * inv_alpha
            },
            0.0,
            u_max,
            &breaks,
            opts,
        )
    };
    // (value, quadrature error, rounding error, largest ray integral)
    let pass = |opts: QuadOptions| {
        if z.im == 0.0 {
            let q = ray(1.0, opts);
            let rounding = ROUNDING * f64::EPSILON * q.abs_integral / PI;
            (Complex64::new(q.value.im / PI, 0.0), q.abs_error / PI, rounding, q.value.norm() / PI)
        } else {
            let qp = ray(1.0, opts);
            let qm = ray(-1.0, opts);
            let v = (qp.value - qm.value) / Complex64::new(0.0, 2.0 * PI);
            let rounding = ROUNDING * f64::EPSILON * (qp.abs_integral + qm.abs_integral) / (2.0 * PI);
            let mag = qp.value.norm().max(qm.value.norm()) / (2.0 * PI);
            (v, (qp.abs_error + qm.abs_error) / (2.0 * PI), rounding, mag)
        }
    };

    let residue = if z.arg().abs() < alpha * theta {
        debug_assert_eq!(n, 0);
        let w = z.powf(inv_alpha);
        let res = (w + ln_pref).exp() * inv_alpha;
        // exp amplifies the rounding of z^{1/α} by |z^{1/α}|.
        Some((res, (4.0 + w.norm()) * f64::EPSILON * res.norm()))
    } else {
        None
    };
    let (res, res_err) = residue.unwrap_or((Complex64::new(0.0, 0.0), 0.0));

    let (integral, quad_err, rounding, mag) = pass(opts);
    let mut value = integral + res;
    let mut abs_err = quad_err + rounding + res_err;
    let target = abs_tol.max(rel_tol * value.norm());
    if abs_err > target && rounding + res_err < target && mag > value.norm() && rel_tol > 0.0 {
        // The rays cancel; tighten the quadrature to the size of the result.
        let tighter = QuadOptions {
            rel_tol: opts.rel_tol * (value.norm() / mag).max(1e-6),
            ..opts
        };
        let (i2, q2, r2, _) = pass(tighter);
        value = i2 + res;
        abs_err = q2 + r2 + res_err;
    }
    ContourValue { value, abs_err }
}

/// `E_α(-x)` from the single-signed real form of the `θ = π` ray,
/// `sin(απ)/(απ) ∫ exp(-u^{1/α}) x / (u² + 2ux cos απ + x²) du`.
fn negative_axis(alpha: f64, x: f64, ln_pref: f64, breaks: &[f64], u_max: f64, opts: QuadOptions) -> ContourValue {
    let inv_alpha = 1.0 / alpha;
    let s = (alpha * PI).sin();
    // 1 + cos(απ), formed without cancellation as α → 1.
    let h = 2.0 * ((1.0 - alpha) * PI / 2.0).sin().powi(2);
    let pref = s / (alpha * PI) * ln_pref.exp();
    let q = integrate(
        |u: f64| {
            let d = (u - x) * (u - x) + 2.0 * u * x * h;
            (-u.powf(inv_alpha)).exp() * x / d
        },
        0.0,
        u_max,
        breaks,
        opts,
    );
    ContourValue {
        value: Complex64::new(pref * q.value, 0.0),
        abs_err: pref * (q.abs_error + 8.0 * f64::EPSILON * q.abs_integral),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eval(alpha: f64, z: Complex64) -> Complex64 {
        let theta = ray_angle(alpha, 0, z);
        let c = hankel(alpha, 0, z, 0.0, theta, 1e-14, 0.0);
        assert!(c.abs_err <= 1e-13 * c.value.norm(), "{c:?}");
        c.value
    }

    #[test]
    fn negative_real_axis() {
        assert_relative_eq!(eval(0.5, Complex64::new(-1.0, 0.0)).re, 0.427_583_576_155_807, max_relative = 1e-13);
        assert_relative_eq!(eval(0.6, Complex64::new(-10.0, 0.0)).re, 0.046_589_654_426_804_28, max_relative = 1e-13);
        assert_relative_eq!(eval(0.3, Complex64::new(-3.0, 0.0)).re, 0.211_802_633_196_435_78, max_relative = 1e-13);
    }

    #[test]
    fn residue_branch_for_positive_and_complex_arguments() {
        assert_relative_eq!(eval(0.5, Complex64::new(1.0, 0.0)).re, 5.008_980_080_762_283, max_relative = 1e-13);
        let v = eval(0.8, Complex64::new(-1.0, 2.0));
        assert!((v - Complex64::new(-0.007_919_416_261_255_211_6, 0.230_810_624_515_669_07)).norm() < 1e-13);
    }

    #[test]
    fn derivatives_on_rotated_rays() {
        let z = Complex64::new(-2.0, 0.0);
        let theta = ray_angle(0.4, 3, z);
        let c = hankel(0.4, 3, z, 6f64.ln(), theta, 1e-14, 0.0);
        assert_relative_eq!(c.value.re, 0.086_710_675_367_525_996, max_relative = 1e-12);
    }
}
