//! Certified multiple-precision enclosures of `E_α^{(n)}(z)` for testing.
//!
//! The Taylor series is summed in MPFR arithmetic. Truncation is bounded by
//! a geometric tail (the term ratio decreases monotonically) and rounding by
//! a per-term ulp count times `Σ|t_k|`. Precision is raised until both fit
//! inside the requested width.

use crate::error::{Error, Result};
use crate::special::ln_gamma_ratio;
use num_complex::Complex64;
use rug::Float;

/// Hard ceiling on working precision.
const MAX_PREC: u32 = 1 << 18;

/// A disc in the complex plane: `|w - center| <= radius`.
#[derive(Debug, Clone)]
pub struct Enclosure {
    pub re: Float,
    pub im: Float,
    pub radius: Float,
}

impl Enclosure {
    pub fn midpoint(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64_round(rug::float::Round::Up)
    }

    fn center_norm(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// Radius divided by the magnitude of the center.
    pub fn relative_radius(&self) -> f64 {
        let norm = self.center_norm();
        if norm.is_zero() {
            return if self.radius.is_zero() { 0.0 } else { f64::INFINITY };
        }
        (self.radius.clone() / norm).to_f64()
    }

    /// Whether `v` lies in the disc after widening the radius by
    /// `widen_rel * |center|`.
    pub fn contains(&self, v: Complex64, widen_rel: f64) -> bool {
        let prec = self.re.prec();
        let dr = Float::with_val(prec, v.re) - &self.re;
        let di = Float::with_val(prec, v.im) - &self.im;
        let dist = dr.hypot(&di);
        let slack = self.center_norm() * widen_rel;
        dist <= slack + &self.radius
    }
}

#[derive(Clone)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn mul(&self, o: &Cx, prec: u32) -> Cx {
        let re = Float::with_val(prec, &self.re * &o.re) - Float::with_val(prec, &self.im * &o.im);
        let im = Float::with_val(prec, &self.re * &o.im) + Float::with_val(prec, &self.im * &o.re);
        Cx { re, im }
    }
    fn norm(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }
}

/// Enclosure of `E_α(z)` with relative radius at most `10^{-digits}/4`.
pub fn ml_oracle(alpha: f64, z: Complex64, digits: u32) -> Result<Enclosure> {
    ml_oracle_deriv(alpha, 0, z, digits, 20_000)
}

/// Enclosure of `E_α^{(n)}(z)`.
pub fn ml_oracle_deriv(alpha: f64, n: u32, z: Complex64, digits: u32, max_terms: usize) -> Result<Enclosure> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    let target = 0.25 * 10f64.powi(-(digits as i32));
    let mut prec = (f64::from(digits) * 3.33).ceil() as u32 + 64;
    loop {
        match sum_series(alpha, n, z, prec, max_terms, target)? {
            Attempt::Done(e) => return Ok(e),
            Attempt::NeedBits(extra) => {
                prec += extra;
                if prec > MAX_PREC {
                    return Err(Error::Enclosure(format!("precision would exceed {MAX_PREC} bits")));
                }
            }
        }
    }
}

enum Attempt {
    Done(Enclosure),
    NeedBits(u32),
}

fn sum_series(alpha: f64, n: u32, z: Complex64, prec: u32, max_terms: usize, target: f64) -> Result<Attempt> {
    let alpha_f = Float::with_val(prec, alpha);
    let gamma_at = |m: u64| -> Float {
        let arg = Float::with_val(prec, &alpha_f * m) + 1u32;
        arg.gamma()
    };
    let ulp = Float::with_val(prec, 1u32) >> prec;

    // (k+n)!/k! carried as an exact-ish product, k = 0 gives n!.
    let mut falling = Float::with_val(prec, 1u32);
    for j in 1..=n {
        falling *= j;
    }
    let c0 = Float::with_val(prec, &falling / gamma_at(u64::from(n)));
    if z.re == 0.0 && z.im == 0.0 {
        let radius = if n == 0 || alpha == 1.0 {
            Float::with_val(prec, 0u32)
        } else {
            Float::with_val(prec, &c0 * &ulp) * 4u32
        };
        return Ok(Attempt::Done(Enclosure {
            re: c0,
            im: Float::with_val(prec, 0u32),
            radius,
        }));
    }

    let zc = Cx {
        re: Float::with_val(prec, z.re),
        im: Float::with_val(prec, z.im),
    };
    let zn = z.norm();
    let mut power = Cx {
        re: Float::with_val(prec, 1u32),
        im: Float::with_val(prec, 0u32),
    };
    let mut s_re = c0.clone();
    let mut s_im = Float::with_val(prec, 0u32);
    let mut abs_sum = c0.clone();

    for k in 1..=max_terms {
        let kk = k as u64;
        falling = Float::with_val(prec, &falling * (kk + u64::from(n)));
        falling /= kk;
        power = power.mul(&zc, prec);
        let coef = Float::with_val(prec, &falling / gamma_at(kk + u64::from(n)));
        let t_re = Float::with_val(prec, &coef * &power.re);
        let t_im = Float::with_val(prec, &coef * &power.im);
        let t_abs = Float::with_val(prec, &coef * power.norm());
        s_re += &t_re;
        s_im += &t_im;
        abs_sum += &t_abs;

        // Upper bound on |t_{k+1}/t_k|, valid for every later ratio as well.
        let kn = (k + n as usize) as f64;
        let rho = zn * (kn + 1.0) / (k as f64 + 1.0)
            * (-ln_gamma_ratio(alpha * (kn + 1.0) + 1.0, alpha * kn + 1.0)).exp()
            * (1.0 + 1e-10);
        if rho >= 1.0 {
            continue;
        }
        let tail = t_abs * (rho / (1.0 - rho));
        let s_norm = s_re.clone().hypot(&s_im);
        let width = Float::with_val(prec, &s_norm * target);
        if tail > Float::with_val(prec, &width * 0.5f64) {
            continue;
        }
        let rounding = Float::with_val(prec, &abs_sum * &ulp) * (8 * k as u64 + 40 + u64::from(n));
        if rounding > Float::with_val(prec, &width * 0.5f64) {
            let ratio = if width.is_zero() {
                f64::INFINITY
            } else {
                (rounding / &width).to_f64()
            };
            let extra = if ratio.is_finite() { ratio.log2().ceil() as u32 + 16 } else { prec };
            return Ok(Attempt::NeedBits(extra));
        }
        let radius = tail + rounding;
        return Ok(Attempt::Done(Enclosure { re: s_re, im: s_im, radius }));
    }
    Err(Error::Enclosure(format!(
        "tail bound not certified within {max_terms} terms (alpha = {alpha}, |z| = {zn})"
    )))
}
