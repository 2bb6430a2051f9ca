//! Double-precision Taylor summation of `E_α^{(n)}(z) / E_α^{(n)}(0)`.

use crate::special::ln_gamma_ratio;
use num_complex::Complex64;

/// Normalized partial sum `Σ_k (c_k / c_0) z^k` with
/// `c_k = (k+n)! / (k! Γ(α(k+n)+1))`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Partial {
    pub sum: Complex64,
    /// Rounding plus truncation estimate, same units as `sum`.
    pub abs_err: f64,
}

/// `c_{k+1} / c_k`.
#[inline]
pub(crate) fn coefficient_ratio(alpha: f64, n: u32, k: usize) -> f64 {
    let kn = (k as f64) + f64::from(n);
    (kn + 1.0) / (k as f64 + 1.0) * (-ln_gamma_ratio(alpha * (kn + 1.0) + 1.0, alpha * kn + 1.0)).exp()
}

/// Sums until a geometric tail bound drops below `0.1 * max(rel |S|, abs)`.
///
/// The term ratio `|z| c_{k+1}/c_k` decreases monotonically in `k`, so once
/// it is below one the remaining tail is dominated by a geometric series.
/// Returns `None` when terms overflow or `max_terms` is exhausted.
pub(crate) fn taylor(
    alpha: f64,
    n: u32,
    z: Complex64,
    max_terms: usize,
    rel: f64,
    abs: f64,
) -> Option<Partial> {
    let zn = z.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    if zn == 0.0 {
        return Some(Partial { sum, abs_err: 0.0 });
    }
    // Σ (3k + 8)|t_k|: each term carries about 3k roundings from the recurrence.
    let mut weighted = 8.0;
    let mut ratio = coefficient_ratio(alpha, n, 0);
    for k in 0..max_terms {
        term = term * z * ratio;
        let t = term.norm();
        if !t.is_finite() || t > 1e300 {
            return None;
        }
        sum += term;
        weighted += (3.0 * (k as f64 + 1.0) + 8.0) * t;
        ratio = coefficient_ratio(alpha, n, k + 1);
        let rho = ratio * zn;
        if rho < 1.0 {
            let tail = t * rho / (1.0 - rho);
            let target = (rel * sum.norm()).max(abs);
            if tail <= 0.1 * target || (t == 0.0 && tail == 0.0) {
                return Some(Partial {
                    sum,
                    abs_err: f64::EPSILON * weighted + tail,
                });
            }
        }
    }
    None
}
