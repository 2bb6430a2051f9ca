//! Gamma-function helpers shared by the series and moment code.
//!
//! `libm` supplies `tgamma`/`lgamma`; what lives here are the ratio forms
//! that need more care than `exp(lgamma(a) - lgamma(b))` provides once the
//! arguments get large.

/// Largest argument for which `tgamma` stays finite.
const TGAMMA_MAX_ARG: f64 = 171.0;

/// Natural log of `Γ(x)` for `x > 0`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Γ(x)`, possibly infinite past ~171.6.
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Stirling series for `ln Γ(x) - ((x - 1/2) ln x - x + ln √(2π))`, valid for x ≥ 10.
fn stirling_correction(x: f64) -> f64 {
    // B_{2k} / (2k (2k-1)) for k = 1..8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Γ(a) - ln Γ(b)` for positive `a`, `b`, accurate even when both are
/// large and the difference is small.
pub fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if a == b {
        return 0.0;
    }
    if a < TGAMMA_MAX_ARG && b < TGAMMA_MAX_ARG {
        let ga = gamma(a);
        let gb = gamma(b);
        if ga.is_finite() && gb.is_finite() && ga > 0.0 && gb > 0.0 {
            return (ga / gb).ln();
        }
    }
    if a < 10.0 || b < 10.0 {
        return ln_gamma(a) - ln_gamma(b);
    }
    // (a - 1/2) ln a - (b - 1/2) ln b - (a - b), rearranged so that the
    // large logarithms cancel analytically.
    let d = a - b;
    let main = d * a.ln() + (b - 0.5) * (d / b).ln_1p() - d;
    main + stirling_correction(a) - stirling_correction(b)
}

/// `n! / Γ(α n + 1)`, which is both `E_α^{(n)}(0)` and the `n`-th moment of
/// the Mittag-Leffler mixing law. Exactly 1 for `α = 1` or `n = 0`.
pub fn factorial_over_gamma(alpha: f64, n: u32) -> f64 {
    if n == 0 || alpha == 1.0 {
        return 1.0;
    }
    let nf = f64::from(n);
    ln_gamma_ratio(nf + 1.0, alpha * nf + 1.0).exp()
}

/// Log of [`factorial_over_gamma`]; finite for every `n`.
pub fn ln_factorial_over_gamma(alpha: f64, n: u32) -> f64 {
    if n == 0 || alpha == 1.0 {
        return 0.0;
    }
    let nf = f64::from(n);
    ln_gamma_ratio(nf + 1.0, alpha * nf + 1.0)
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    let (n, k) = (f64::from(n), f64::from(k));
    ln_gamma_ratio(n + 1.0, k + 1.0) - ln_gamma(n - k + 1.0)
}

/// Exact binomial coefficient as `f64` (exact up to ~2^53).
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc.round()
}
