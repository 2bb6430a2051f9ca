//! Test statistics shared by the samplers and the verification harness.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Neumaier-compensated sum.
pub fn sum_compensated<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + c
}

/// Sample mean and the standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = sum_compensated(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = sum_compensated(xs.iter().map(|x| (x - mean).powi(2))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Mean of complex observations with its jackknife standard error
/// (`|·|` of the complex spread).
pub fn jackknife_mean(xs: &[Complex64]) -> (Complex64, f64) {
    let n = xs.len();
    let total: Complex64 = xs.iter().sum();
    let mean = total / n as f64;
    if n < 2 {
        return (mean, f64::INFINITY);
    }
    let m = n as f64;
    let spread: f64 = xs
        .iter()
        .map(|x| {
            let loo = (total - x) / (m - 1.0);
            (loo - mean).norm_sqr()
        })
        .sum();
    (mean, ((m - 1.0) / m * spread).sqrt())
}

/// Sample covariance of paired observations and a standard error from the
/// spread of the centered products.
pub fn covariance_stderr(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let prods: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let (mean, se) = mean_stderr(&prods);
    (mean * n / (n - 1.0), se)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Upper edges (exclusive) of the pooled bins, in units of the input bins.
    pub bin_edges: Vec<usize>,
}

/// Two-sample chi-square homogeneity test on histograms over the same bins.
///
/// Adjacent bins are pooled left to right until the expected count of each
/// sample under the pooled null is at least `min_expected`; a short last
/// group is merged into its neighbour.
pub fn chi_square_two_sample(a: &[u64], b: &[u64], min_expected: f64) -> ChiSquareTest {
    let len = a.len().max(b.len());
    let get = |h: &[u64], i: usize| h.get(i).copied().unwrap_or(0) as f64;
    let n1: f64 = a.iter().map(|&v| v as f64).sum();
    let n2: f64 = b.iter().map(|&v| v as f64).sum();
    let n = n1 + n2;
    let short = |sa: f64, sb: f64| {
        let t = sa + sb;
        n1 * t / n < min_expected || n2 * t / n < min_expected
    };

    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    let (mut sa, mut sb) = (0.0, 0.0);
    for i in 0..len {
        sa += get(a, i);
        sb += get(b, i);
        if !short(sa, sb) {
            groups.push((sa, sb, i + 1));
            sa = 0.0;
            sb = 0.0;
        }
    }
    if sa + sb > 0.0 {
        match groups.last_mut() {
            Some(g) => {
                g.0 += sa;
                g.1 += sb;
                g.2 = len;
            }
            None => groups.push((sa, sb, len)),
        }
    }

    let k1 = (n2 / n1).sqrt();
    let k2 = (n1 / n2).sqrt();
    let statistic: f64 = groups
        .iter()
        .filter(|g| g.0 + g.1 > 0.0)
        .map(|&(x, y, _)| (k1 * x - k2 * y).powi(2) / (x + y))
        .sum();
    let dof = groups.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map(|d| d.sf(statistic)).unwrap_or(f64::NAN)
    };
    ChiSquareTest {
        statistic,
        dof,
        p_value,
        bin_edges: groups.iter().map(|g| g.2).collect(),
    }
}

/// Histogram of non-negative integer observations.
pub fn histogram(xs: &[u64]) -> Vec<u64> {
    let top = xs.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut h = vec![0u64; top];
    for &x in xs {
        h[x as usize] += 1;
    }
    h
}

/// Kolmogorov-Smirnov distance `sup |F_n - F|` of a sorted sample.
pub fn ks_statistic<F: FnMut(f64) -> f64>(sorted: &[f64], mut cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic one-sample critical value `sqrt(-ln(level/2)/2) / sqrt(n)`.
pub fn ks_critical(n: usize, level: f64) -> f64 {
    (-0.5 * (0.5 * level).ln()).sqrt() / (n as f64).sqrt()
}

/// Asymptotic p-value of a one-sample KS distance, with the usual
/// small-sample correction of the argument.
pub fn ks_p_value(n: usize, d: f64) -> f64 {
    let rn = (n as f64).sqrt();
    let lambda = (rn + 0.12 + 0.11 / rn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn compensated_sum_of_repeated_value() {
        let v = 0.778_800_783_071_404_9;
        assert_eq!(sum_compensated(std::iter::repeat_n(v, 1_000_000)) / 1e6, v);
        assert_eq!(sum_compensated([1e100, 1.0, -1e100]), 1.0);
    }

    #[test]
    fn mean_and_stderr() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert_relative_eq!(s, (5.0f64 / 12.0).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn jackknife_of_mean_is_classical_stderr() {
        let xs: Vec<Complex64> = (0..50).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let (m, se) = jackknife_mean(&xs);
        let re: Vec<f64> = xs.iter().map(|z| z.re).collect();
        let im: Vec<f64> = xs.iter().map(|z| z.im).collect();
        let (mr, sr) = mean_stderr(&re);
        let (mi, si) = mean_stderr(&im);
        assert_relative_eq!(m.re, mr, max_relative = 1e-14);
        assert_relative_eq!(m.im, mi, max_relative = 1e-14);
        assert_relative_eq!(se, (sr * sr + si * si).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn chi_square_known_statistic() {
        // Equal sizes: Σ (a-b)²/(a+b).
        let t = chi_square_two_sample(&[10, 20, 30], &[20, 20, 20], 5.0);
        assert_relative_eq!(t.statistic, 100.0 / 30.0 + 0.0 + 100.0 / 50.0, max_relative = 1e-14);
        assert_eq!(t.dof, 2);
        assert_relative_eq!(t.p_value, (-t.statistic / 2.0).exp(), max_relative = 1e-12);
    }

    #[test]
    fn chi_square_pools_sparse_tail() {
        let t = chi_square_two_sample(&[50, 40, 3, 1, 1], &[45, 44, 2, 2, 0], 5.0);
        assert_eq!(t.bin_edges, vec![1, 5]);
        assert_eq!(t.dof, 1);
        let t = chi_square_two_sample(&[5], &[5], 5.0);
        assert_eq!(t.dof, 0);
        assert_eq!(t.p_value, 1.0);
    }

    #[test]
    fn ks_values() {
        assert_relative_eq!(ks_critical(1, 0.01), 1.6276, max_relative = 1e-4);
        assert!((ks_p_value(1000, 1.358 / 1000f64.sqrt()) - 0.05).abs() < 0.005);
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert_relative_eq!(ks_statistic(&xs, |x| x), 0.005, max_relative = 1e-12);
    }

    #[test]
    fn histogram_and_covariance() {
        assert_eq!(histogram(&[0, 2, 2, 5]), vec![1, 0, 2, 0, 0, 1]);
        let (c, _) = covariance_stderr(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]);
        assert_relative_eq!(c, 2.0, max_relative = 1e-14);
    }
}
