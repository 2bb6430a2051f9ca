use frakpoisson_core::quadrature::{integrate, QuadOptions};
use frakpoisson_core::stats::{ks_critical, ks_statistic, mean_stderr};
use frakpoisson_core::{ml_eval, nu_moment, sample_nu, sample_stable, stable_cdf, stable_density, MlParams, RngStream, StableParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn stable(alpha: f64) -> StableParams {
    StableParams::new(alpha).unwrap()
}

#[test]
fn mittag_leffler_bridge() {
    for (k, alpha) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        let p = stable(alpha);
        let mut rng = RngStream::new(101, k as u64);
        let taus: Vec<f64> = (0..1_000_000).map(|_| sample_nu(&p, &mut rng)).collect();
        for z in [Complex64::new(0.5, 0.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0)] {
            let re: Vec<f64> = taus.iter().map(|t| (-z * t).exp().re).collect();
            let im: Vec<f64> = taus.iter().map(|t| (-z * t).exp().im).collect();
            let (mr, sr) = mean_stderr(&re);
            let (mi, si) = mean_stderr(&im);
            let exact = ml_eval(&MlParams::new(alpha).unwrap(), -z).unwrap();
            assert!((mr - exact.re).abs() <= 4.0 * sr, "alpha {alpha} z {z}: re {mr} vs {}", exact.re);
            assert!((mi - exact.im).abs() <= 4.0 * si + 1e-15, "alpha {alpha} z {z}: im {mi} vs {}", exact.im);
        }
    }
}

#[test]
fn moments_match() {
    for (k, alpha) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        let p = stable(alpha);
        let mut rng = RngStream::new(202, k as u64);
        let taus: Vec<f64> = (0..1_000_000).map(|_| sample_nu(&p, &mut rng)).collect();
        let top = if alpha <= 0.4 { 4 } else { 6 };
        for n in 1..=top {
            let xs: Vec<f64> = taus.iter().map(|t| t.powi(n)).collect();
            let (m, s) = mean_stderr(&xs);
            let exact = nu_moment(alpha, n as u32).unwrap();
            assert!((m - exact).abs() <= 4.0 * s, "alpha {alpha} n {n}: {m} ± {s} vs {exact}");
        }
    }
}

#[test]
fn stable_draws_pass_kolmogorov_smirnov() {
    for (k, alpha) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        let p = stable(alpha);
        let mut rng = RngStream::new(303, k as u64);
        let mut s: Vec<f64> = (0..100_000).map(|_| sample_stable(&p, &mut rng)).collect();
        s.sort_by(f64::total_cmp);
        let d = ks_statistic(&s, |x| stable_cdf(&p, x).unwrap());
        assert!(d < ks_critical(s.len(), 0.01), "alpha {alpha}: D = {d}");
    }
}

#[test]
fn cdf_is_the_integral_of_the_density() {
    for alpha in [0.3, 0.5, 0.7, 0.9] {
        let p = stable(alpha);
        for s in [0.05, 0.3, 1.0, 2.0, 8.0] {
            let q = integrate(
                |u: f64| if u <= 0.0 { 0.0 } else { stable_density(&p, u).unwrap() },
                0.0,
                s,
                &[],
                QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_evals: 20_000 },
            );
            let c = stable_cdf(&p, s).unwrap();
            assert!((q.value - c).abs() < 1e-9, "alpha {alpha} s {s}: {} vs {c}", q.value);
        }
    }
}

#[test]
fn laplace_transform_of_density() {
    let p = stable(0.7);
    let q = integrate(
        |u: f64| if u <= 0.0 { 0.0 } else { (-u).exp() * stable_density(&p, u).unwrap() },
        0.0,
        200.0,
        &[1.0, 5.0, 20.0],
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_evals: 50_000 },
    );
    assert!((q.value - (-1f64).exp()).abs() < 1e-8, "{}", q.value);
}

#[test]
fn nearly_degenerate_order_concentrates() {
    let p = stable(0.999);
    let mut rng = RngStream::new(4, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| (-2.0 * sample_stable(&p, &mut rng)).exp()).collect();
    let (m, _) = mean_stderr(&xs);
    assert!((m - (-2f64).exp()).abs() < 5e-3, "{m}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_is_non_negative_and_cdf_monotone(alpha in 0.1f64..0.95, s in 1e-3f64..50.0, ds in 1e-3f64..5.0) {
        let p = stable(alpha);
        prop_assert!(stable_density(&p, s).unwrap() >= 0.0);
        let (a, b) = (stable_cdf(&p, s).unwrap(), stable_cdf(&p, s + ds).unwrap());
        prop_assert!((0.0..=1.0).contains(&a) && a <= b + 1e-12);
    }

    #[test]
    fn same_stream_same_draws(seed in any::<u64>(), stream in any::<u64>(), alpha in 0.05f64..=1.0) {
        let p = stable(alpha);
        let mut a = RngStream::new(seed, stream);
        let mut b = RngStream::new(seed, stream);
        for _ in 0..16 {
            prop_assert_eq!(sample_stable(&p, &mut a).to_bits(), sample_stable(&p, &mut b).to_bits());
        }
    }

    #[test]
    fn nu_is_the_transformed_stable_draw(seed in any::<u64>(), alpha in 0.05f64..0.99) {
        let p = stable(alpha);
        let mut a = RngStream::new(seed, 0);
        let mut b = RngStream::new(seed, 0);
        for _ in 0..16 {
            let s = sample_stable(&p, &mut a);
            let t = sample_nu(&p, &mut b);
            prop_assert!((s.powf(-alpha) - t).abs() <= 1e-12 * t.max(1.0), "{s} {t}");
        }
    }
}
