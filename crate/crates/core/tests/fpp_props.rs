use frakpoisson_core::fpp::{
    analytic_cf, cf_argument, consistency_check, empirical_cf, io, psd_check, sample_counts, sample_many,
    ConfigurationSampler, CountMethod, CountSampler, IntensityMeasure, TestFunction, Window,
};
use frakpoisson_core::harness::random;
use frakpoisson_core::stats::{chi_square_two_sample, histogram, mean_stderr};
use frakpoisson_core::{ml_eval, nu_moment, MlParams, RngStream};
use num_complex::Complex64;
use proptest::prelude::*;

fn ml(alpha: f64) -> MlParams {
    MlParams::new(alpha).unwrap()
}

fn boxes() -> impl Strategy<Value = Window> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec((-2.0f64..2.0, 0.1f64..3.0), d)
            .prop_map(|v| Window::new(v.iter().map(|p| p.0).collect(), v.iter().map(|p| p.0 + p.1).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mass_is_additive_over_splits(w in boxes(), t in 0.05f64..0.95, axis in 0usize..3) {
        let axis = axis % w.dim();
        let at = w.lower()[axis] + t * (w.upper()[axis] - w.lower()[axis]);
        let (a, b) = w.split(axis, at).unwrap();
        let smooth = IntensityMeasure::from_fn(|x: &[f64]| 1.0 + x.iter().map(|v| v.sin().powi(2)).sum::<f64>(), 4.0).unwrap();
        let flat = IntensityMeasure::constant(2.5).unwrap();
        // midpoint refinement in three dimensions costs ~10^7 cells per mass
        let measures = if w.dim() <= 2 { vec![&smooth, &flat] } else { vec![&flat] };
        for mu in measures {
            let whole = mu.mass(&w).unwrap();
            let parts = mu.mass(&a).unwrap() + mu.mass(&b).unwrap();
            prop_assert!((whole - parts).abs() <= 1e-8 * whole);
        }
    }

    #[test]
    fn gram_matrices_are_positive(alpha in 0.01f64..=1.0, k in 1usize..=20, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0);
        let w = Window::unit(2);
        let fs: Vec<TestFunction> = (0..k).map(|_| random::step_function(&w, 3, 3.0, &mut rng).unwrap()).collect();
        let mu = IntensityMeasure::constant(1.5).unwrap();
        let lam = psd_check(&ml(alpha), &fs, &mu).unwrap();
        prop_assert!(lam >= -1e-8, "alpha {alpha}: {lam}");
    }

    #[test]
    fn poisson_cf_is_exponential(seed in any::<u64>(), rho in 0.1f64..4.0) {
        let mut rng = RngStream::new(seed, 1);
        let w = Window::unit(1);
        let phi = random::step_function(&w, 4, 3.0, &mut rng).unwrap();
        let mu = IntensityMeasure::constant(rho).unwrap();
        // ∫ (e^{iφ} - 1) dμ on a fine midpoint grid
        let m = 20_000;
        let grid: Complex64 = (0..m)
            .map(|j| (Complex64::from_polar(1.0, phi.eval(&[(j as f64 + 0.5) / m as f64])) - 1.0) * rho / m as f64)
            .sum();
        let exact = analytic_cf(&ml(1.0), &phi, &mu).unwrap();
        prop_assert!((exact - grid.exp()).norm() < 1e-3);
        prop_assert!((exact - cf_argument(&phi, &mu).unwrap().exp()).norm() < 1e-14);
    }

    #[test]
    fn restriction_keeps_points_inside(seed in any::<u64>(), alpha in 0.2f64..=1.0) {
        let w = Window::new(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let (inner, _) = w.split(0, 0.7).unwrap();
        let s = ConfigurationSampler::new(&ml(alpha), &w, &IntensityMeasure::constant(3.0).unwrap(), CountMethod::Direct).unwrap();
        let g = s.sample(&mut RngStream::new(seed, 2)).unwrap();
        let r = g.restrict(&inner);
        prop_assert!(r.points.iter().all(|p| inner.contains(p)));
        prop_assert_eq!(r.len(), g.count_in(&inner));
        prop_assert!(g.points.iter().all(|p| w.contains(p)));
        prop_assert!(!g.has_duplicates());
    }

    #[test]
    fn csv_round_trips(seed in any::<u64>(), n in 1usize..40) {
        let w = Window::unit(3);
        let s = ConfigurationSampler::new(&ml(0.6), &w, &IntensityMeasure::constant(2.0).unwrap(), CountMethod::Mixture).unwrap();
        let samples = sample_many(&s, n, &RngStream::new(seed, 3)).unwrap();
        let mut buf = Vec::new();
        io::write_configurations(&mut buf, &samples, 3).unwrap();
        prop_assert_eq!(io::read_configurations(buf.as_slice(), Some(n)).unwrap(), samples.clone());
        let counts: Vec<u64> = samples.iter().map(|g| g.len() as u64).collect();
        let mut buf = Vec::new();
        io::write_counts(&mut buf, &counts).unwrap();
        prop_assert_eq!(io::read_counts(buf.as_slice()).unwrap(), counts);
    }
}

#[test]
fn direct_and_mixture_counts_agree() {
    for (i, alpha) in [0.4, 0.7, 1.0].into_iter().enumerate() {
        for (j, mass) in [0.5, 2.0, 5.0].into_iter().enumerate() {
            let stream = (3 * i + j) as u64;
            let d = sample_counts(&CountSampler::new(&ml(alpha), mass, CountMethod::Direct).unwrap(), 200_000, &RngStream::new(17, stream)).unwrap();
            let m = sample_counts(&CountSampler::new(&ml(alpha), mass, CountMethod::Mixture).unwrap(), 200_000, &RngStream::new(18, stream)).unwrap();
            let t = chi_square_two_sample(&histogram(&d), &histogram(&m), 5.0);
            assert!(t.p_value > 1e-3, "alpha {alpha} mass {mass}: {t:?}");
        }
    }
}

#[test]
fn empty_window_count_is_zero() {
    for method in [CountMethod::Direct, CountMethod::Mixture] {
        let s = CountSampler::new(&ml(0.5), 0.0, method).unwrap();
        let mut rng = RngStream::new(1, 1);
        assert!((0..1000).all(|_| s.sample(&mut rng).unwrap() == 0));
    }
}

#[test]
fn zero_count_probability_is_mittag_leffler() {
    let s = CountSampler::new(&ml(0.5), 1.0, CountMethod::Direct).unwrap();
    let counts = sample_counts(&s, 1_000_000, &RngStream::new(5, 0)).unwrap();
    let zeros: Vec<f64> = counts.iter().map(|&c| f64::from(u8::from(c == 0))).collect();
    let (p0, se) = mean_stderr(&zeros);
    assert!((p0 - 0.427_583_576_155_807).abs() <= 3.0 * se, "{p0} ± {se}");
}

#[test]
fn count_moments_follow_the_mixture() {
    for (k, alpha) in [0.5, 0.8].into_iter().enumerate() {
        let mass = 1.7;
        let s = CountSampler::new(&ml(alpha), mass, CountMethod::Direct).unwrap();
        let counts = sample_counts(&s, 400_000, &RngStream::new(6, k as u64)).unwrap();
        let first: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let second: Vec<f64> = first.iter().map(|c| c * (c - 1.0)).collect();
        let (m1, s1) = mean_stderr(&first);
        let (m2, s2) = mean_stderr(&second);
        assert!((m1 - nu_moment(alpha, 1).unwrap() * mass).abs() <= 4.0 * s1);
        assert!((m2 - nu_moment(alpha, 2).unwrap() * mass * mass).abs() <= 4.0 * s2);
    }
}

#[test]
fn unit_density_mean_count() {
    let w = Window::unit(2);
    let s = ConfigurationSampler::new(&ml(0.5), &w, &IntensityMeasure::constant(1.0).unwrap(), CountMethod::Direct).unwrap();
    let xs: Vec<f64> = sample_many(&s, 200_000, &RngStream::new(8, 0)).unwrap().iter().map(|g| g.len() as f64).collect();
    let (m, se) = mean_stderr(&xs);
    assert!((m - std::f64::consts::FRAC_2_SQRT_PI).abs() <= 3.0 * se, "{m} ± {se}");
}

#[test]
fn subwindow_cf_matches_mittag_leffler() {
    let w = Window::unit(1);
    let (sub, _) = w.split(0, 0.4).unwrap();
    let c = 1.3;
    let phi = TestFunction::step(w.clone(), vec![(sub, c)]).unwrap();
    let mu = IntensityMeasure::constant(2.0).unwrap();
    let s = ConfigurationSampler::new(&ml(0.5), &w, &mu, CountMethod::Mixture).unwrap();
    let samples = sample_many(&s, 100_000, &RngStream::new(9, 0)).unwrap();
    let e = empirical_cf(&samples, &phi).unwrap();
    let exact = ml_eval(&ml(0.5), (Complex64::from_polar(1.0, c) - 1.0) * 0.8).unwrap();
    assert_eq!(analytic_cf(&ml(0.5), &phi, &mu).unwrap(), exact);
    assert!((e.value - exact).norm() <= 4.0 * e.stderr, "{} vs {exact}", e.value);
}

#[test]
fn nested_windows_are_consistent() {
    let outer = Window::unit(2);
    let (inner, _) = outer.split(1, 0.35).unwrap();
    let mu = IntensityMeasure::constant(2.0).unwrap();
    for alpha in [0.5, 1.0] {
        let r = consistency_check(&ml(alpha), &inner, &outer, &mu, 100_000, &RngStream::new(10, 0)).unwrap();
        assert!(r.chi_square.p_value > 1e-3, "alpha {alpha}: {r:?}");
    }
    let r = consistency_check(&ml(0.5), &outer, &outer, &mu, 50_000, &RngStream::new(10, 1)).unwrap();
    assert!(r.chi_square.p_value > 1e-3);
}
