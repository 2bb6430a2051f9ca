use super::config::ExperimentConfig;
use super::random;
use super::report::{CheckRow, ExperimentReport, Runtime};
use crate::algebra::{
    annihilation_alpha, annihilation_alpha_conjugated, annihilation_lp, coherent_function, correlation_identity_check_many,
    creation_alpha, creation_alpha_conjugated, creation_lp, frac_coherent_function, frac_lp_inner, i_alpha, i_alpha_inv,
    k_transform, k_transform_subsets, lp_inner, multisets_upto, norm_identity_check, second_quantization_alpha,
    second_quantization_alpha_apply, totality_witness, ConfigFunction, DiscreteConfiguration, DiscreteField, N_MAX,
};
use crate::error::{Error, Result};
use crate::fpp::{
    analytic_cf, consistency_check, count_covariance, empirical_cf, psd_check, sample_counts, sample_many,
    ConfigurationSampler, CountMethod, CountSampler, TestFunction,
};
use crate::rng::{RngStream, CHUNK};
use crate::stable::nu_moment;
use crate::stats::{chi_square_two_sample, histogram, mean_stderr};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cf,
    Psd,
    Correlation,
    Norms,
    Operators,
    Consistency,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] =
        [Suite::Cf, Suite::Psd, Suite::Correlation, Suite::Norms, Suite::Operators, Suite::Consistency];

    /// Stream id of the suite's root `RngStream`.
    pub fn stream(self) -> u64 {
        Self::EACH.iter().position(|s| *s == self).map_or(0, |i| i as u64 + 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cf => "cf",
            Suite::Psd => "psd",
            Suite::Correlation => "correlation",
            Suite::Norms => "norms",
            Suite::Operators => "operators",
            Suite::Consistency => "consistency",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    root: RngStream,
    scale: f64,
    sigmas: f64,
}

/// Rows of one suite, or of every suite for [`Suite::All`].
pub fn run_rows(cfg: &ExperimentConfig, suite: Suite) -> Result<Vec<CheckRow>> {
    cfg.validate()?;
    if suite == Suite::All {
        let mut rows = Vec::new();
        for s in Suite::EACH {
            rows.extend(run_rows(cfg, s)?);
        }
        return Ok(rows);
    }
    let ctx = Ctx {
        cfg,
        root: RngStream::new(cfg.seed()?, suite.stream()),
        scale: cfg.tolerances.scale,
        sigmas: cfg.tolerances.sigmas,
    };
    match suite {
        Suite::Cf => cf(&ctx),
        Suite::Psd => psd(&ctx),
        Suite::Correlation => correlation(&ctx),
        Suite::Norms => norms(&ctx),
        Suite::Operators => operators(&ctx),
        Suite::Consistency => consistency(&ctx),
        Suite::All => unreachable!(),
    }
}

pub fn run(cfg: &ExperimentConfig, suite: Suite) -> Result<ExperimentReport> {
    let start = Instant::now();
    let rows = run_rows(cfg, suite)?;
    let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(ExperimentReport {
        library_version: env!("CARGO_PKG_VERSION").into(),
        suite: suite.name().into(),
        config: cfg.clone(),
        stream_layout: format!(
            "suite s uses RngStream(seed, s) with cf=1 psd=2 correlation=3 norms=4 operators=5 consistency=6; \
             child(0) draws the random test objects, child(1..) the Monte Carlo samples in chunks of {CHUNK} \
             where chunk i uses child(i) of that stream"
        ),
        pass: rows.iter().all(|r| r.pass),
        rows,
        runtime: Runtime {
            timestamp_unix,
            wall_clock_seconds: start.elapsed().as_secs_f64(),
            workers: rayon::current_num_threads(),
        },
    })
}

fn cf(ctx: &Ctx) -> Result<Vec<CheckRow>> {
    let cfg = ctx.cfg;
    let (ml, w, mu) = (cfg.ml()?, cfg.window()?, cfg.intensity()?);
    let sampler = ConfigurationSampler::new(&ml, &w, &mu, cfg.experiment.method)?;
    let samples = sample_many(&sampler, cfg.samples_or(100_000), &ctx.root.child(1))?;
    let mut rng = ctx.root.child(0);

    let zero = empirical_cf(&samples, &TestFunction::zero(w.clone()))?;
    let mut rows = vec![CheckRow::within("cf/zero function", (zero.value - 1.0).norm(), 0.0, 0.0)];
    for k in 0..10 {
        let phi = random::step_function(&w, 3, 2.0, &mut rng)?;
        let emp = empirical_cf(&samples, &phi)?;
        let exact = analytic_cf(&ml, &phi, &mu)?;
        rows.push(CheckRow::within(
            format!("cf/step {k} |empirical - analytic|"),
            (emp.value - exact).norm(),
            0.0,
            ctx.sigmas * emp.stderr * ctx.scale,
        ));
    }
    Ok(rows)
}

fn psd(ctx: &Ctx) -> Result<Vec<CheckRow>> {
    let cfg = ctx.cfg;
    let (ml, w, mu) = (cfg.ml()?, cfg.window()?, cfg.intensity()?);
    let mut rng = ctx.root.child(0);
    let single = psd_check(&ml, &[random::step_function(&w, 3, 3.0, &mut rng)?], &mu)?;
    let mut rows = vec![CheckRow::within("psd/single function", single, 1.0, 1e-15)];
    for k in 0..cfg.experiment.cases {
        let fs: Vec<TestFunction> = (0..cfg.experiment.nfuncs)
            .map(|_| random::step_function(&w, 3, 3.0, &mut rng))
            .collect::<Result<_>>()?;
        rows.push(CheckRow::at_least(format!("psd/gram {k} min eigenvalue"), psd_check(&ml, &fs, &mu)?, 0.0, 1e-8 * ctx.scale));
    }
    Ok(rows)
}

fn correlation(ctx: &Ctx) -> Result<Vec<CheckRow>> {
    let cfg = ctx.cfg;
    let (ml, base) = (cfg.ml()?, cfg.base()?);
    let mut rng = ctx.root.child(0);
    let m = base.len();
    let mut sets = vec![vec![DiscreteConfiguration::empty(m)]];
    for _ in 0..10 {
        let size = 1 + (rng.open01() * 3.0) as usize;
        sets.push(random::config_set(m, 3, size, &mut rng));
    }
    let reports = correlation_identity_check_many(&ml, &base, &sets, cfg.samples_or(1_000_000), &ctx.root.child(1))?;
    let mut rows = Vec::new();
    for r in reports {
        let label = format!("{{{}}}", r.set.iter().map(|s| format!("[{s}]")).collect::<Vec<_>>().join(" "));
        rows.push(CheckRow::within(
            format!("correlation/{label} tuple enumeration"),
            r.exact_tuples,
            r.exact,
            1e-12 * r.exact.abs().max(1.0) * ctx.scale,
        ));
        rows.push(CheckRow::within(
            format!("correlation/{label} Monte Carlo"),
            r.estimate,
            r.exact,
            ctx.sigmas * r.stderr * ctx.scale + 1e-12,
        ));
    }
    Ok(rows)
}

fn norms(ctx: &Ctx) -> Result<Vec<CheckRow>> {
    let cfg = ctx.cfg;
    let (ml, base) = (cfg.ml()?, cfg.base()?);
    let mut rng = ctx.root.child(0);
    let zero = norm_identity_check(&ml, &base, &DiscreteField::zeros(base.len()), 2.0)?;
    let mut rows = vec![CheckRow::within("norms/zero field", zero.lhs, zero.rhs, 0.0)];
    for k in 0..20 {
        let target = rng.uniform(0.0, 1.5);
        let f = random::field_with_norm(base.masses(), target, &mut rng);
        let r = norm_identity_check(&ml, &base, &f, 2.0)?;
        rows.push(CheckRow::within(format!("norms/field {k} (‖f‖² = {target:.6})"), r.lhs, r.rhs, 1e-9 * ctx.scale));
    }
    Ok(rows)
}

/// Largest `|G(η) - H(η)|`, relative to `1 + max |G|`.
fn rel_diff(g: &ConfigFunction, h: &ConfigFunction) -> f64 {
    let size = g.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    g.max_abs_diff(h) / (1.0 + size)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

/// `[a^-(φ), a^+(ψ)] G - ⟨ψ, φ⟩ G` at the λ level.
fn ccr_defect(base: &crate::algebra::DiscreteBaseSpace, phi: &DiscreteField, psi: &DiscreteField, g: &ConfigFunction) -> Result<f64> {
    let ab = annihilation_lp(base, phi, &creation_lp(base, psi, g, N_MAX)?)?;
    let ba = creation_lp(base, psi, &annihilation_lp(base, phi, g)?, N_MAX)?;
    let k = base.pairing(psi, phi);
    let expected = g.map_values(|_, v| v * k);
    let comm = ConfigFunction::from_fn(g.atoms(), g.n_cap(), |eta| ab.get(eta) - ba.get(eta));
    Ok(rel_diff(&expected, &comm))
}

fn operators(ctx: &Ctx) -> Result<Vec<CheckRow>> {
    let cfg = ctx.cfg;
    let (ml, base) = (cfg.ml()?, cfg.base()?);
    let m = base.len();
    let mut rng = ctx.root.child(0);
    let mut worst = [0.0f64; 9];
    for _ in 0..cfg.experiment.cases {
        let g = random::config_function(m, 3, &mut rng);
        let h = random::config_function(m, 4, &mut rng);
        let phi = random::field(m, 1.0, &mut rng);
        let psi = random::field(m, 1.0, &mut rng);
        let a = random::operator(m, &mut rng);
        let f = random::field(m, 0.8, &mut rng);

        let d = [
            rel_diff(&annihilation_alpha(&ml, &base, &phi, &g)?, &annihilation_alpha_conjugated(&ml, &base, &phi, &g)?),
            rel_diff(
                &creation_alpha(&ml, &base, &phi, &g, N_MAX)?,
                &creation_alpha_conjugated(&ml, &base, &phi, &g, N_MAX)?,
            ),
            {
                let conj = second_quantization_alpha_apply(&ml, &base, &a, &frac_coherent_function(&ml, &f, 4))?;
                let mut e = 0.0f64;
                for eta in multisets_upto(m, 4) {
                    e = e.max(rel(second_quantization_alpha(&ml, &base, &a, &f, &eta)?, conj.get(&eta)));
                }
                e
            },
            rel(lp_inner(&base, &i_alpha(&ml, &g), &i_alpha(&ml, &h)), frac_lp_inner(&ml, &base, &g, &h)),
            ccr_defect(&base, &phi, &psi, &g)?,
            {
                // I_α [a_α^-(φ), a_α^+(ψ)] I_α^{-1} G against ⟨ψ, φ⟩ G
                let gi = i_alpha_inv(&ml, &g);
                let ab = annihilation_alpha(&ml, &base, &phi, &creation_alpha(&ml, &base, &psi, &gi, N_MAX)?)?;
                let ba = creation_alpha(&ml, &base, &psi, &annihilation_alpha(&ml, &base, &phi, &gi)?, N_MAX)?;
                let comm = i_alpha(&ml, &ConfigFunction::from_fn(m, 3, |eta| ab.get(eta) - ba.get(eta)));
                let k = base.pairing(&psi, &phi);
                rel_diff(&g.map_values(|_, v| v * k), &comm)
            },
            rel(
                frac_lp_inner(&ml, &base, &creation_alpha(&ml, &base, &phi, &g, N_MAX)?, &h),
                frac_lp_inner(&ml, &base, &g, &annihilation_alpha(&ml, &base, &phi.conj(), &h)?),
            ),
            {
                let e = coherent_function(&f, 4);
                let mut err = 0.0f64;
                for gamma in multisets_upto(m, 4) {
                    let product: Complex64 =
                        gamma.counts().iter().zip(&f.0).map(|(&k, v)| (v + 1.0).powu(k)).product();
                    let kt = k_transform(&e, &gamma)?;
                    err = err.max(rel(kt, product)).max(rel(kt, k_transform_subsets(&e, &gamma)));
                }
                err
            },
            rel_diff(&i_alpha_inv(&ml, &i_alpha(&ml, &h)), &h),
        ];
        for (w, x) in worst.iter_mut().zip(d) {
            *w = w.max(x);
        }
    }
    let names = [
        ("annihilation formula vs conjugation", 1e-12),
        ("creation formula vs conjugation", 1e-12),
        ("second quantization formula vs conjugation", 1e-12),
        ("I_alpha unitarity", 1e-10),
        ("CCR at lambda level", 1e-10),
        ("conjugated image of the CCR", 1e-10),
        ("creation adjoint to annihilation", 1e-10),
        ("K-transform of coherent states", 1e-12),
        ("I_alpha inverse", 1e-14),
    ];
    let mut rows: Vec<CheckRow> = names
        .iter()
        .zip(worst)
        .map(|((name, tol), e)| CheckRow::at_most(format!("operators/{name} (max relative error)"), e, 0.0, tol * ctx.scale))
        .collect();
    let fields: Vec<DiscreteField> = (0..5).map(|_| random::field(m, 0.8, &mut rng)).collect();
    let t = totality_witness(&ml, &base, &fields, 6)?;
    rows.push(CheckRow::at_least(
        "operators/coherent Gram min singular value over max",
        t.min_singular / t.max_singular,
        1e-12,
        0.0,
    ));
    Ok(rows)
}

fn consistency(ctx: &Ctx) -> Result<Vec<CheckRow>> {
    let cfg = ctx.cfg;
    let (ml, w, mu) = (cfg.ml()?, cfg.window()?, cfg.intensity()?);
    let n = cfg.samples_or(100_000);
    let mid = 0.5 * (w.lower()[0] + w.upper()[0]);
    let (left, right) = w.split(0, mid)?;
    let mut rows = Vec::new();

    let nested = consistency_check(&ml, &left, &w, &mu, n, &ctx.root.child(1))?;
    rows.push(CheckRow::at_least("consistency/nested windows chi-square p", nested.chi_square.p_value, 1e-3, 0.0));
    let same = consistency_check(&ml, &w, &w, &mu, n, &ctx.root.child(2))?;
    rows.push(CheckRow::at_least("consistency/identical windows chi-square p", same.chi_square.p_value, 1e-3, 0.0));

    let cov = count_covariance(&ml, &w, &left, &right, &mu, n, &ctx.root.child(3))?;
    let z = cov.covariance / cov.stderr;
    rows.push(if ml.alpha < 1.0 {
        CheckRow::at_least("consistency/Cov(N_A, N_B) in standard errors", z, ctx.sigmas, 0.0)
    } else {
        CheckRow::within("consistency/Cov(N_A, N_B) in standard errors", z, 0.0, ctx.sigmas * ctx.scale)
    });

    let mass = cfg.experiment.mass;
    let direct = sample_counts(&CountSampler::new(&ml, mass, CountMethod::Direct)?, n, &ctx.root.child(4))?;
    let mixture = sample_counts(&CountSampler::new(&ml, mass, CountMethod::Mixture)?, n, &ctx.root.child(5))?;
    let chi = chi_square_two_sample(&histogram(&direct), &histogram(&mixture), 5.0);
    rows.push(CheckRow::at_least("consistency/direct vs mixture counts chi-square p", chi.p_value, 1e-3, 0.0));

    let first: Vec<f64> = direct.iter().map(|&k| k as f64).collect();
    let second: Vec<f64> = direct.iter().map(|&k| (k as f64) * (k as f64 - 1.0)).collect();
    let (m1, s1) = mean_stderr(&first);
    let (m2, s2) = mean_stderr(&second);
    let t1 = nu_moment(ml.alpha, 1)? * mass;
    let t2 = nu_moment(ml.alpha, 2)? * mass * mass;
    rows.push(CheckRow::within("consistency/E[N]", m1, t1, ctx.sigmas * s1 * ctx.scale + 1e-12));
    rows.push(CheckRow::within("consistency/E[N(N-1)]", m2, t2, ctx.sigmas * s2 * ctx.scale + 1e-12));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(alpha: f64) -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        c.experiment.seed = Some(5);
        c.experiment.alpha = alpha;
        c.experiment.samples = Some(20_000);
        c.experiment.cases = 5;
        c.experiment.nfuncs = 6;
        c
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn exact_suites_pass() {
        for alpha in [0.4, 1.0] {
            for s in [Suite::Norms, Suite::Operators, Suite::Psd] {
                let rows = run_rows(&small(alpha), s).unwrap();
                for r in &rows {
                    assert!(r.pass, "alpha {alpha}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let c = small(0.6);
        let a = run(&c, Suite::Correlation).unwrap();
        let b = run(&c, Suite::Correlation).unwrap();
        assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
        assert!(!a.canonical_json().unwrap().contains("timestamp"));
    }
}
