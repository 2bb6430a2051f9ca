use crate::args::{MlArgs, SampleArgs, VerifyArgs};
use crate::Failure;
use frakpoisson_core::fpp::{io, sample_counts, sample_many, ConfigurationSampler, CountMethod, CountSampler};
use frakpoisson_core::harness::{run, ExperimentConfig};
use frakpoisson_core::stats::{chi_square_two_sample, histogram};
use frakpoisson_core::{ml_deriv, ml_eval, ml_oracle_deriv, MlParams, RngStream};
use num_complex::Complex64;
use serde_json::json;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Chi-square significance for `sample --compare`.
const SIGNIFICANCE: f64 = 1e-3;

fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), Failure>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| Failure::Check(format!("{}: {e}", p.display())))?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig, Failure> {
    match path {
        Some(p) => ExperimentConfig::load(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => Ok(ExperimentConfig::default()),
    }
}

fn check_scale(s: Option<f64>) -> Result<(), Failure> {
    match s {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(Failure::Usage(format!("--tolerance-scale {v} must be positive"))),
        _ => Ok(()),
    }
}

pub fn ml(a: MlArgs) -> Result<bool, Failure> {
    check_scale(Some(a.tolerance_scale))?;
    let mut p = MlParams::new(a.alpha)?;
    if let Some(z) = a.z_max {
        p.z_max = z;
    }
    if let Some(n) = a.n_max {
        p.n_max = n;
    }
    p.validate()?;
    let cases: Vec<(u32, Complex64)> = match (a.deriv, a.z.is_empty(), a.x.is_empty()) {
        (None, false, true) => a.z.iter().map(|z| (0, *z)).collect(),
        (n, true, false) => a.x.iter().map(|x| (n.unwrap_or(0), Complex64::new(*x, 0.0))).collect(),
        (Some(_), _, true) => return Err(Failure::Usage("--deriv needs at least one --x".into())),
        (_, true, true) => return Err(Failure::Usage("give --z or --x".into())),
        _ => return Err(Failure::Usage("--z and --x cannot be combined".into())),
    };

    let widen = p.rel_tol * a.tolerance_scale;
    let mut rows = Vec::new();
    let mut all = true;
    println!("{:>6} {:>5} {:>26} {:>26} {:>26} {:>10}  status", "alpha", "order", "argument", "value", "oracle", "radius");
    for (n, z) in cases {
        let value = if n == 0 && a.deriv.is_none() {
            ml_eval(&p, z)?
        } else {
            Complex64::new(ml_deriv(&p, n, z.re)?, 0.0)
        };
        let (oracle, radius, pass) = match ml_oracle_deriv(p.alpha, n, z, a.digits, 100_000) {
            Ok(e) => (Some(e.midpoint()), Some(e.radius_f64()), e.contains(value, widen)),
            Err(_) => (None, None, false),
        };
        all &= pass;
        let show = |c: Complex64| if c.im == 0.0 { format!("{:.17e}", c.re) } else { format!("{c:.12e}") };
        println!(
            "{:>6} {:>5} {:>26} {:>26} {:>26} {:>10}  {}",
            p.alpha,
            n,
            show(z),
            show(value),
            oracle.map_or("unavailable".into(), show),
            radius.map_or("-".into(), |r| format!("{r:.1e}")),
            if pass { "oracle-pass" } else { "FAIL" }
        );
        rows.push(json!({
            "alpha": p.alpha,
            "order": n,
            "argument": [z.re, z.im],
            "value": [value.re, value.im],
            "oracle": oracle.map(|o| [o.re, o.im]),
            "oracle_radius": radius,
            "pass": pass,
        }));
    }
    if let Some(path) = a.out.as_deref() {
        let doc = json!({ "rel_tol": p.rel_tol, "tolerance_scale": a.tolerance_scale, "rows": rows, "pass": all });
        write_to(Some(path), |w| {
            serde_json::to_writer_pretty(&mut *w, &doc).map_err(|e| Failure::Check(e.to_string()))?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    Ok(all)
}

pub fn sample(a: SampleArgs) -> Result<bool, Failure> {
    check_scale(a.tolerance_scale)?;
    let mut cfg = load_config(a.config.as_ref())?;
    let e = &mut cfg.experiment;
    e.alpha = a.alpha.unwrap_or(e.alpha);
    e.seed = a.seed.or(e.seed);
    e.samples = a.samples.or(e.samples);
    e.method = a.method.unwrap_or(e.method);
    e.mass = a.mass.unwrap_or(e.mass);
    if a.points && a.mass.is_some() {
        return Err(Failure::Usage("--points takes its mass from the window; drop --mass".into()));
    }
    cfg.validate()?;
    let seed = cfg.seed()?;
    let ml = cfg.ml()?;
    let n = cfg.samples_or(1000);
    let method = cfg.experiment.method;
    let rng = RngStream::new(seed, 0);

    if a.points {
        let window = cfg.window()?;
        let sampler = ConfigurationSampler::new(&ml, &window, &cfg.intensity()?, method)?;
        let samples = sample_many(&sampler, n, &rng)?;
        write_to(a.out.as_deref(), |w| Ok(io::write_configurations(w, &samples, window.dim())?))?;
        return Ok(true);
    }

    let mass = cfg.experiment.mass;
    let counts = sample_counts(&CountSampler::new(&ml, mass, method)?, n, &rng)?;
    write_to(a.out.as_deref(), |w| Ok(io::write_counts(w, &counts)?))?;
    if !a.compare {
        return Ok(true);
    }
    let other = match method {
        CountMethod::Direct => CountMethod::Mixture,
        CountMethod::Mixture => CountMethod::Direct,
    };
    let others = sample_counts(&CountSampler::new(&ml, mass, other)?, n, &RngStream::new(seed, 1))?;
    let test = chi_square_two_sample(&histogram(&counts), &histogram(&others), 5.0);
    let level = SIGNIFICANCE / a.tolerance_scale.unwrap_or(1.0);
    let mean = |v: &[u64]| v.iter().sum::<u64>() as f64 / v.len() as f64;
    let pass = test.p_value >= level;
    let doc = json!({
        "alpha": ml.alpha,
        "mass": mass,
        "samples": n,
        "seed": seed,
        "method": method,
        "compared_with": other,
        "mean": mean(&counts),
        "compared_mean": mean(&others),
        "chi_square": test,
        "significance": level,
        "pass": pass,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Check(e.to_string()))?;
    if a.out.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    Ok(pass)
}

pub fn verify(a: VerifyArgs) -> Result<bool, Failure> {
    check_scale(a.tolerance_scale)?;
    let mut cfg = load_config(a.config.as_ref())?;
    let e = &mut cfg.experiment;
    e.alpha = a.alpha.unwrap_or(e.alpha);
    e.mass = a.mass.unwrap_or(e.mass);
    e.seed = a.seed.or(e.seed);
    e.samples = a.samples.or(e.samples);
    e.method = a.method.unwrap_or(e.method);
    e.nfuncs = a.nfuncs.unwrap_or(e.nfuncs);
    e.cases = a.cases.unwrap_or(e.cases);
    if let Some(out) = &a.out {
        e.out = Some(out.display().to_string());
    }
    if let Some(s) = a.tolerance_scale {
        cfg.tolerances.scale = s;
    }
    cfg.validate()?;
    let report = run(&cfg, a.which)?;
    let out = cfg.experiment.out.as_ref().map(PathBuf::from);
    let text = report.to_json()?;
    write_to(out.as_deref(), |w| Ok(writeln!(w, "{text}")?))?;
    let failed: Vec<_> = report.failures().collect();
    for r in &failed {
        eprintln!("FAIL {}: estimate {} target {} budget {} ({:?})", r.name, r.estimate, r.target, r.budget, r.comparison);
    }
    eprintln!(
        "{}: {}/{} checks passed in {:.2} s",
        report.suite,
        report.rows.len() - failed.len(),
        report.rows.len(),
        report.runtime.wall_clock_seconds
    );
    Ok(report.pass)
}
