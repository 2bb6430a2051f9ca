use super::base::{DiscreteBaseSpace, DiscreteField};
use super::configuration::DiscreteConfiguration;
use super::function::ConfigFunction;
use super::measure::{frac_coherent_function, frac_lp_inner, frac_lp_integral, sub_count};
use crate::error::{Error, Result};
use crate::fpp::{CountMethod, CountSampler};
use crate::mittag_leffler::{ml_eval_real, MlParams};
use crate::rng::{par_chunks, RngStream};
use crate::special::{factorial_over_gamma, ln_factorial_over_gamma, ln_gamma};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Agreement threshold of the Monte Carlo check, in standard errors.
pub const SIGMAS: f64 = 4.0;

/// Levels summed at most by [`norm_identity_check`].
pub const NORM_LEVEL_MAX: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub set: Vec<String>,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
    /// Exact side recomputed from ordered tuples of atoms.
    pub exact_tuples: f64,
    pub n_samples: usize,
    pub pass: bool,
}

/// Draws `γ ~ π_μ^α` on the atoms: the total count from the fractional
/// Poisson law with mass `μ(M)`, then each point independently at atom `i`
/// with probability `μ_i/μ(M)`.
pub fn sample_discrete(sampler: &CountSampler, cumulative: &[f64], rng: &mut RngStream) -> Result<DiscreteConfiguration> {
    let n = sampler.sample(rng)?;
    let total = *cumulative.last().expect("non-empty base space");
    let mut counts = vec![0u32; cumulative.len()];
    for _ in 0..n {
        let u = rng.open01() * total;
        let i = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
        counts[i] += 1;
    }
    Ok(DiscreteConfiguration::from_counts(counts))
}

/// `(KG)(γ)` with the points of `γ` labelled individually, summing `G` over
/// all `2^|γ|` subsets.
pub fn k_transform_subsets(g: &ConfigFunction, gamma: &DiscreteConfiguration) -> Complex64 {
    let points: Vec<usize> = gamma.counts().iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for mask in 0u64..1 << points.len() {
        let mut counts = vec![0u32; gamma.atoms()];
        for (b, &a) in points.iter().enumerate() {
            if mask >> b & 1 == 1 {
                counts[a] += 1;
            }
        }
        total += g.get(&DiscreteConfiguration::from_counts(counts));
    }
    total
}

/// `∫ 1_A dλ_μ^α` by summing `E_α^{(n)}(0) ∏ μ_{a_j} / n!` over ordered
/// tuples `(a_1..a_n)` whose multiset lies in `A`.
pub fn correlation_exact_tuples(ml: &MlParams, base: &DiscreteBaseSpace, set: &[DiscreteConfiguration]) -> f64 {
    let m = base.len();
    let top = set.iter().map(DiscreteConfiguration::len).max().unwrap_or(0);
    let mut total = 0.0;
    for n in 0..=top {
        let level: Vec<&DiscreteConfiguration> = set.iter().filter(|e| e.len() == n).collect();
        if level.is_empty() {
            continue;
        }
        let fact: f64 = (1..=n).map(|j| j as f64).product();
        let mut tuple = vec![0usize; n];
        let mut acc = 0.0;
        loop {
            let mut counts = vec![0u32; m];
            for &a in &tuple {
                counts[a] += 1;
            }
            if level.iter().any(|e| e.counts() == counts.as_slice()) {
                acc += tuple.iter().map(|&a| base.masses()[a]).product::<f64>();
            }
            // odometer over atoms^n
            let mut pos = 0;
            while pos < n {
                tuple[pos] += 1;
                if tuple[pos] < m {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        total += factorial_over_gamma(ml.alpha, n as u32) * acc / fact;
    }
    total
}

/// Monte Carlo `E[(K1_A)(γ)]` under `π_μ^α` against `∫ 1_A dλ_μ^α`, for
/// several sets `A` sharing one sample. Sample `i` of every set comes from
/// the same `γ`.
pub fn correlation_identity_check_many(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    sets: &[Vec<DiscreteConfiguration>],
    n_samples: usize,
    rng: &RngStream,
) -> Result<Vec<CorrelationReport>> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter("at least two samples are needed".into()));
    }
    let mut indicators = Vec::with_capacity(sets.len());
    for set in sets {
        if set.iter().any(|e| e.atoms() != base.len()) {
            return Err(Error::InvalidParameter("set built for a different base space".into()));
        }
        indicators.push(ConfigFunction::indicator(base.len(), set)?);
    }
    let sampler = CountSampler::new(ml, base.total_mass(), CountMethod::Direct)?;
    let cumulative: Vec<f64> = base
        .masses()
        .iter()
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect();

    // One (Σx, Σx²) row per set and chunk.
    let per_chunk: Vec<Result<Vec<(f64, f64)>>> = par_chunks(rng, n_samples, |r, k| {
        let mut sums = vec![(0.0, 0.0); sets.len()];
        for _ in 0..k {
            let gamma = match sample_discrete(&sampler, &cumulative, r) {
                Ok(g) => g,
                Err(e) => return vec![Err(e)],
            };
            for (s, set) in sums.iter_mut().zip(sets) {
                let x: f64 = set.iter().map(|eta| sub_count(eta, &gamma)).sum();
                s.0 += x;
                s.1 += x * x;
            }
        }
        vec![Ok(sums)]
    });
    let mut sums = vec![(0.0, 0.0); sets.len()];
    for chunk in per_chunk {
        for (s, c) in sums.iter_mut().zip(chunk?) {
            s.0 += c.0;
            s.1 += c.1;
        }
    }

    let nf = n_samples as f64;
    let mut reports = Vec::with_capacity(sets.len());
    for ((set, ind), (sx, sxx)) in sets.iter().zip(&indicators).zip(sums) {
        let estimate = sx / nf;
        let var = ((sxx - nf * estimate * estimate) / (nf - 1.0)).max(0.0);
        let stderr = (var / nf).sqrt();
        let exact = frac_lp_integral(ml, base, ind, ind.n_cap())?.re;
        let exact_tuples = correlation_exact_tuples(ml, base, set);
        let agree = (exact - exact_tuples).abs() <= 1e-12 * exact.abs().max(1.0);
        let pass = agree && (estimate - exact).abs() <= SIGMAS * stderr + 1e-12 * exact.abs().max(1.0);
        reports.push(CorrelationReport {
            set: set.iter().map(DiscreteConfiguration::canonical).collect(),
            estimate,
            stderr,
            exact,
            exact_tuples,
            n_samples,
            pass,
        });
    }
    Ok(reports)
}

/// Single-set form of [`correlation_identity_check_many`].
pub fn correlation_identity_check(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    set: &[DiscreteConfiguration],
    n_samples: usize,
    rng: &RngStream,
) -> Result<CorrelationReport> {
    let mut r = correlation_identity_check_many(ml, base, &[set.to_vec()], n_samples, rng)?;
    Ok(r.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormIdentity {
    /// `Σ_η |e_λ(f, η)|^p λ_μ^α({η})` up to `levels`.
    pub lhs: f64,
    /// `E_α(‖f‖_p^p)`.
    pub rhs: f64,
    /// Bound on the omitted levels.
    pub tail_bound: f64,
    pub levels: usize,
}

/// `Σ_{|η|=n} ∏ a_i^{k_i}/k_i!` for every `n <= n_max`, expanding
/// `∏_i Σ_k (a_i x)^k/k!` one atom at a time.
fn level_sums(a: &[f64], n_max: usize) -> Vec<f64> {
    let mut poly = vec![0.0; n_max + 1];
    poly[0] = 1.0;
    for &ai in a {
        let mut powers = vec![1.0; n_max + 1];
        for k in 1..=n_max {
            powers[k] = powers[k - 1] * ai / k as f64;
        }
        let mut next = vec![0.0; n_max + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            *slot = (0..=n).map(|k| poly[n - k] * powers[k]).sum();
        }
        poly = next;
    }
    poly
}

/// `‖e_λ(f)‖^p_{L^p(λ_μ^α)}` by summation over configurations, against
/// `E_α(‖f‖^p_{L^p(μ)})`.
pub fn norm_identity_check(ml: &MlParams, base: &DiscreteBaseSpace, f: &DiscreteField, p: f64) -> Result<NormIdentity> {
    if f.len() != base.len() {
        return Err(Error::InvalidParameter("field built for a different base space".into()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p = {p}")));
    }
    let a: Vec<f64> = f.0.iter().zip(base.masses()).map(|(v, m)| v.norm().powf(p) * m).collect();
    let s: f64 = a.iter().sum();
    if s > ml.z_max {
        return Err(Error::Domain(format!("‖f‖^p = {s} exceeds z_max = {}", ml.z_max)));
    }
    let rhs = ml_eval_real(ml, s)?;
    if s == 0.0 {
        return Ok(NormIdentity { lhs: 1.0, rhs, tail_bound: 0.0, levels: 0 });
    }
    let alpha = ml.alpha;
    let levels = level_sums(&a, NORM_LEVEL_MAX);
    // Bound on the level-n term via Σ_{|η|=n} ∏ a^k/k! = s^n/n!.
    let ln_bound = |n: usize| n as f64 * s.ln() - ln_gamma(alpha * n as f64 + 1.0);
    let mut lhs = 0.0;
    for (n, &l) in levels.iter().enumerate() {
        if l > 0.0 {
            lhs += (l.ln() + ln_factorial_over_gamma(alpha, n as u32)).exp();
        }
        let next = n as f64 + 1.0;
        let rho = s * (ln_gamma(alpha * next + 1.0) - ln_gamma(alpha * (next + 1.0) + 1.0)).exp() * (1.0 + 1e-10);
        if rho < 1.0 {
            let tail = ln_bound(n + 1).exp() / (1.0 - rho);
            if tail <= 1e-13 * lhs.max(1.0) {
                return Ok(NormIdentity { lhs, rhs, tail_bound: tail, levels: n });
            }
        }
    }
    Err(Error::Cap(format!("tail not certified within {NORM_LEVEL_MAX} levels (‖f‖^p = {s})")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalityWitness {
    pub min_singular: f64,
    pub max_singular: f64,
    pub nonsingular: bool,
}

/// Singular values of the Gram matrix `⟨e_α(f_j), e_α(f_k)⟩_{λ_μ^α}`, the
/// states truncated to `|η| <= n_cap`.
pub fn totality_witness(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    fields: &[DiscreteField],
    n_cap: usize,
) -> Result<TotalityWitness> {
    if fields.iter().any(|f| f.len() != base.len()) {
        return Err(Error::InvalidParameter("field built for a different base space".into()));
    }
    let states: Vec<ConfigFunction> = fields.iter().map(|f| frac_coherent_function(ml, f, n_cap)).collect();
    let k = states.len();
    let gram = DMatrix::<Complex64>::from_fn(k, k, |i, j| frac_lp_inner(ml, base, &states[i], &states[j]));
    let sv = gram.singular_values();
    let max_singular = sv.iter().copied().fold(0.0, f64::max);
    let min_singular = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TotalityWitness { min_singular, max_singular, nonsingular: min_singular > 1e-12 * max_singular })
}
