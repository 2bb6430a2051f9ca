use super::base::{BaseOperator, DiscreteBaseSpace, DiscreteField};
use super::configuration::DiscreteConfiguration;
use super::function::ConfigFunction;
use super::measure::{coherent_state, frac_coherent, frac_coherent_function, i_alpha, i_alpha_inv, FracTable};
use crate::error::{Error, Result};
use crate::mittag_leffler::MlParams;
use num_complex::Complex64;

fn check_dims(base: &DiscreteBaseSpace, dims: &[(&str, usize)]) -> Result<()> {
    for (what, d) in dims {
        if *d != base.len() {
            return Err(Error::InvalidParameter(format!("{what} has dimension {d}, base space has {} atoms", base.len())));
        }
    }
    Ok(())
}

/// `(a_λ^-(φ)G)(η) = Σ_i G(η + x_i) φ_i μ_i`.
pub fn annihilation_lp(base: &DiscreteBaseSpace, phi: &DiscreteField, g: &ConfigFunction) -> Result<ConfigFunction> {
    check_dims(base, &[("φ", phi.len()), ("G", g.atoms())])?;
    let mut out = ConfigFunction::with_region(g.region().to_vec(), g.n_cap().saturating_sub(1));
    for (xi, v) in g.iter() {
        for i in 0..base.len() {
            if let Some(eta) = xi.without(i) {
                out.accumulate(eta, v * phi.0[i] * base.masses()[i]);
            }
        }
    }
    Ok(out.prune())
}

/// `(a_λ^+(φ)G)(η) = Σ_i k_i G(η - x_i) φ_i`, where `k_i` is the
/// multiplicity of atom `i` in `η`. Fails when the result would need
/// configurations larger than `n_max`.
pub fn creation_lp(base: &DiscreteBaseSpace, phi: &DiscreteField, g: &ConfigFunction, n_max: usize) -> Result<ConfigFunction> {
    check_dims(base, &[("φ", phi.len()), ("G", g.atoms())])?;
    let n_cap = g.n_cap() + 1;
    if n_cap > n_max {
        return Err(Error::Support(format!("creation raises the support to {n_cap} > n_max = {n_max}")));
    }
    let region = g.region().iter().zip(&phi.0).map(|(&r, p)| r || p.norm() != 0.0).collect();
    let mut out = ConfigFunction::with_region(region, n_cap);
    for (xi, v) in g.iter() {
        for i in 0..base.len() {
            if phi.0[i].norm() != 0.0 {
                let k = f64::from(xi.count(i) + 1);
                out.accumulate(xi.with(i), v * phi.0[i] * k);
            }
        }
    }
    Ok(out.prune())
}

/// `a_α^-(φ) = √(E_α^{(|·|+1)}(0)/E_α^{(|·|)}(0)) a_λ^-(φ)`.
pub fn annihilation_alpha(ml: &MlParams, base: &DiscreteBaseSpace, phi: &DiscreteField, g: &ConfigFunction) -> Result<ConfigFunction> {
    let t = FracTable::get(ml.alpha, g.n_cap());
    Ok(annihilation_lp(base, phi, g)?.map_values(|eta, v| v * (t.sqrt(eta.len() + 1) / t.sqrt(eta.len()))))
}

/// `a_α^+(φ) = √(E_α^{(|·|-1)}(0)/E_α^{(|·|)}(0)) a_λ^+(φ)`.
pub fn creation_alpha(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    phi: &DiscreteField,
    g: &ConfigFunction,
    n_max: usize,
) -> Result<ConfigFunction> {
    let t = FracTable::get(ml.alpha, g.n_cap() + 1);
    Ok(creation_lp(base, phi, g, n_max)?.map_values(|eta, v| v * (t.sqrt(eta.len() - 1) / t.sqrt(eta.len()))))
}

/// `I_α^{-1} a_λ^-(φ) I_α`.
pub fn annihilation_alpha_conjugated(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    phi: &DiscreteField,
    g: &ConfigFunction,
) -> Result<ConfigFunction> {
    Ok(i_alpha_inv(ml, &annihilation_lp(base, phi, &i_alpha(ml, g))?))
}

/// `I_α^{-1} a_λ^+(φ) I_α`.
pub fn creation_alpha_conjugated(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    phi: &DiscreteField,
    g: &ConfigFunction,
    n_max: usize,
) -> Result<ConfigFunction> {
    Ok(i_alpha_inv(ml, &creation_lp(base, phi, &i_alpha(ml, g), n_max)?))
}

/// `(H_A e_λ(f))(η) = Σ_{x∈η} (Af)(x) e_λ(f, η \ {x})`.
pub fn second_quantization_lp(
    base: &DiscreteBaseSpace,
    a: &BaseOperator,
    f: &DiscreteField,
    eta: &DiscreteConfiguration,
) -> Result<Complex64> {
    check_dims(base, &[("A", a.dim()), ("f", f.len()), ("η", eta.atoms())])?;
    let af = a.apply(f);
    Ok((0..base.len())
        .filter_map(|i| eta.without(i).map(|rest| af.0[i] * f64::from(eta.count(i)) * coherent_state(f, &rest)))
        .sum())
}

/// `(H_A^α e_α(f))(η) = √(E_α^{(|η|-1)}(0)/E_α^{(|η|)}(0)) Σ_{x∈η} (Af)(x) e_α(f, η \ {x})`.
pub fn second_quantization_alpha(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    a: &BaseOperator,
    f: &DiscreteField,
    eta: &DiscreteConfiguration,
) -> Result<Complex64> {
    check_dims(base, &[("A", a.dim()), ("f", f.len()), ("η", eta.atoms())])?;
    let n = eta.len();
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t = FracTable::get(ml.alpha, n);
    let af = a.apply(f);
    let sum: Complex64 = (0..base.len())
        .filter_map(|i| eta.without(i).map(|rest| af.0[i] * f64::from(eta.count(i)) * frac_coherent(ml, f, &rest)))
        .sum();
    Ok(sum * (t.sqrt(n - 1) / t.sqrt(n)))
}

/// `dΓ(A)` on configuration functions:
/// `(H_A G)(η) = Σ_i k_i Σ_j A_ij G(η - x_i + x_j)`.
pub fn second_quantization_apply(base: &DiscreteBaseSpace, a: &BaseOperator, g: &ConfigFunction) -> Result<ConfigFunction> {
    check_dims(base, &[("A", a.dim()), ("G", g.atoms())])?;
    let m = base.len();
    let mut out = ConfigFunction::new(m, g.n_cap());
    for (xi, v) in g.iter() {
        for j in 0..m {
            let Some(rest) = xi.without(j) else { continue };
            for i in 0..m {
                let aij = a.0[(i, j)];
                if aij.norm() != 0.0 {
                    let eta = rest.with(i);
                    let k = f64::from(eta.count(i));
                    out.accumulate(eta, aij * v * k);
                }
            }
        }
    }
    Ok(out.prune())
}

/// `H_A^α = I_α^{-1} H_A I_α` applied to `G`.
pub fn second_quantization_alpha_apply(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    a: &BaseOperator,
    g: &ConfigFunction,
) -> Result<ConfigFunction> {
    Ok(i_alpha_inv(ml, &second_quantization_apply(base, a, &i_alpha(ml, g))?))
}

/// `(H_A^α e_α(f))(η)` through the conjugation route.
pub fn second_quantization_alpha_conjugated(
    ml: &MlParams,
    base: &DiscreteBaseSpace,
    a: &BaseOperator,
    f: &DiscreteField,
    eta: &DiscreteConfiguration,
) -> Result<Complex64> {
    check_dims(base, &[("f", f.len()), ("η", eta.atoms())])?;
    let e = frac_coherent_function(ml, f, eta.len());
    Ok(second_quantization_alpha_apply(ml, base, a, &e)?.get(eta))
}
