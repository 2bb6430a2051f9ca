use super::base::{DiscreteBaseSpace, DiscreteField};
use super::configuration::{multisets_upto, DiscreteConfiguration, N_MAX};
use super::function::ConfigFunction;
use crate::error::{Error, Result};
use crate::mittag_leffler::MlParams;
use crate::special::{binomial, factorial_over_gamma};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// `E_α^{(n)}(0) = n!/Γ(αn+1)` and its square root for `n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracTable {
    alpha: f64,
    density: Vec<f64>,
    sqrt: Vec<f64>,
}

impl FracTable {
    fn build(alpha: f64, n_max: usize) -> Self {
        let density: Vec<f64> = (0..=n_max as u32).map(|n| factorial_over_gamma(alpha, n)).collect();
        let sqrt = density.iter().map(|d| d.sqrt()).collect();
        Self { alpha, density, sqrt }
    }

    /// Shared table for `(α, n_max)`, built on first use.
    pub fn get(alpha: f64, n_max: usize) -> Arc<FracTable> {
        type Cache = Mutex<HashMap<(u64, usize), Arc<FracTable>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry((alpha.to_bits(), n_max)).or_insert_with(|| Arc::new(Self::build(alpha, n_max))).clone()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_max(&self) -> usize {
        self.density.len() - 1
    }

    /// `E_α^{(n)}(0)`.
    pub fn density(&self, n: usize) -> f64 {
        self.density[n]
    }

    /// `√E_α^{(n)}(0)`.
    pub fn sqrt(&self, n: usize) -> f64 {
        self.sqrt[n]
    }
}

fn check_atoms(base: &DiscreteBaseSpace, eta: &DiscreteConfiguration) {
    assert_eq!(base.len(), eta.atoms(), "configuration built for a different base space");
}

/// `λ_μ({η}) = ∏ μ_i^{k_i} / k_i!`.
pub fn lp_weight(base: &DiscreteBaseSpace, eta: &DiscreteConfiguration) -> f64 {
    check_atoms(base, eta);
    eta.counts()
        .iter()
        .zip(base.masses())
        .map(|(&k, &m)| (1..=k).fold(1.0, |acc, j| acc * m / f64::from(j)))
        .product()
}

/// `λ_μ^α({η}) = E_α^{(|η|)}(0) λ_μ({η})`.
pub fn frac_lp_weight(ml: &MlParams, base: &DiscreteBaseSpace, eta: &DiscreteConfiguration) -> f64 {
    factorial_over_gamma(ml.alpha, eta.len() as u32) * lp_weight(base, eta)
}

/// `(KG)(γ) = Σ_{η ⊆ γ} G(η)`, enumerating sub-multisets. Each sub-multiset
/// choosing `j_i` of the `k_i` points at atom `i` stands for `∏ C(k_i, j_i)`
/// sub-configurations.
pub fn k_transform(g: &ConfigFunction, gamma: &DiscreteConfiguration) -> Result<Complex64> {
    if gamma.atoms() != g.atoms() {
        return Err(Error::InvalidParameter(format!("{} atoms, expected {}", gamma.atoms(), g.atoms())));
    }
    if gamma.len() > N_MAX {
        return Err(Error::Support(format!("|γ| = {} exceeds {N_MAX}", gamma.len())));
    }
    Ok(gamma.sub_multisets().iter().map(|eta| g.get(eta) * sub_count(eta, gamma)).sum())
}

/// [`k_transform`] summed over the non-zero entries of `G` instead; no size
/// limit on `γ`.
pub fn k_transform_sparse(g: &ConfigFunction, gamma: &DiscreteConfiguration) -> Complex64 {
    g.iter().map(|(eta, v)| v * sub_count(eta, gamma)).sum()
}

/// Number of sub-configurations of `γ` with multiset `η`, `∏ C(γ_i, η_i)`.
pub fn sub_count(eta: &DiscreteConfiguration, gamma: &DiscreteConfiguration) -> f64 {
    eta.counts().iter().zip(gamma.counts()).map(|(&j, &k)| binomial(k, j)).product()
}

fn integral<W: Fn(&DiscreteConfiguration) -> f64>(g: &ConfigFunction, n_cap: usize, w: W) -> Result<Complex64> {
    if let Some((eta, _)) = g.iter().find(|(eta, _)| eta.len() > n_cap) {
        return Err(Error::Cap(format!("G is non-zero at {eta}, beyond n_cap = {n_cap}")));
    }
    Ok(multisets_upto(g.atoms(), n_cap).iter().map(|eta| g.get(eta) * w(eta)).sum())
}

/// `∫ G dλ_μ` over all `|η| <= n_cap`.
pub fn lp_integral(base: &DiscreteBaseSpace, g: &ConfigFunction, n_cap: usize) -> Result<Complex64> {
    integral(g, n_cap, |eta| lp_weight(base, eta))
}

/// `∫ G dλ_μ^α` over all `|η| <= n_cap`.
pub fn frac_lp_integral(ml: &MlParams, base: &DiscreteBaseSpace, g: &ConfigFunction, n_cap: usize) -> Result<Complex64> {
    integral(g, n_cap, |eta| frac_lp_weight(ml, base, eta))
}

/// `e_λ(f, η) = ∏_{x∈η} f(x)`.
pub fn coherent_state(f: &DiscreteField, eta: &DiscreteConfiguration) -> Complex64 {
    assert_eq!(f.len(), eta.atoms(), "field built for a different base space");
    eta.counts().iter().zip(&f.0).map(|(&k, v)| v.powu(k)).product()
}

/// `e_α(f, η) = e_λ(f, η) / √E_α^{(|η|)}(0)`.
pub fn frac_coherent(ml: &MlParams, f: &DiscreteField, eta: &DiscreteConfiguration) -> Complex64 {
    coherent_state(f, eta) / factorial_over_gamma(ml.alpha, eta.len() as u32).sqrt()
}

/// `e_λ(f)` tabulated on `|η| <= n_cap`.
pub fn coherent_function(f: &DiscreteField, n_cap: usize) -> ConfigFunction {
    ConfigFunction::from_fn(f.len(), n_cap, |eta| coherent_state(f, eta))
}

/// `e_α(f)` tabulated on `|η| <= n_cap`.
pub fn frac_coherent_function(ml: &MlParams, f: &DiscreteField, n_cap: usize) -> ConfigFunction {
    ConfigFunction::from_fn(f.len(), n_cap, |eta| frac_coherent(ml, f, eta))
}

/// `(I_α G)(η) = √E_α^{(|η|)}(0) G(η)`, from `L²(λ_μ^α)` to `L²(λ_μ)`.
pub fn i_alpha(ml: &MlParams, g: &ConfigFunction) -> ConfigFunction {
    g.map_values(|eta, v| v * factorial_over_gamma(ml.alpha, eta.len() as u32).sqrt())
}

/// Inverse of [`i_alpha`].
pub fn i_alpha_inv(ml: &MlParams, g: &ConfigFunction) -> ConfigFunction {
    g.map_values(|eta, v| v / factorial_over_gamma(ml.alpha, eta.len() as u32).sqrt())
}

/// `⟨G, H⟩_{λ_μ}`.
pub fn lp_inner(base: &DiscreteBaseSpace, g: &ConfigFunction, h: &ConfigFunction) -> Complex64 {
    g.inner(h, |eta| lp_weight(base, eta))
}

/// `⟨G, H⟩_{λ_μ^α}`.
pub fn frac_lp_inner(ml: &MlParams, base: &DiscreteBaseSpace, g: &ConfigFunction, h: &ConfigFunction) -> Complex64 {
    g.inner(h, |eta| frac_lp_weight(ml, base, eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn weights_of_small_configurations() {
        let base = DiscreteBaseSpace::new(vec![2.0, 0.5]).unwrap();
        assert_eq!(lp_weight(&base, &DiscreteConfiguration::empty(2)), 1.0);
        assert_eq!(lp_weight(&base, &DiscreteConfiguration::from_counts(vec![1, 0])), 2.0);
        assert_eq!(lp_weight(&base, &DiscreteConfiguration::from_counts(vec![2, 0])), 2.0);
        let ml = MlParams::new(0.5).unwrap();
        let pair = DiscreteConfiguration::from_counts(vec![1, 1]);
        assert_relative_eq!(frac_lp_weight(&ml, &base, &pair), 2.0 * lp_weight(&base, &pair), max_relative = 1e-14);
        let one = MlParams::new(1.0).unwrap();
        assert_eq!(frac_lp_weight(&one, &base, &pair), lp_weight(&base, &pair));
    }

    #[test]
    fn k_transform_examples() {
        let gamma = DiscreteConfiguration::from_counts(vec![2, 1, 0]);
        let empty = ConfigFunction::indicator(3, &[DiscreteConfiguration::empty(3)]).unwrap();
        assert_eq!(k_transform(&empty, &gamma).unwrap(), c(1.0));
        let x0 = ConfigFunction::indicator(3, &[DiscreteConfiguration::from_counts(vec![1, 0, 0])]).unwrap();
        assert_eq!(k_transform(&x0, &gamma).unwrap(), c(2.0));
        assert_eq!(k_transform_sparse(&x0, &gamma), c(2.0));
        let big = DiscreteConfiguration::from_counts(vec![9, 0, 0]);
        assert!(matches!(k_transform(&x0, &big), Err(Error::Support(_))));
        assert_eq!(k_transform_sparse(&x0, &big), c(9.0));
    }

    #[test]
    fn integrals_respect_cap() {
        let base = DiscreteBaseSpace::new(vec![1.0, 2.0]).unwrap();
        let g = ConfigFunction::indicator(2, &[DiscreteConfiguration::empty(2)]).unwrap();
        assert_eq!(lp_integral(&base, &g, 0).unwrap(), c(1.0));
        let h = ConfigFunction::indicator(2, &[DiscreteConfiguration::from_counts(vec![1, 1])]).unwrap();
        assert!(matches!(lp_integral(&base, &h, 1), Err(Error::Cap(_))));
        assert_eq!(lp_integral(&base, &h, 2).unwrap(), c(2.0));
    }

    #[test]
    fn classical_coherent_integral() {
        let base = DiscreteBaseSpace::new(vec![0.3, 0.7, 0.2]).unwrap();
        let f = DiscreteField::real(&[0.5, -0.4, 1.1]).unwrap();
        let e = coherent_function(&f, 14);
        let total = lp_integral(&base, &e, 14).unwrap();
        let exact = base.pairing(&f, &DiscreteField::real(&[1.0; 3]).unwrap()).exp();
        assert!((total - exact).norm() < 1e-12);
    }

    #[test]
    fn i_alpha_round_trip_and_coherent_states() {
        let ml = MlParams::new(0.6).unwrap();
        let f = DiscreteField::new(vec![Complex64::new(0.3, 0.2), Complex64::new(-0.5, 1.0)]).unwrap();
        let ea = frac_coherent_function(&ml, &f, 4);
        assert!(i_alpha(&ml, &ea).max_abs_diff(&coherent_function(&f, 4)) < 1e-15);
        assert!(i_alpha_inv(&ml, &i_alpha(&ml, &ea)).max_abs_diff(&ea) < 1e-15);
        assert_eq!(frac_coherent(&ml, &f, &DiscreteConfiguration::empty(2)), c(1.0));
        let one = MlParams::new(1.0).unwrap();
        assert_eq!(i_alpha(&one, &ea), ea);
    }

    #[test]
    fn table_is_shared() {
        let a = FracTable::get(0.37, 6);
        let b = FracTable::get(0.37, 6);
        assert!(Arc::ptr_eq(&a, &b));
        assert_relative_eq!(a.density(2), 2.0 / crate::special::gamma(1.74), max_relative = 1e-14);
        assert_relative_eq!(a.sqrt(3) * a.sqrt(3), a.density(3), max_relative = 1e-15);
    }
}
