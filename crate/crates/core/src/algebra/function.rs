use super::configuration::{multisets_upto, DiscreteConfiguration};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde_json::{Map, Value};
use std::collections::BTreeMap;

/// Complex function on finite configurations of `M` atoms with bounded
/// support: zero unless `|η| <= n_cap` and every atom of `η` lies in the
/// declared region.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFunction {
    region: Vec<bool>,
    n_cap: usize,
    values: BTreeMap<DiscreteConfiguration, Complex64>,
}

impl ConfigFunction {
    pub fn new(atoms: usize, n_cap: usize) -> Self {
        Self { region: vec![true; atoms], n_cap, values: BTreeMap::new() }
    }

    /// Support restricted to the atoms flagged in `region`.
    pub fn with_region(region: Vec<bool>, n_cap: usize) -> Self {
        Self { region, n_cap, values: BTreeMap::new() }
    }

    /// Tabulates `f` on every multiset with `|η| <= n_cap`.
    pub fn from_fn<F: FnMut(&DiscreteConfiguration) -> Complex64>(atoms: usize, n_cap: usize, mut f: F) -> Self {
        let mut g = Self::new(atoms, n_cap);
        for eta in multisets_upto(atoms, n_cap) {
            let v = f(&eta);
            if v != Complex64::new(0.0, 0.0) {
                g.values.insert(eta, v);
            }
        }
        g
    }

    /// `1_A` for a finite set `A`.
    pub fn indicator(atoms: usize, set: &[DiscreteConfiguration]) -> Result<Self> {
        let n_cap = set.iter().map(DiscreteConfiguration::len).max().unwrap_or(0);
        let mut g = Self::new(atoms, n_cap);
        for eta in set {
            g.set(eta.clone(), Complex64::new(1.0, 0.0))?;
        }
        Ok(g)
    }

    pub fn atoms(&self) -> usize {
        self.region.len()
    }

    pub fn n_cap(&self) -> usize {
        self.n_cap
    }

    pub fn region(&self) -> &[bool] {
        &self.region
    }

    pub fn in_support(&self, eta: &DiscreteConfiguration) -> bool {
        eta.atoms() == self.atoms()
            && eta.len() <= self.n_cap
            && eta.counts().iter().zip(&self.region).all(|(&k, &r)| k == 0 || r)
    }

    pub fn set(&mut self, eta: DiscreteConfiguration, v: Complex64) -> Result<()> {
        if !self.in_support(&eta) {
            return Err(Error::Support(format!("{eta} outside |η| <= {} on region {:?}", self.n_cap, self.region)));
        }
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("value {v} at {eta}")));
        }
        if v == Complex64::new(0.0, 0.0) {
            self.values.remove(&eta);
        } else {
            self.values.insert(eta, v);
        }
        Ok(())
    }

    pub fn get(&self, eta: &DiscreteConfiguration) -> Complex64 {
        self.values.get(eta).copied().unwrap_or_default()
    }

    /// Non-zero entries.
    pub fn iter(&self) -> impl Iterator<Item = (&DiscreteConfiguration, &Complex64)> {
        self.values.iter()
    }

    /// Every configuration of the declared support, including zeros.
    pub fn support(&self) -> Vec<DiscreteConfiguration> {
        multisets_upto(self.atoms(), self.n_cap).into_iter().filter(|e| self.in_support(e)).collect()
    }

    /// `Σ_η G(η) conj(H(η)) w(η)`.
    pub fn inner<W: Fn(&DiscreteConfiguration) -> f64>(&self, other: &ConfigFunction, w: W) -> Complex64 {
        self.values.iter().map(|(eta, g)| g * other.get(eta).conj() * w(eta)).sum()
    }

    /// Largest `|G(η) - H(η)|`.
    pub fn max_abs_diff(&self, other: &ConfigFunction) -> f64 {
        self.values
            .keys()
            .chain(other.values.keys())
            .map(|eta| (self.get(eta) - other.get(eta)).norm())
            .fold(0.0, f64::max)
    }

    /// Same support, values replaced by `f(η, G(η))` on the non-zero entries.
    pub fn map_values<F: Fn(&DiscreteConfiguration, Complex64) -> Complex64>(&self, f: F) -> ConfigFunction {
        let values = self
            .values
            .iter()
            .map(|(eta, v)| (eta.clone(), f(eta, *v)))
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect();
        ConfigFunction { region: self.region.clone(), n_cap: self.n_cap, values }
    }

    /// Adds `v` at `η`, growing nothing: `η` must already be in the support.
    pub(crate) fn accumulate(&mut self, eta: DiscreteConfiguration, v: Complex64) {
        debug_assert!(self.in_support(&eta));
        *self.values.entry(eta).or_default() += v;
    }

    pub(crate) fn prune(mut self) -> Self {
        self.values.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        self
    }

    /// `{"i:k,...": [re, im]}` over the non-zero entries.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (eta, v) in &self.values {
            m.insert(eta.canonical(), Value::from(vec![v.re, v.im]));
        }
        Value::Object(m)
    }

    pub fn from_json(atoms: usize, n_cap: usize, json: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(json)?;
        let obj = v.as_object().ok_or_else(|| Error::Config("expected a JSON object".into()))?;
        let mut g = Self::new(atoms, n_cap);
        for (k, pair) in obj {
            let eta = DiscreteConfiguration::parse(k, atoms)?;
            let nums: Vec<f64> = pair
                .as_array()
                .filter(|a| a.len() == 2)
                .and_then(|a| a.iter().map(Value::as_f64).collect())
                .ok_or_else(|| Error::Config(format!("value of {k:?} must be [re, im]")))?;
            g.set(eta, Complex64::new(nums[0], nums[1]))?;
        }
        Ok(g)
    }
}
