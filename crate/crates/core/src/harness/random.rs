//! Random test objects for the verification suites.

use crate::algebra::{multisets_upto, BaseOperator, ConfigFunction, DiscreteConfiguration, DiscreteField};
use crate::error::Result;
use crate::fpp::{TestFunction, Window};
use crate::rng::RngStream;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Step function on `window` with `1..=max_pieces` possibly overlapping
/// boxes, heights uniform in `[-height, height]`.
pub fn step_function(window: &Window, max_pieces: usize, height: f64, rng: &mut RngStream) -> Result<TestFunction> {
    let k = rng.random_range(1..=max_pieces.max(1));
    let mut pieces = Vec::with_capacity(k);
    for _ in 0..k {
        let mut lower = Vec::with_capacity(window.dim());
        let mut upper = Vec::with_capacity(window.dim());
        for (l, u) in window.lower().iter().zip(window.upper()) {
            let (a, b) = (rng.uniform(*l, *u), rng.uniform(*l, *u));
            lower.push(a.min(b));
            upper.push(a.max(b));
        }
        pieces.push((Window::new(lower, upper)?, rng.uniform(-height, height)));
    }
    TestFunction::step(window.clone(), pieces)
}

pub fn complex(radius: f64, rng: &mut RngStream) -> Complex64 {
    Complex64::new(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
}

/// Field with real and imaginary parts uniform in `[-radius, radius]`.
pub fn field(m: usize, radius: f64, rng: &mut RngStream) -> DiscreteField {
    DiscreteField((0..m).map(|_| complex(radius, rng)).collect())
}

/// `f` rescaled so that `Σ |f_i|² μ_i = target`.
pub fn field_with_norm(masses: &[f64], target: f64, rng: &mut RngStream) -> DiscreteField {
    let f = field(masses.len(), 1.0, rng);
    let s: f64 = f.0.iter().zip(masses).map(|(v, m)| v.norm_sqr() * m).sum();
    let c = (target / s).sqrt();
    DiscreteField(f.0.iter().map(|v| v * c).collect())
}

pub fn operator(m: usize, rng: &mut RngStream) -> BaseOperator {
    BaseOperator(DMatrix::from_fn(m, m, |_, _| complex(1.0, rng)))
}

/// Dense function on every configuration with `|η| <= n_cap`.
pub fn config_function(m: usize, n_cap: usize, rng: &mut RngStream) -> ConfigFunction {
    ConfigFunction::from_fn(m, n_cap, |_| complex(1.0, rng))
}

/// `size` distinct configurations with `1..=max_len` points.
pub fn config_set(m: usize, max_len: usize, size: usize, rng: &mut RngStream) -> Vec<DiscreteConfiguration> {
    let mut pool: Vec<DiscreteConfiguration> = multisets_upto(m, max_len).into_iter().filter(|e| !e.is_empty()).collect();
    let size = size.min(pool.len());
    for i in 0..size {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(size);
    pool.sort();
    pool
}
