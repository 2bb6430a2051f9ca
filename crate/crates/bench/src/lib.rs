//! Fixtures shared by the benchmarks.

use frakpoisson_core::algebra::{ConfigFunction, DiscreteBaseSpace, DiscreteField};
use frakpoisson_core::harness::random;
use frakpoisson_core::{MlParams, RngStream};

pub fn ml(alpha: f64) -> MlParams {
    MlParams::new(alpha).expect("valid order")
}

pub fn base(atoms: usize) -> DiscreteBaseSpace {
    DiscreteBaseSpace::new((0..atoms).map(|i| 0.3 + 0.1 * i as f64).collect()).expect("positive masses")
}

/// A random function on configurations of size `<= n_cap` and a field.
pub fn operands(atoms: usize, n_cap: usize, seed: u64) -> (ConfigFunction, DiscreteField) {
    let mut rng = RngStream::new(seed, 0);
    (random::config_function(atoms, n_cap, &mut rng), random::field(atoms, 1.0, &mut rng))
}
