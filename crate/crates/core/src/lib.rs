//! Fractional Poisson measures at desk scale.

pub mod algebra;
pub mod error;
pub mod fpp;
pub mod harness;
pub mod mittag_leffler;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod stable;
pub mod stats;

pub use error::{Error, Result};
pub use mittag_leffler::{
    count_weights, count_weights_adaptive, ml_deriv, ml_eval, ml_eval_real, ml_oracle, ml_oracle_deriv, survival,
    CountWeights, Enclosure, MlParams,
};
pub use rng::RngStream;
pub use stable::{nu_moment, sample_nu, sample_stable, stable_cdf, stable_density, StableParams};
