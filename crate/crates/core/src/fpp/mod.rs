//! Fractional Poisson counts and point configurations on bounded windows.
//!
//! On a window `Λ` with `m = μ(Λ)` the count law is
//! `P(N = n) = m^n E_α^{(n)}(-m) / n!`, equivalently `N ~ Poisson(τ m)` with
//! `τ ~ ν_α`; given `N` the points are i.i.d. from `μ` normalized on `Λ`.
//! The characteristic functional is `E_α(∫ (e^{iφ} - 1) dμ)`.

mod cf;
mod configuration;
mod intensity;
pub mod io;
mod sampler;
mod test_function;
mod window;

pub use cf::{
    analytic_cf, cf_argument, consistency_check, count_covariance, empirical_cf, psd_check, sample_counts,
    sample_many, CfEstimate, ConsistencyReport, CovarianceEstimate, PSD_MAX_FUNCTIONS,
};
pub use configuration::Configuration;
pub use intensity::{IntensityMeasure, MASS_REL_TOL};
pub use sampler::{
    sample_configuration, sample_count_direct, sample_count_mixture, ConfigurationSampler, CountMethod, CountSampler,
    COUNT_TAIL,
};
pub use test_function::TestFunction;
pub use window::Window;
