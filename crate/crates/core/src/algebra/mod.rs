//! Exact discrete model of the configuration-space algebra.
//!
//! The base space is a finite set of atoms with positive masses and finite
//! configurations are multisets of atoms. A configuration with `k_i` points
//! at atom `i` carries Lebesgue-Poisson weight `∏ μ_i^{k_i}/k_i!`, the image
//! of `μ^{⊗n}/n!` under forgetting the order of the points. Every integral
//! is a finite sum, so the identities of the fractional Lebesgue-Poisson
//! calculus can be checked by enumeration.

mod base;
mod checks;
mod configuration;
mod function;
mod measure;
mod operators;

pub use base::{BaseOperator, DiscreteBaseSpace, DiscreteField, M_MAX};
pub use checks::{
    correlation_exact_tuples, correlation_identity_check, correlation_identity_check_many, k_transform_subsets,
    norm_identity_check,
    sample_discrete, totality_witness, CorrelationReport, NormIdentity, TotalityWitness, NORM_LEVEL_MAX, SIGMAS,
};
pub use configuration::{multisets, multisets_upto, DiscreteConfiguration, N_MAX};
pub use function::ConfigFunction;
pub use measure::{
    coherent_function, coherent_state, frac_coherent, frac_coherent_function, frac_lp_inner, frac_lp_integral,
    frac_lp_weight, i_alpha, i_alpha_inv, k_transform, k_transform_sparse, lp_inner, lp_integral, lp_weight, sub_count,
    FracTable,
};
pub use operators::{
    annihilation_alpha, annihilation_alpha_conjugated, annihilation_lp, creation_alpha, creation_alpha_conjugated,
    creation_lp, second_quantization_alpha, second_quantization_alpha_apply, second_quantization_alpha_conjugated,
    second_quantization_apply, second_quantization_lp,
};
