//! Classical capacity of Gaussian thermal memory channels.
//!
//! A memory channel applies, at every use, a thermal attenuator or amplifier
//! whose environment is a memory mode mixed with fresh thermal noise. A
//! passive change of basis splits `n` uses into `n` memoryless channels;
//! as `n → ∞` their transmissivities follow the spectral symbol `η(z)`, and
//! the capacity is a water-filled integral over that symbol.
//!
//! Modules, bottom up:
//!
//! - [`numerics`]: entropy `g`, quadrature, bisection, eigensolvers
//! - [`channel`]: memoryless parameters, regimes and capacities
//! - [`memory_model`]: finite-`n` coefficient matrices and spectra
//! - [`spectrum`]: the asymptotic symbol, Toeplitz limits and duality
//! - [`waterfill`]: optimal energy distribution, critical temperature and energy
//! - [`capacity`]: asymptotic capacity, special cases, bounds, additive noise

pub mod capacity;
pub mod channel;
mod error;
pub mod memory_model;
pub mod numerics;
pub mod spectrum;
pub mod waterfill;

pub use capacity::{
    additive_capacity, additive_lambda, amplifier_limit, asymptotic_capacity, finite_p_bounds, integral_capacity,
    special_case_capacity, BoundsPair, CapacityMethod, CapacityResult,
};
pub use channel::{classify, compose, memoryless_capacity, ChannelKind, ChannelParams, Regime, Threshold};
pub use error::{Error, Result};
pub use memory_model::{
    additive_noise_covariance, build_mode_transform, closed_form_m, finite_spectrum, max_uses, Divergent,
    FiniteSpectrum, ModeTransform,
};
pub use numerics::{g, QuadratureResult};
pub use spectrum::{dual_params, eta_of_z, szego_check, toeplitz_truncation, AsymptoticSpectrum, SzegoReport};
pub use waterfill::{
    critical_energy, critical_temperature, optimal_distribution, solve_lambda, unconstrained_n, EnergyDistribution,
};
