//! Quasi-stationary states of cold neutrons skimming along a curved mirror.
//!
//! A neutron grazing a concave mirror at speed `v` is held against the
//! surface by the centrifugal acceleration `v^2/R` and repelled by the
//! material's Fermi potential step `U0`. The resulting effective potential
//! (a linear slope capped by a finite triangular barrier) supports a finite
//! family of quasi-stationary "whispering gallery" states that decay by
//! tunneling through the barrier. This crate computes:
//!
//! - the characteristic scales of the problem ([`scales`]),
//! - Airy functions with overflow-safe scaled variants ([`airy`]),
//! - the complex eigenvalues, widths and lifetimes of the states, plus
//!   semiclassical estimates and critical velocities ([`resonance`]),
//! - the step-like deflected-flux-versus-velocity curves ([`flux`]),
//! - surface-roughness-induced ionization widths and their effect on the
//!   flux steps ([`rough`]),
//! - an independent brute-force shooting solver used to cross-check the
//!   Airy-based eigenvalues ([`shooting`]).
//!
//! All computations are deterministic: no randomness, no global state.

pub mod airy;
pub mod consts;
mod dd;
pub mod error;
pub mod flux;
pub mod resonance;
pub mod rough;
pub mod scales;
pub mod shooting;

pub use airy::{airy_eval, airy_eval_scaled, AiryQuad, ScaledAiryQuad};
pub use flux::{
    deflected_flux, detect_steps, dominant_steps, flux_point, flux_sweep, initial_populations,
    step_contrasts, time_of_flight, velocity_grid, FluxCurve, FluxPoint, FluxStep,
    PopulationModel,
};
pub use consts::PhysicalConstants;
pub use error::{Error, Result};
pub use resonance::{
    critical_velocity_semiclassical, lifetime_crossing, lifetime_curve, matching_residual,
    semiclassical_lambda, solve_lambdas, solve_resonances, LifetimeRow, LifetimeTable, Resonance,
    SemiclassicalEstimate,
};
pub use rough::{
    ionization_probability, ionization_probability_simplified, ionization_probability_tabulated,
    ionization_width, ionization_width_simplified, potential_scaling_check, rough_flux_sweep,
    roughness_frequency, MeanFinalEnergy, RoughnessSpec, RoughnessSpectrum, ScalingCheck,
    ScalingRow,
};
pub use scales::{classical_angular_momentum, make_scales, BeamSpec, MirrorSpec, ScaleSet};
pub use shooting::{oracle_resonances, shoot_mismatch, OracleOutcome, ShootingGrid};

pub use num_complex::Complex64;
