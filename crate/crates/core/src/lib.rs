//! Cooperative single-excitation decay of atom arrays coupled to a
//! half waveguide or to the free-space electromagnetic vacuum, with and
//! without positional and detuning disorder.
//!
//! The pipeline for one disorder realization is
//! [`geometry`] → [`interactions`] → [`spectral`] → [`dynamics`] /
//! [`entanglement`]; [`ensemble`] repeats it over seeded realizations and
//! parameter sweeps, and [`config`] / [`run`] tie everything to plain-text
//! experiment files and reproducible CSV output.

pub mod config;
pub mod dynamics;
pub mod ensemble;
pub mod entanglement;
pub mod error;
pub mod geometry;
pub mod interactions;
pub mod linalg;
pub mod output;
pub mod run;
pub mod seeding;
pub mod spectral;
pub mod units;

pub use faer::c64;

pub use dynamics::{
    fluorescence_spectrum, population_curve, propagate, random_phase_state, site_excitation_state,
    SingleExcitationState, SpectrumResult,
};
pub use entanglement::{mutual_information, subsystem_entropy, BipartiteCut};
pub use error::{Error, Result};
pub use geometry::{
    apply_detuning_disorder, apply_positional_disorder, build_ordered, build_realization,
    ArrayGeometry, DisorderSpec, Environment, LatticeSpec,
};
pub use interactions::{
    build_hamiltonian, green_coupling, hwg_couplings, EffectiveHamiltonian, InteractionMatrices,
};
pub use spectral::{decompose, ipr, mode_profile_table, slowest_rate, ModeDecomposition};
