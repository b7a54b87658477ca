//! Pairwise retarded van der Waals approximations to Casimir energies, the
//! vacuum drag force on a moving atom, and the Casimir MEMS oscillator.

pub mod constants;
pub mod error;
pub mod extract;
pub mod geometry;
pub mod kernel;
pub mod mems;
pub mod numerics;
pub mod pairwise;
pub mod spectra;

pub use error::{Error, Result};
pub use extract::{
    extract_pure_term, pure_term_report, Basis, BasisTerm, CutoffExpansion, CutoffWindow,
    FitConfig, PureTermConfig, PureTermRow,
};
pub use geometry::{
    interaction_energy_disjoint, pair_distance_density, Body, DensityMethod, InteractionEnergy,
    PairDistanceDensity, Provenance,
};
pub use kernel::{Epsilon, Material};
pub use mems::{
    equilibria, hysteresis_sweep, lambda_param, pressure_at_gap, simulate, OscillatorConfig,
};
pub use pairwise::{deviation_report, DeviationRow};
pub use spectra::{
    drag_force, eval_spectral, unruh_acceleration, unruh_temperature, vacuum_energy_budget,
    SpectralDensity, TwoLevelAtom,
};
