//! Physical constants and the reduced unit system.
//!
//! Everything inside the toolkit runs in reduced units with ℏ = c = 1 and a
//! single free length unit. Energies are then measured in ℏc/L, pressures in
//! ℏc/L⁴. SI values only appear at the input/output boundary.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};

/// Reduced Planck constant ℏ (J·s), CODATA 2018 to 9 significant digits.
pub const HBAR: f64 = 1.054_571_82e-34;
/// Speed of light in vacuum (m/s), exact.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge (C), used for eV conversions.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_63e-19;
/// ℏc (J·m).
pub const HBAR_C: f64 = HBAR * C;
/// One standard atmosphere (Pa).
pub const ATMOSPHERE: f64 = 101_325.0;

/// Named constant values, written into run manifests and `--version`.
pub fn constant_table() -> Vec<(&'static str, f64, &'static str)> {
    vec![
        ("hbar", HBAR, "J s"),
        ("c", C, "m/s"),
        ("k_B", K_B, "J/K"),
        ("e", ELEMENTARY_CHARGE, "C"),
        ("hbar_c", HBAR_C, "J m"),
        ("atm", ATMOSPHERE, "Pa"),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum UnitSystem {
    /// ℏ = c = 1; lengths in an unspecified unit, energies in ℏc/length.
    Reduced,
    /// SI reporting with `length_unit` meters per internal length unit.
    Si { length_unit: f64 },
}

impl UnitSystem {
    pub fn si(length_unit: f64) -> Result<Self> {
        require_positive("length unit", length_unit)?;
        Ok(UnitSystem::Si { length_unit })
    }

    /// Energy in the reporting unit for a value given in reduced units.
    pub fn energy(&self, reduced: f64) -> Result<f64> {
        match *self {
            UnitSystem::Reduced => Ok(reduced),
            UnitSystem::Si { length_unit } => convert_energy(reduced, length_unit),
        }
    }

    /// Pressure in the reporting unit for a value given in ℏc/L⁴.
    pub fn pressure(&self, reduced: f64) -> Result<f64> {
        match *self {
            UnitSystem::Reduced => Ok(reduced),
            UnitSystem::Si { length_unit } => convert_pressure(reduced, length_unit),
        }
    }
}

/// Converts a reduced energy (ℏc / length unit) to joules.
pub fn convert_energy(value: f64, length_unit: f64) -> Result<f64> {
    require_positive("length unit", length_unit)?;
    Ok(value * HBAR_C / length_unit)
}

/// Inverse of [`convert_energy`].
pub fn energy_to_reduced(joules: f64, length_unit: f64) -> Result<f64> {
    require_positive("length unit", length_unit)?;
    Ok(joules * length_unit / HBAR_C)
}

/// Converts a reduced pressure (ℏc / length⁴) to pascal.
pub fn convert_pressure(value: f64, length_unit: f64) -> Result<f64> {
    require_positive("length unit", length_unit)?;
    Ok(value * HBAR_C / length_unit.powi(4))
}
