//! Closed-form pairwise sums for the half-space, plate and ball geometries,
//! and their comparison against the exact reference interactions.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};
use crate::kernel::{self, Epsilon, N_ALPHA_CONDUCTOR};

/// An exact coefficient of the form (num/den)·π^pi_power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiRational {
    pub num: i64,
    pub den: i64,
    pub pi_power: i32,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PiRational {
    pub const fn new_raw(num: i64, den: i64, pi_power: i32) -> Self {
        PiRational { num, den, pi_power }
    }

    /// Reduced form with a positive denominator. Panics on a zero denominator.
    pub fn new(num: i64, den: i64, pi_power: i32) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        PiRational {
            num: s * num / g,
            den: s * den / g,
            pi_power,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64 * PI.powi(self.pi_power)
    }

    pub fn recip(self) -> Self {
        PiRational::new(self.den, self.num, -self.pi_power)
    }
}

impl Mul for PiRational {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        PiRational::new(
            self.num * other.num,
            self.den * other.den,
            self.pi_power + other.pi_power,
        )
    }
}

impl Div for PiRational {
    type Output = Self;

    fn div(self, other: Self) -> Self {
        PiRational::new(
            self.num * other.den,
            self.den * other.num,
            self.pi_power - other.pi_power,
        )
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.num)?;
        if self.den != 1 {
            write!(f, "/{}", self.den)?;
        }
        match self.pi_power {
            0 => Ok(()),
            1 => write!(f, "·π"),
            p => write!(f, "·π^{p}"),
        }
    }
}

/// Atom-wall coefficient per unit Nα: E = −(23/40)·Nα·α/d⁴.
pub const ATOM_WALL_COEFF: PiRational = PiRational::new_raw(-23, 40, 0);
/// Perfect-conductor Nα, 3/4π.
pub const N_ALPHA_LIMIT: PiRational = PiRational::new_raw(3, 4, -1);
/// Casimir-Polder coefficient, −3/8π.
pub const CASIMIR_POLDER_COEFF: PiRational = PiRational::new_raw(-3, 8, -1);
/// Pairwise plate pressure coefficient, −207/640π².
pub const PLATE_PAIRWISE_COEFF: PiRational = PiRational::new_raw(-207, 640, -2);
/// Exact plate pressure coefficient, −π²/240.
pub const PLATE_EXACT_COEFF: PiRational = PiRational::new_raw(-1, 240, 2);
/// Ball pure term at ε = ∞, 207/1536π.
pub const BALL_PURE_COEFF: PiRational = PiRational::new_raw(207, 1536, -1);

/// Upper bound of the physical range of Nα (perfect conductor).
pub fn n_alpha_in_physical_range(n_alpha: f64) -> bool {
    (0.0..=N_ALPHA_CONDUCTOR * (1.0 + 1e-12)).contains(&n_alpha)
}

/// Pairwise energy of an atom at distance `d` from a half-space.
///
/// Returns the energy together with a warning when Nα lies outside
/// [0, 3/4π], which no real dielectric constant produces.
pub fn atom_half_space_pairwise(d: f64, alpha: f64, n_alpha: f64) -> Result<(f64, Option<String>)> {
    require_positive("distance", d)?;
    let warning = (!n_alpha_in_physical_range(n_alpha))
        .then(|| format!("Nα = {n_alpha} is outside [0, 3/4π]; no dielectric constant maps to it"));
    Ok((
        ATOM_WALL_COEFF.value() * n_alpha * alpha / d.powi(4),
        warning,
    ))
}

/// Pairwise pressure between perfectly conducting half-spaces at gap `d`.
pub fn plate_plate_pairwise_pressure(d: f64) -> Result<f64> {
    require_positive("gap", d)?;
    Ok(PLATE_PAIRWISE_COEFF.value() / d.powi(4))
}

/// Cutoff-independent pairwise self-energy of a ball of radius `a`.
pub fn ball_pairwise_pure(a: f64, epsilon: Epsilon) -> Result<f64> {
    require_positive("radius", a)?;
    let cm = epsilon.cm_factor()?;
    Ok(BALL_PURE_COEFF.value() * cm * cm / a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Whether a generalized force pushes the size parameter up or down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceSense {
    Attractive,
    Repulsive,
    None,
}

impl ForceSense {
    /// Sense of the generalized force −dE/dx on the size parameter x.
    pub fn from_force(force: f64) -> Self {
        match Sign::of(force) {
            Sign::Positive => ForceSense::Repulsive,
            Sign::Negative => ForceSense::Attractive,
            Sign::Zero => ForceSense::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    pub quantity: String,
    /// The size parameter the row is evaluated at.
    pub size_parameter: f64,
    pub pairwise: f64,
    pub exact: f64,
    pub ratio: f64,
    /// Exact ratio, when both coefficients are rational multiples of powers of π.
    pub exact_ratio: Option<String>,
    pub pairwise_sign: Sign,
    pub exact_sign: Sign,
    /// Sense of −dE/dx for the pairwise value; for pressures the value itself.
    pub pairwise_force: ForceSense,
    pub exact_force: ForceSense,
    pub note: Option<String>,
}

/// Reference value for the conducting spherical shell, ℏc/a.
pub const SPHERE_SHELL_EXACT: f64 = 0.09;

/// −dE/dx for E homogeneous of degree −n in x.
fn homogeneous_force(energy: f64, degree: i32, x: f64) -> f64 {
    degree as f64 * energy / x
}

/// The three comparison rows at unit size, all computed from the operations
/// of this module and [`crate::kernel`].
pub fn deviation_report() -> Result<Vec<DeviationRow>> {
    let d = 1.0;
    let alpha = 1.0;

    let (wall_pw, _) = atom_half_space_pairwise(d, alpha, N_ALPHA_CONDUCTOR)?;
    let wall_exact = kernel::casimir_polder_potential(d, alpha)?;
    let wall_ratio = ATOM_WALL_COEFF * N_ALPHA_LIMIT / CASIMIR_POLDER_COEFF;

    let plate_pw = plate_plate_pairwise_pressure(d)?;
    let plate_exact = kernel::casimir_plate_pressure(d)?;
    let plate_ratio = PLATE_PAIRWISE_COEFF / PLATE_EXACT_COEFF;

    let a = 1.0;
    let ball_pw = ball_pairwise_pure(a, Epsilon::Infinite)?;
    let ball_exact = SPHERE_SHELL_EXACT / a;

    Ok(vec![
        DeviationRow {
            quantity: "atom-wall energy".into(),
            size_parameter: d,
            pairwise: wall_pw,
            exact: wall_exact,
            ratio: wall_pw / wall_exact,
            exact_ratio: Some(wall_ratio.to_string()),
            pairwise_sign: Sign::of(wall_pw),
            exact_sign: Sign::of(wall_exact),
            pairwise_force: ForceSense::from_force(homogeneous_force(wall_pw, 4, d)),
            exact_force: ForceSense::from_force(homogeneous_force(wall_exact, 4, d)),
            note: None,
        },
        DeviationRow {
            quantity: "plate-plate pressure".into(),
            size_parameter: d,
            pairwise: plate_pw,
            exact: plate_exact,
            ratio: plate_pw / plate_exact,
            exact_ratio: Some(plate_ratio.to_string()),
            pairwise_sign: Sign::of(plate_pw),
            exact_sign: Sign::of(plate_exact),
            pairwise_force: ForceSense::from_force(plate_pw),
            exact_force: ForceSense::from_force(plate_exact),
            note: None,
        },
        DeviationRow {
            quantity: "sphere self-energy".into(),
            size_parameter: a,
            pairwise: ball_pw,
            exact: ball_exact,
            ratio: ball_pw / ball_exact,
            exact_ratio: None,
            pairwise_sign: Sign::of(ball_pw),
            exact_sign: Sign::of(ball_exact),
            pairwise_force: ForceSense::from_force(homogeneous_force(ball_pw, 1, a)),
            exact_force: ForceSense::from_force(homogeneous_force(ball_exact, 1, a)),
            note: Some("exact value is the conducting spherical shell".into()),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn atom_wall_values() {
        let (e, w) = atom_half_space_pairwise(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(e, -0.575, max_relative = 1e-15);
        assert!(w.is_some());
        let (e, w) = atom_half_space_pairwise(1.0, 1.0, N_ALPHA_CONDUCTOR).unwrap();
        assert_relative_eq!(e, -69.0 / (160.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(e, -0.137_271_1, max_relative = 1e-6);
        assert!(w.is_none());
        let (e, _) = atom_half_space_pairwise(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(e, -0.575 / 16.0, max_relative = 1e-15);
        assert!(atom_half_space_pairwise(0.0, 1.0, 0.1).is_err());
        assert!(atom_half_space_pairwise(1.0, 1.0, -0.1)
            .unwrap()
            .1
            .is_some());
    }

    #[test]
    fn plate_values() {
        assert_relative_eq!(
            plate_plate_pairwise_pressure(1.0).unwrap(),
            -0.032_771_0,
            max_relative = 1e-5
        );
        assert_relative_eq!(
            plate_plate_pairwise_pressure(10.0).unwrap(),
            -3.277_10e-6,
            max_relative = 1e-5
        );
        let r = plate_plate_pairwise_pressure(1.0).unwrap()
            / kernel::casimir_plate_pressure(1.0).unwrap();
        assert_relative_eq!(r, 0.796_897, max_relative = 1e-6);
        assert!(plate_plate_pairwise_pressure(-1.0).is_err());
    }

    #[test]
    fn ball_values() {
        assert_relative_eq!(
            ball_pairwise_pure(1.0, Epsilon::Infinite).unwrap(),
            0.042_897_2,
            max_relative = 1e-6
        );
        assert_eq!(ball_pairwise_pure(1.0, Epsilon::Finite(1.0)).unwrap(), 0.0);
        assert_relative_eq!(
            ball_pairwise_pure(2.0, Epsilon::Infinite).unwrap(),
            0.021_448_5,
            max_relative = 1e-5
        );
        assert!(ball_pairwise_pure(0.0, Epsilon::Infinite).is_err());
    }

    #[test]
    fn exact_ratios() {
        let wall = ATOM_WALL_COEFF * N_ALPHA_LIMIT / CASIMIR_POLDER_COEFF;
        assert_eq!(wall, PiRational::new(23, 20, 0));
        let plate = PLATE_PAIRWISE_COEFF / PLATE_EXACT_COEFF;
        assert_eq!(plate, PiRational::new(621, 8, -4));
        assert_relative_eq!(plate.value(), 0.796_897, max_relative = 1e-6);
        assert_eq!(wall.to_string(), "23/20");
        assert_eq!(plate.to_string(), "621/8·π^-4");
    }

    #[test]
    fn report_rows() {
        let rows = deviation_report().unwrap();
        assert_eq!(rows.len(), 3);
        assert!((rows[0].ratio - 1.15).abs() <= 1e-12);
        assert!((rows[1].ratio - 621.0 / (8.0 * PI.powi(4))).abs() <= 1e-12);
        assert_eq!(format!("{:.4}", rows[1].ratio), "0.7969");
        assert_eq!(rows[2].pairwise_sign, Sign::Positive);
        assert_eq!(rows[2].exact_sign, Sign::Positive);
        assert_eq!(rows[2].pairwise_force, ForceSense::Repulsive);
        assert_eq!(rows[0].pairwise_force, ForceSense::Attractive);
        assert_eq!(rows[1].exact_force, ForceSense::Attractive);
        assert_relative_eq!(rows[2].pairwise, 0.043, max_relative = 0.01);
    }

    proptest! {
        #[test]
        fn conductor_limit_is_fixed_multiple_of_casimir_polder(d in 1e-3f64..1e3, alpha in 1e-3f64..1e3) {
            let (pw, _) = atom_half_space_pairwise(d, alpha, N_ALPHA_CONDUCTOR).unwrap();
            let cp = kernel::casimir_polder_potential(d, alpha).unwrap();
            prop_assert!((pw - 1.15 * cp).abs() <= 1e-12 * cp.abs());
        }

        #[test]
        fn plate_ratio_is_gap_independent(log_d in -3.0f64..3.0) {
            let d = 10f64.powf(log_d);
            let r = plate_plate_pairwise_pressure(d).unwrap() / kernel::casimir_plate_pressure(d).unwrap();
            prop_assert!((r - 621.0 / (8.0 * PI.powi(4))).abs() <= 1e-12);
        }

        #[test]
        fn ball_monotone_in_epsilon_and_homogeneous(e in 1.0f64..1e4, de in 1e-3f64..1e3, a in 1e-2f64..1e2, k in 0.1f64..10.0) {
            let lo = ball_pairwise_pure(a, Epsilon::Finite(e)).unwrap();
            let hi = ball_pairwise_pure(a, Epsilon::Finite(e + de)).unwrap();
            prop_assert!(hi > lo);
            prop_assert!(ball_pairwise_pure(a, Epsilon::Infinite).unwrap() > hi);
            let scaled = ball_pairwise_pure(k * a, Epsilon::Finite(e + de)).unwrap();
            prop_assert!((scaled * k - hi).abs() <= 1e-12 * hi);
        }
    }
}
