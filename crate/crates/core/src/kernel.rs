//! The retarded van der Waals pair kernel, the Clausius-Mossotti material
//! mapping, and the exact reference interactions used for comparison.
//!
//! All functions work in reduced units (ℏ = c = 1).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Error, Result};

/// Coefficient of the retarded pair kernel, 23/4π.
pub const RETARDED_COEFF: f64 = 23.0 / (4.0 * PI);

/// Clausius-Mossotti perfect-conductor limit of Nα, 3/4π.
pub const N_ALPHA_CONDUCTOR: f64 = 3.0 / (4.0 * PI);

/// Dielectric constant with an explicit perfect-conductor sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Epsilon {
    Finite(f64),
    Infinite,
}

impl Epsilon {
    pub fn finite(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return domain(format!("dielectric constant must be >= 1, got {value}"));
        }
        if value.is_infinite() {
            return Ok(Epsilon::Infinite);
        }
        Ok(Epsilon::Finite(value))
    }

    /// The Clausius-Mossotti factor (ε−1)/(ε+2); exactly 1 for the sentinel.
    pub fn cm_factor(&self) -> Result<f64> {
        match *self {
            Epsilon::Infinite => Ok(1.0),
            Epsilon::Finite(e) if e >= 1.0 => Ok((e - 1.0) / (e + 2.0)),
            Epsilon::Finite(e) => domain(format!("dielectric constant must be >= 1, got {e}")),
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon::Finite(e) => write!(f, "{e}"),
            Epsilon::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "conductor" => Ok(Epsilon::Infinite),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("not a dielectric constant: {s:?}")))?;
                Epsilon::finite(v)
            }
        }
    }
}

/// Nα = (3/4π)(ε−1)/(ε+2).
pub fn n_alpha_from_epsilon(epsilon: Epsilon) -> Result<f64> {
    Ok(N_ALPHA_CONDUCTOR * epsilon.cm_factor()?)
}

/// A homogeneous material of identical atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// Static polarizability (length³).
    pub alpha: f64,
    /// Atoms per length³.
    pub number_density: f64,
    /// Set when the material was constructed from a dielectric constant.
    pub epsilon: Option<Epsilon>,
}

impl Material {
    pub fn new(alpha: f64, number_density: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return domain(format!("polarizability must be >= 0, got {alpha}"));
        }
        if !(number_density >= 0.0 && number_density.is_finite()) {
            return domain(format!("number density must be >= 0, got {number_density}"));
        }
        Ok(Material {
            alpha,
            number_density,
            epsilon: None,
        })
    }

    /// Material whose Nα follows from ε through Clausius-Mossotti.
    pub fn from_epsilon(alpha: f64, epsilon: Epsilon) -> Result<Self> {
        require_positive("polarizability", alpha)?;
        let n_alpha = n_alpha_from_epsilon(epsilon)?;
        Ok(Material {
            alpha,
            number_density: n_alpha / alpha,
            epsilon: Some(epsilon),
        })
    }

    pub fn perfect_conductor(alpha: f64) -> Result<Self> {
        Self::from_epsilon(alpha, Epsilon::Infinite)
    }

    pub fn n_alpha(&self) -> f64 {
        self.number_density * self.alpha
    }
}

/// Retarded pair energy −(23/4π) α_a α_b / r⁷ between two atoms.
pub fn retarded_vdw_pair(r: f64, alpha_a: f64, alpha_b: f64) -> Result<f64> {
    require_positive("separation", r)?;
    Ok(-RETARDED_COEFF * alpha_a * alpha_b / r.powi(7))
}

/// Retarded pair energy between identical atoms.
pub fn retarded_vdw(r: f64, alpha: f64) -> Result<f64> {
    retarded_vdw_pair(r, alpha, alpha)
}

/// Atom-wall potential −3α/8πd⁴ for a perfectly conducting wall.
pub fn casimir_polder_potential(d: f64, alpha: f64) -> Result<f64> {
    require_positive("distance", d)?;
    Ok(-3.0 * alpha / (8.0 * PI * d.powi(4)))
}

/// Force per unit area −π²/240d⁴ between perfectly conducting plates.
pub fn casimir_plate_pressure(d: f64) -> Result<f64> {
    require_positive("gap", d)?;
    Ok(-PI * PI / (240.0 * d.powi(4)))
}

/// How a profile handed to [`gradient_force`] is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// The particle's potential energy V(x); force = −∇V.
    Potential,
    /// The mean square field ⟨E²⟩(x); force = +½α∇⟨E²⟩.
    FieldSquare,
}

/// Force on a polarizable particle from a scalar profile, by central
/// differences.
///
/// `profile` returns `None` outside its domain. The step defaults to 1e-5
/// times the local length scale max(|x|, 1).
pub fn gradient_force<F>(
    profile: F,
    kind: ProfileKind,
    alpha: f64,
    x: [f64; 3],
    step: Option<f64>,
) -> Result<[f64; 3]>
where
    F: Fn([f64; 3]) -> Option<f64>,
{
    let scale = x.iter().map(|c| c * c).sum::<f64>().sqrt().max(1.0);
    let h = step.unwrap_or(1e-5 * scale);
    require_positive("finite-difference step", h)?;
    let eval = |p: [f64; 3]| {
        profile(p)
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Domain(format!("profile undefined at {p:?}")))
    };
    eval(x)?;
    let mut grad = [0.0; 3];
    for (axis, g) in grad.iter_mut().enumerate() {
        let mut fwd = x;
        let mut back = x;
        fwd[axis] += h;
        back[axis] -= h;
        *g = (eval(fwd)? - eval(back)?) / (2.0 * h);
    }
    let factor = match kind {
        ProfileKind::Potential => -1.0,
        ProfileKind::FieldSquare => 0.5 * alpha,
    };
    Ok(grad.map(|g| factor * g))
}

/// The Casimir-Polder potential of an atom above a wall in the z = 0 plane,
/// as a profile for [`gradient_force`].
pub fn casimir_polder_profile(alpha: f64) -> impl Fn([f64; 3]) -> Option<f64> {
    move |p: [f64; 3]| casimir_polder_potential(p[2], alpha).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn kernel_values() {
        assert_relative_eq!(
            retarded_vdw(1.0, 1.0).unwrap(),
            -1.830_282,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            retarded_vdw(2.0, 1.0).unwrap(),
            -1.830_282 / 128.0,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            retarded_vdw(1.0, 2.0).unwrap(),
            4.0 * retarded_vdw(1.0, 1.0).unwrap(),
            max_relative = 1e-15
        );
        assert!(retarded_vdw(0.0, 1.0).is_err());
        assert!(retarded_vdw(-1.0, 1.0).is_err());
    }

    #[test]
    fn clausius_mossotti() {
        assert_eq!(n_alpha_from_epsilon(Epsilon::Finite(1.0)).unwrap(), 0.0);
        assert_relative_eq!(
            n_alpha_from_epsilon(Epsilon::Infinite).unwrap(),
            0.238_732_4,
            max_relative = 1e-7
        );
        assert_relative_eq!(
            n_alpha_from_epsilon(Epsilon::Finite(4.0)).unwrap(),
            0.119_366_2,
            max_relative = 1e-6
        );
        assert!(n_alpha_from_epsilon(Epsilon::Finite(0.5)).is_err());
        assert!(Epsilon::finite(0.99).is_err());
        assert_eq!("inf".parse::<Epsilon>().unwrap(), Epsilon::Infinite);
        assert_eq!("4".parse::<Epsilon>().unwrap(), Epsilon::Finite(4.0));
    }

    #[test]
    fn conductor_limit_is_the_ratio_of_the_two_half_space_coefficients() {
        // (69/160π) / (23/40) = 3/4π
        let ratio = (69.0 / (160.0 * PI)) / (23.0 / 40.0);
        assert_relative_eq!(ratio, N_ALPHA_CONDUCTOR, max_relative = 1e-15);
    }

    #[test]
    fn material_invariant() {
        let m = Material::from_epsilon(0.3, Epsilon::Finite(7.5)).unwrap();
        let expected = 3.0 / (4.0 * PI) * (6.5 / 9.5);
        assert_relative_eq!(m.n_alpha(), expected, max_relative = 1e-12);
        assert!(Material::new(-1.0, 1.0).is_err());
        assert!(Material::new(1.0, -1.0).is_err());
    }

    #[test]
    fn reference_formulas() {
        assert_relative_eq!(
            casimir_polder_potential(1.0, 1.0).unwrap(),
            -0.119_366_2,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            casimir_polder_potential(2.0, 1.0).unwrap(),
            casimir_polder_potential(1.0, 1.0).unwrap() / 16.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            casimir_plate_pressure(1.0).unwrap(),
            -0.041_123_4,
            max_relative = 1e-5
        );
        assert_relative_eq!(
            casimir_plate_pressure(10.0).unwrap(),
            -4.112_34e-6,
            max_relative = 1e-5
        );
        assert!(casimir_polder_potential(0.0, 1.0).is_err());
        assert!(casimir_plate_pressure(-2.0).is_err());
    }

    #[test]
    fn casimir_polder_force_points_to_the_wall() {
        let f = gradient_force(
            casimir_polder_profile(1.0),
            ProfileKind::Potential,
            1.0,
            [0.0, 0.0, 1.0],
            None,
        )
        .unwrap();
        // −dV/dd = −12α/(8π d⁵)
        assert_relative_eq!(f[2], -3.0 / (2.0 * PI), max_relative = 1e-8);
        assert_relative_eq!(f[2], -0.477_464_8, max_relative = 1e-6);
        assert!(f[0].abs() < 1e-12 && f[1].abs() < 1e-12);
    }

    #[test]
    fn uniform_and_quadratic_profiles() {
        let f = gradient_force(
            |_| Some(2.5),
            ProfileKind::FieldSquare,
            3.0,
            [0.1, 0.2, 0.3],
            None,
        )
        .unwrap();
        assert_eq!(f, [0.0; 3]);
        let f = gradient_force(
            |p| Some(p[0] * p[0]),
            ProfileKind::FieldSquare,
            2.0,
            [1.0, 0.0, 0.0],
            None,
        )
        .unwrap();
        assert_relative_eq!(f[0], 2.0, max_relative = 1e-9);
    }

    #[test]
    fn outside_profile_domain_is_an_error() {
        // Wall profile is undefined at and behind the wall.
        let res = gradient_force(
            casimir_polder_profile(1.0),
            ProfileKind::Potential,
            1.0,
            [0.0, 0.0, 0.0],
            None,
        );
        assert!(matches!(res, Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn kernel_scales_as_r_to_minus_seven(r in 0.01f64..100.0, lambda in 0.05f64..20.0, a in 0.0f64..5.0) {
            let lhs = retarded_vdw(lambda * r, a).unwrap();
            let rhs = lambda.powi(-7) * retarded_vdw(r, a).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs());
        }

        #[test]
        fn n_alpha_monotone_below_conductor_limit(e1 in 1.0f64..1e6, de in 1e-6f64..1e3) {
            let lo = n_alpha_from_epsilon(Epsilon::Finite(e1)).unwrap();
            let hi = n_alpha_from_epsilon(Epsilon::Finite(e1 + de)).unwrap();
            prop_assert!(hi > lo);
            prop_assert!(hi < N_ALPHA_CONDUCTOR);
        }

        #[test]
        fn gradient_matches_polynomial_derivative(
            c in prop::array::uniform3(-3.0f64..3.0),
            x in prop::array::uniform3(-2.0f64..2.0),
        ) {
            // V = c0 x³ + c1 x y + c2 z²
            let v = move |p: [f64; 3]| Some(c[0] * p[0].powi(3) + c[1] * p[0] * p[1] + c[2] * p[2] * p[2]);
            let f = gradient_force(v, ProfileKind::Potential, 1.0, x, Some(1e-5)).unwrap();
            let exact = [
                -(3.0 * c[0] * x[0] * x[0] + c[1] * x[1]),
                -(c[1] * x[0]),
                -(2.0 * c[2] * x[2]),
            ];
            for i in 0..3 {
                prop_assert!((f[i] - exact[i]).abs() <= 1e-8 * exact[i].abs().max(1.0));
            }
        }
    }
}
