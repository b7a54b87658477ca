//! Pairwise interaction between disjoint bodies by nested quadrature.
//!
//! No cutoff is needed: every integrand stays bounded because the bodies
//! keep a positive separation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::body::{Body, Orientation};
use crate::error::{domain, Error, Result};
use crate::kernel::{Material, RETARDED_COEFF};
use crate::numerics::{de_integrate, de_integrate_to_infinity};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum InteractionEnergy {
    Total(f64),
    /// Per unit area of the facing planes.
    PerArea(f64),
}

impl InteractionEnergy {
    pub fn value(&self) -> f64 {
        match *self {
            InteractionEnergy::Total(v) | InteractionEnergy::PerArea(v) => v,
        }
    }
}

const REL_TOL: f64 = 1e-12;

/// ∫ 2πu (1+u²)^(−7/2) du over [0, ∞); the r⁻⁷ kernel summed over a plane at
/// unit distance. Evaluated by quadrature rather than quoted.
fn plane_sum_unit() -> f64 {
    de_integrate_to_infinity(|u| 2.0 * PI * u * (1.0 + u * u).powf(-3.5), 0.0, 1e-15)
}

/// The z-extent of a planar body as [lo, hi], possibly infinite.
fn planar_extent(body: &Body) -> Option<(f64, f64)> {
    match *body {
        Body::HalfSpace {
            offset,
            orientation: Orientation::Upper,
        } => Some((offset, f64::INFINITY)),
        Body::HalfSpace {
            offset,
            orientation: Orientation::Lower,
        } => Some((f64::NEG_INFINITY, offset)),
        Body::Slab { thickness, offset } => Some((offset, offset + thickness)),
        _ => None,
    }
}

fn separation_check(gap: f64, what: &str) -> Result<()> {
    if gap > 0.0 {
        Ok(())
    } else if gap == 0.0 {
        domain(format!("{what} touch (zero separation)"))
    } else {
        domain(format!("{what} overlap"))
    }
}

/// ∫ over distances z in [near, far] (far may be ∞) of f(z).
fn depth_integral(f: impl Fn(f64) -> f64, near: f64, far: f64, abs_tol: f64) -> f64 {
    if far.is_infinite() {
        de_integrate_to_infinity(f, near, abs_tol)
    } else {
        de_integrate(f, near, far, abs_tol)
    }
}

/// Σ over the body of r⁻⁷ seen from an atom at height z above (or below) a
/// planar body.
fn atom_planar(z_atom: f64, extent: (f64, f64)) -> Result<f64> {
    let (lo, hi) = extent;
    let (near, far) = if z_atom <= lo {
        (lo - z_atom, hi - z_atom)
    } else if z_atom >= hi {
        (z_atom - hi, z_atom - lo)
    } else {
        return domain("atom lies inside the body");
    };
    separation_check(near, "atom and body")?;
    let w = plane_sum_unit();
    let tol = REL_TOL * w / near.powi(4);
    Ok(depth_integral(|z| w * z.powi(-5), near, far, tol))
}

/// Σ over a ball of radius a of r⁻⁷ seen from a point at distance t from its
/// center, by integration over concentric shells.
fn point_ball(t: f64, a: f64) -> f64 {
    let shell = |r: f64| 2.0 * PI * r / (5.0 * t) * ((t - r).powi(-5) - (t + r).powi(-5));
    let scale = a.powi(3) / (t - a).powi(7);
    de_integrate(shell, 0.0, a, REL_TOL * scale)
}

fn point_cube(p: [f64; 3], side: f64, center: [f64; 3]) -> Result<f64> {
    let h = 0.5 * side;
    let rel: Vec<f64> = (0..3).map(|i| p[i] - center[i]).collect();
    let outside: f64 = rel
        .iter()
        .map(|c| (c.abs() - h).max(0.0).powi(2))
        .sum::<f64>()
        .sqrt();
    if rel.iter().all(|c| c.abs() < h) {
        return domain("atom lies inside the cube");
    }
    separation_check(outside, "atom and cube")?;
    let tol = REL_TOL * side.powi(3) / outside.powi(7);
    let lo: Vec<f64> = (0..3).map(|i| center[i] - h - p[i]).collect();
    Ok(split_at_zero(
        |x| {
            split_at_zero(
                |y| {
                    split_at_zero(
                        |z| (x * x + y * y + z * z).powf(-3.5),
                        lo[2],
                        lo[2] + side,
                        tol,
                    )
                },
                lo[1],
                lo[1] + side,
                tol,
            )
        },
        lo[0],
        lo[0] + side,
        tol,
    ))
}

/// Coordinates are relative to the atom, so the integrand peaks at zero;
/// splitting there puts the peak on an endpoint where the rule clusters.
fn split_at_zero(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if lo < 0.0 && hi > 0.0 {
        de_integrate(&f, lo, 0.0, tol) + de_integrate(&f, 0.0, hi, tol)
    } else {
        de_integrate(f, lo, hi, tol)
    }
}

fn ball_ball(a1: f64, a2: f64, d: f64) -> Result<f64> {
    separation_check(d - a1 - a2, "balls")?;
    // shells of ball 2 seen from the center of ball 1
    let tol = REL_TOL * (a1 * a2).powi(3) / (d - a1 - a2).powi(7);
    Ok(de_integrate(
        |r2| {
            if r2 == 0.0 {
                return 0.0;
            }
            2.0 * PI * r2 / d * de_integrate(|t| point_ball(t, a1) * t, d - r2, d + r2, tol)
        },
        0.0,
        a2,
        tol,
    ))
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Pairwise retarded energy ∬ N_A N_B V(|r₁ − r₂|) between two disjoint
/// bodies of the same material; a point atom carries its own polarizability.
///
/// Supported: atom–atom, atom–half-space, atom–slab, atom–ball, atom–cube,
/// ball–ball and any pair of half-spaces and slabs (per unit area).
pub fn interaction_energy_disjoint(
    a: &Body,
    b: &Body,
    material: &Material,
) -> Result<InteractionEnergy> {
    a.validate()?;
    b.validate()?;
    let na = material.n_alpha();
    let k = -RETARDED_COEFF;
    use Body::*;
    match (*a, *b) {
        (
            PointAtom {
                position: p,
                alpha: x,
            },
            PointAtom {
                position: q,
                alpha: y,
            },
        ) => {
            let r = distance(p, q);
            separation_check(r, "atoms")?;
            Ok(InteractionEnergy::Total(k * x * y * r.powi(-7)))
        }
        (PointAtom { position, alpha }, other) | (other, PointAtom { position, alpha }) => {
            match other {
                HalfSpace { .. } | Slab { .. } => {
                    let s = atom_planar(position[2], planar_extent(&other).unwrap())?;
                    Ok(InteractionEnergy::Total(k * alpha * na * s))
                }
                Ball { radius, center } => {
                    let t = distance(position, center);
                    separation_check(t - radius, "atom and ball")?;
                    Ok(InteractionEnergy::Total(
                        k * alpha * na * point_ball(t, radius),
                    ))
                }
                Cube { side, center } => Ok(InteractionEnergy::Total(
                    k * alpha * na * point_cube(position, side, center)?,
                )),
                Cylinder { .. } => Err(Error::Capability("atom-cylinder interaction".into())),
                PointAtom { .. } => unreachable!(),
            }
        }
        (
            Ball {
                radius: r1,
                center: c1,
            },
            Ball {
                radius: r2,
                center: c2,
            },
        ) => Ok(InteractionEnergy::Total(
            k * na * na * ball_ball(r1, r2, distance(c1, c2))?,
        )),
        _ => match (planar_extent(a), planar_extent(b)) {
            (Some(ea), Some(eb)) => {
                let (lower, upper) = if ea.0 <= eb.0 { (ea, eb) } else { (eb, ea) };
                let gap = upper.0 - lower.1;
                if lower.1.is_infinite() || upper.0.is_infinite() {
                    return domain("planar bodies overlap");
                }
                separation_check(gap, "planar bodies")?;
                let (len_lo, len_hi) = (lower.1 - lower.0, upper.1 - upper.0);
                let w = plane_sum_unit();
                let outer_tol = REL_TOL * w / gap.powi(3);
                let e = depth_integral(
                    |u1| {
                        let near = gap + u1;
                        depth_integral(
                            |u2| w * (near + u2).powi(-5),
                            0.0,
                            len_hi,
                            REL_TOL * w / near.powi(4),
                        )
                    },
                    0.0,
                    len_lo,
                    outer_tol,
                );
                Ok(InteractionEnergy::PerArea(k * na * na * e))
            }
            _ => Err(Error::Capability(format!(
                "interaction between {} and {}",
                a.name(),
                b.name()
            ))),
        },
    }
}

/// Pressure between two facing half-spaces, −∂(E/A)/∂d by central difference
/// of [`interaction_energy_disjoint`].
pub fn half_space_pressure(gap: f64, material: &Material) -> Result<f64> {
    let energy = |d: f64| -> Result<f64> {
        let lower = Body::HalfSpace {
            offset: 0.0,
            orientation: Orientation::Lower,
        };
        let upper = Body::HalfSpace {
            offset: d,
            orientation: Orientation::Upper,
        };
        Ok(interaction_energy_disjoint(&lower, &upper, material)?.value())
    };
    let h = 1e-4 * gap;
    Ok(-(energy(gap + h)? - energy(gap - h)?) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairwise::{atom_half_space_pairwise, plate_plate_pairwise_pressure};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn atom(z: f64) -> Body {
        Body::PointAtom {
            position: [0.3, -1.0, z],
            alpha: 1.0,
        }
    }

    fn upper(offset: f64) -> Body {
        Body::HalfSpace {
            offset,
            orientation: Orientation::Upper,
        }
    }

    fn lower(offset: f64) -> Body {
        Body::HalfSpace {
            offset,
            orientation: Orientation::Lower,
        }
    }

    #[test]
    fn atom_half_space_matches_closed_form() {
        let m = Material::new(1.0, 1.0).unwrap();
        for d in [0.5, 1.0, 2.0] {
            let e = interaction_energy_disjoint(&atom(0.0), &upper(d), &m).unwrap();
            let (exact, _) = atom_half_space_pairwise(d, 1.0, 1.0).unwrap();
            assert!(matches!(e, InteractionEnergy::Total(_)));
            assert_relative_eq!(e.value(), exact, max_relative = 1e-6);
            let e = interaction_energy_disjoint(&lower(-d), &atom(0.0), &m).unwrap();
            assert_relative_eq!(e.value(), exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn half_space_pair_energy_and_pressure() {
        let m = Material::perfect_conductor(0.7).unwrap();
        let e = interaction_energy_disjoint(&lower(0.0), &upper(1.0), &m).unwrap();
        let na2 = 9.0 / (16.0 * PI * PI);
        assert!(matches!(e, InteractionEnergy::PerArea(_)));
        assert_relative_eq!(e.value(), -23.0 * na2 / 120.0, max_relative = 1e-9);
        let p = half_space_pressure(1.0, &m).unwrap();
        assert_relative_eq!(p, -207.0 / (640.0 * PI * PI), max_relative = 1e-7);
        assert_relative_eq!(
            p,
            plate_plate_pairwise_pressure(1.0).unwrap(),
            max_relative = 1e-7
        );
    }

    #[test]
    fn slabs_approach_half_spaces() {
        let m = Material::new(1.0, 1.0).unwrap();
        let slab = |offset, thickness| Body::Slab { thickness, offset };
        let thick = interaction_energy_disjoint(&slab(-1e4, 1e4), &slab(1.0, 1e4), &m).unwrap();
        let hs = interaction_energy_disjoint(&lower(0.0), &upper(1.0), &m).unwrap();
        assert_relative_eq!(thick.value(), hs.value(), max_relative = 1e-6);
        // thin slab against atom: single-plane limit
        let t = 1e-4;
        let e = interaction_energy_disjoint(&atom(0.0), &slab(2.0, t), &m)
            .unwrap()
            .value();
        assert_relative_eq!(
            e,
            -RETARDED_COEFF * t * 2.0 * PI / 5.0 / 2f64.powi(5),
            max_relative = 1e-3
        );
    }

    #[test]
    fn atom_ball_matches_shell_closed_form() {
        let m = Material::new(1.0, 1.0).unwrap();
        let a = 1.0;
        for t in [1.2, 2.0, 5.0] {
            let ball = Body::Ball {
                radius: a,
                center: [0.0, 0.0, 0.0],
            };
            let e = interaction_energy_disjoint(
                &Body::PointAtom {
                    position: [0.0, 0.0, t],
                    alpha: 1.0,
                },
                &ball,
                &m,
            )
            .unwrap()
            .value();
            let minus =
                t / 4.0 * ((t - a).powi(-4) - t.powi(-4)) - ((t - a).powi(-3) - t.powi(-3)) / 3.0;
            let plus =
                -((t + a).powi(-3) - t.powi(-3)) / 3.0 + t / 4.0 * ((t + a).powi(-4) - t.powi(-4));
            let exact = -RETARDED_COEFF * 2.0 * PI / (5.0 * t) * (minus - plus);
            assert_relative_eq!(e, exact, max_relative = 1e-9);
        }
    }

    #[test]
    fn far_field_limits() {
        let m = Material::new(0.5, 2.0).unwrap();
        let d = 60.0f64;
        let v = 4.0 * PI / 3.0;
        let point = -RETARDED_COEFF * v * v / d.powi(7);
        let bb = interaction_energy_disjoint(
            &Body::Ball {
                radius: 1.0,
                center: [0.0; 3],
            },
            &Body::Ball {
                radius: 1.0,
                center: [d, 0.0, 0.0],
            },
            &m,
        )
        .unwrap()
        .value();
        assert_relative_eq!(bb, point, max_relative = 1e-2);
        let ac = interaction_energy_disjoint(
            &Body::PointAtom {
                position: [0.0, 0.0, 30.0],
                alpha: 1.0,
            },
            &Body::Cube {
                side: 1.0,
                center: [0.0; 3],
            },
            &m,
        )
        .unwrap()
        .value();
        assert_relative_eq!(ac, -RETARDED_COEFF / 30f64.powi(7), max_relative = 1e-2);
    }

    #[test]
    fn atom_cube_near_face_is_between_plane_bounds() {
        let m = Material::new(1.0, 1.0).unwrap();
        let cube = Body::Cube {
            side: 1.0,
            center: [0.0; 3],
        };
        let e = interaction_energy_disjoint(
            &Body::PointAtom {
                position: [0.0, 0.0, 0.51],
                alpha: 1.0,
            },
            &cube,
            &m,
        )
        .unwrap()
        .value();
        let (slab_like, _) = atom_half_space_pairwise(0.01, 1.0, 1.0).unwrap();
        assert!(e < 0.0 && e > slab_like);
        assert_relative_eq!(e, slab_like, max_relative = 0.05);
    }

    #[test]
    fn overlap_and_contact_are_domain_errors() {
        let m = Material::new(1.0, 1.0).unwrap();
        assert!(matches!(
            interaction_energy_disjoint(&atom(1.0), &upper(1.0), &m),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            interaction_energy_disjoint(&atom(2.0), &upper(1.0), &m),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            interaction_energy_disjoint(&lower(1.0), &upper(1.0), &m),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            interaction_energy_disjoint(&upper(0.0), &upper(1.0), &m),
            Err(Error::Domain(_))
        ));
        let b = |x| Body::Ball {
            radius: 1.0,
            center: [x, 0.0, 0.0],
        };
        assert!(matches!(
            interaction_energy_disjoint(&b(0.0), &b(2.0), &m),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            interaction_energy_disjoint(&b(0.0), &b(1.0), &m),
            Err(Error::Domain(_))
        ));
        let c = Body::Cube {
            side: 1.0,
            center: [0.0; 3],
        };
        let inside = Body::PointAtom {
            position: [0.1, 0.0, 0.0],
            alpha: 1.0,
        };
        assert!(matches!(
            interaction_energy_disjoint(&inside, &c, &m),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unsupported_pairs() {
        let m = Material::new(1.0, 1.0).unwrap();
        let c = Body::cube(1.0).unwrap();
        let cyl = Body::cylinder(1.0).unwrap();
        assert!(matches!(
            interaction_energy_disjoint(&c, &upper(5.0), &m),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            interaction_energy_disjoint(&atom(5.0), &cyl, &m),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            interaction_energy_disjoint(&c, &c, &m),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn empty_material_gives_zero() {
        let m = Material::new(1.0, 0.0).unwrap();
        assert_eq!(
            interaction_energy_disjoint(&atom(0.0), &upper(1.0), &m)
                .unwrap()
                .value(),
            0.0
        );
        assert_eq!(
            interaction_energy_disjoint(&lower(0.0), &upper(1.0), &m)
                .unwrap()
                .value(),
            0.0
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn atom_half_space_scales_as_inverse_fourth_power(log_d in -2.0f64..2.0) {
            let m = Material::new(1.0, 1.0).unwrap();
            let d = 10f64.powf(log_d);
            let e = interaction_energy_disjoint(&atom(0.0), &upper(d), &m).unwrap().value();
            let e1 = interaction_energy_disjoint(&atom(0.0), &upper(1.0), &m).unwrap().value();
            prop_assert!((e * d.powi(4) - e1).abs() <= 1e-8 * e1.abs());
        }
    }
}
