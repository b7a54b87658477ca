use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_positive, Error, Result};

/// Which side of its bounding plane a half-space fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// z ≥ offset.
    Upper,
    /// z ≤ offset.
    Lower,
}

/// A homogeneous body, or a single polarizable atom.
///
/// Balls and cubes are placed by their center; cubes are axis aligned. The
/// cylinder is infinite along z with its axis through the origin, and its
/// extensive quantities are per unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Ball {
        radius: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    Cube {
        side: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    Cylinder {
        radius: f64,
        per_unit_length: bool,
    },
    HalfSpace {
        offset: f64,
        orientation: Orientation,
    },
    /// offset ≤ z ≤ offset + thickness.
    Slab {
        thickness: f64,
        offset: f64,
    },
    PointAtom {
        position: [f64; 3],
        alpha: f64,
    },
}

impl Body {
    pub fn ball(radius: f64) -> Result<Self> {
        Body::Ball {
            radius,
            center: [0.0; 3],
        }
        .validated()
    }

    pub fn cube(side: f64) -> Result<Self> {
        Body::Cube {
            side,
            center: [0.0; 3],
        }
        .validated()
    }

    pub fn cylinder(radius: f64) -> Result<Self> {
        Body::Cylinder {
            radius,
            per_unit_length: true,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |p: &[f64; 3]| {
            if p.iter().all(|c| c.is_finite()) {
                Ok(())
            } else {
                domain(format!("position {p:?} is not finite"))
            }
        };
        match self {
            Body::Ball { radius, center } => {
                require_positive("ball radius", *radius)?;
                finite(center)
            }
            Body::Cube { side, center } => {
                require_positive("cube side", *side)?;
                finite(center)
            }
            Body::Cylinder {
                radius,
                per_unit_length,
            } => {
                require_positive("cylinder radius", *radius)?;
                if !per_unit_length {
                    return Err(Error::Capability(
                        "only infinite cylinders reported per unit length are modeled".into(),
                    ));
                }
                Ok(())
            }
            Body::HalfSpace { offset, .. } => {
                if offset.is_finite() {
                    Ok(())
                } else {
                    domain("half-space offset must be finite")
                }
            }
            Body::Slab { thickness, offset } => {
                require_positive("slab thickness", *thickness)?;
                if offset.is_finite() {
                    Ok(())
                } else {
                    domain("slab offset must be finite")
                }
            }
            Body::PointAtom { position, alpha } => {
                finite(position)?;
                if *alpha >= 0.0 && alpha.is_finite() {
                    Ok(())
                } else {
                    domain(format!("atomic polarizability must be >= 0, got {alpha}"))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Body::Ball { .. } => "ball",
            Body::Cube { .. } => "cube",
            Body::Cylinder { .. } => "cylinder",
            Body::HalfSpace { .. } => "half_space",
            Body::Slab { .. } => "slab",
            Body::PointAtom { .. } => "point_atom",
        }
    }

    /// The length used to make the body dimensionless: radius or side.
    pub fn size(&self) -> Option<f64> {
        match *self {
            Body::Ball { radius, .. } | Body::Cylinder { radius, .. } => Some(radius),
            Body::Cube { side, .. } => Some(side),
            Body::Slab { thickness, .. } => Some(thickness),
            _ => None,
        }
    }

    /// Largest separation inside the body; for the cylinder, of its cross-section.
    pub fn diameter(&self) -> Option<f64> {
        match *self {
            Body::Ball { radius, .. } | Body::Cylinder { radius, .. } => Some(2.0 * radius),
            Body::Cube { side, .. } => Some(side * 3f64.sqrt()),
            _ => None,
        }
    }

    /// Volume, or cross-section area for the cylinder.
    pub fn measure(&self) -> Option<f64> {
        match *self {
            Body::Ball { radius, .. } => Some(4.0 / 3.0 * PI * radius.powi(3)),
            Body::Cube { side, .. } => Some(side.powi(3)),
            Body::Cylinder { radius, .. } => Some(PI * radius * radius),
            _ => None,
        }
    }

    /// Dimension of the region whose pair distances are measured.
    pub fn pair_dimension(&self) -> Option<usize> {
        match self {
            Body::Ball { .. } | Body::Cube { .. } => Some(3),
            Body::Cylinder { .. } => Some(2),
            _ => None,
        }
    }

    /// Whether a point, relative to the body's center, is inside. Only the
    /// finite bodies and the cylinder cross-section (first two coordinates)
    /// are answered.
    pub(crate) fn contains_centered(&self, p: &[f64]) -> bool {
        match *self {
            Body::Ball { radius, .. } => p.iter().map(|c| c * c).sum::<f64>() <= radius * radius,
            Body::Cube { side, .. } => p.iter().all(|c| c.abs() <= 0.5 * side),
            Body::Cylinder { radius, .. } => p[0] * p[0] + p[1] * p[1] <= radius * radius,
            _ => false,
        }
    }

    /// Half-width of the centered box that encloses the (cross-section of the) body.
    pub(crate) fn half_extent(&self) -> Option<f64> {
        match *self {
            Body::Ball { radius, .. } | Body::Cylinder { radius, .. } => Some(radius),
            Body::Cube { side, .. } => Some(0.5 * side),
            _ => None,
        }
    }

    /// Radius of the smallest centered sphere containing the body.
    pub(crate) fn circumradius(&self) -> Option<f64> {
        self.diameter().map(|d| 0.5 * d)
    }
}
