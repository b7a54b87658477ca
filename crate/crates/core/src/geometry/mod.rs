//! Bodies, their pair-separation measures, and the pairwise energies built
//! on them.

pub mod analytic;
pub mod body;
pub mod density;
pub mod grid;
pub mod interaction;
pub mod montecarlo;
pub mod self_energy;

use serde::{Deserialize, Serialize};

pub use body::{Body, Orientation};
pub use density::{PairDistanceDensity, Piece, Provenance};
pub use interaction::{interaction_energy_disjoint, InteractionEnergy};
pub use montecarlo::MonteCarloOptions;
pub use self_energy::SelfEnergy;

use crate::error::{Error, Result};

/// How a pair measure is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum DensityMethod {
    Analytic,
    Grid { resolution: usize },
    MonteCarlo { samples: u64, seed: u64 },
}

/// Builds the pair-separation measure of a ball, cube or infinite cylinder.
///
/// Analytic measures exist for the ball and the cylinder cross-section;
/// grid and Monte Carlo measures for all three.
pub fn pair_distance_density(body: &Body, method: DensityMethod) -> Result<PairDistanceDensity> {
    body.validate()?;
    if body.pair_dimension().is_none() {
        return Err(Error::Capability(format!(
            "no pair density for {}",
            body.name()
        )));
    }
    let mut density = match (method, body) {
        (DensityMethod::Analytic, Body::Ball { radius, .. }) => analytic::ball(*radius)?,
        (DensityMethod::Analytic, Body::Cylinder { radius, .. }) => analytic::cylinder(*radius)?,
        (DensityMethod::Analytic, _) => {
            return Err(Error::Capability(format!(
                "no closed-form pair density for {}",
                body.name()
            )))
        }
        (DensityMethod::Grid { resolution }, _) => grid::density(body, resolution)?,
        (DensityMethod::MonteCarlo { samples, seed }, _) => {
            montecarlo::density(body, &MonteCarloOptions::new(samples, seed))?
        }
    };
    density.body = *body;
    Ok(density)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capability_matrix() {
        let cube = Body::cube(1.0).unwrap();
        assert!(matches!(
            pair_distance_density(&cube, DensityMethod::Analytic),
            Err(Error::Capability(_))
        ));
        let hs = Body::HalfSpace {
            offset: 0.0,
            orientation: Orientation::Upper,
        };
        for m in [
            DensityMethod::Analytic,
            DensityMethod::Grid { resolution: 64 },
            DensityMethod::MonteCarlo {
                samples: 100_000,
                seed: 1,
            },
        ] {
            assert!(matches!(
                pair_distance_density(&hs, m),
                Err(Error::Capability(_))
            ));
        }
        assert!(pair_distance_density(&Body::ball(1.0).unwrap(), DensityMethod::Analytic).is_ok());
        assert!(
            pair_distance_density(&Body::cylinder(1.0).unwrap(), DensityMethod::Analytic).is_ok()
        );
    }

    #[test]
    fn json_round_trip() {
        let p =
            pair_distance_density(&Body::cylinder(1.0).unwrap(), DensityMethod::Analytic).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: PairDistanceDensity = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
