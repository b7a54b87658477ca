//! Hard-core regularized pairwise self-energy: pairs closer than the cutoff
//! s are excluded.

use std::f64::consts::PI;

use super::density::PairDistanceDensity;
use crate::error::{domain, require_positive, Result};
use crate::kernel::{Material, RETARDED_COEFF};

/// ∫ (1 + t²)^(−7/2) dt over the real line: the axial integral that turns
/// the r⁻⁷ kernel into 16/15 ρ⁻⁶.
pub const AXIAL_KERNEL_FACTOR: f64 = 16.0 / 15.0;

/// E(s) = ½N² ∫_s P(r) V(r) dr for one body and material.
#[derive(Debug, Clone)]
pub struct SelfEnergy<'a> {
    pub density: &'a PairDistanceDensity,
    pub material: Material,
}

impl<'a> SelfEnergy<'a> {
    pub fn new(density: &'a PairDistanceDensity, material: Material) -> Self {
        SelfEnergy { density, material }
    }

    /// E(s) = prefactor · ∫_s P(r) r^−p dr.
    pub fn prefactor(&self) -> f64 {
        let kappa = if self.density.dimension == 2 {
            AXIAL_KERNEL_FACTOR
        } else {
            1.0
        };
        -0.5 * RETARDED_COEFF * kappa * self.material.n_alpha().powi(2)
    }

    /// Open interval of admissible cutoffs, (0, diameter/2).
    pub fn cutoff_range(&self) -> (f64, f64) {
        (0.0, 0.5 * self.density.body.diameter().unwrap())
    }

    fn check_cutoff(&self, s: f64) -> Result<()> {
        require_positive("cutoff", s)?;
        let (_, hi) = self.cutoff_range();
        if s >= hi {
            return domain(format!("cutoff {s} must be below half the diameter ({hi})"));
        }
        Ok(())
    }

    pub fn at(&self, s: f64) -> Result<f64> {
        self.check_cutoff(s)?;
        let p = self.density.kernel_power();
        Ok(self.prefactor() * self.density.moment(-p, s, self.density.support_end()))
    }

    /// E(s) for every Monte Carlo replicate (empty otherwise).
    pub fn replicates_at(&self, s: f64) -> Result<Vec<f64>> {
        self.check_cutoff(s)?;
        let p = self.density.kernel_power();
        let pre = self.prefactor();
        Ok(self
            .density
            .replicate_moments(-p, s, self.density.support_end())
            .into_iter()
            .map(|m| pre * m)
            .collect())
    }

    pub fn on_grid(&self, s_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        s_grid.iter().map(|&s| Ok((s, self.at(s)?))).collect()
    }

    /// Divergent coefficients of E(s) as s → 0, read off the origin piece:
    /// (exponent, coefficient) for every s^exponent with exponent < 0, and
    /// the coefficient of ln(1/s).
    pub fn divergent_terms(&self) -> Option<(Vec<(i32, f64)>, f64)> {
        let (_, terms, log) = self.density.origin_series()?;
        let pre = self.prefactor();
        let powers = terms
            .into_iter()
            .filter(|(e, _)| *e < 0)
            .map(|(e, c)| (e, -pre * c))
            .collect();
        Some((powers, pre * log))
    }

    /// The s-independent term of E(s), computed directly from the pieces.
    /// This is the route independent of any fit.
    pub fn finite_part(&self) -> Option<f64> {
        let (end, terms, log) = self.density.origin_series()?;
        let p = self.density.kernel_power();
        let origin: f64 = terms.iter().map(|&(e, c)| c * end.powi(e)).sum::<f64>() + log * end.ln();
        let tail = self.density.moment(-p, end, self.density.support_end());
        Some(self.prefactor() * (origin + tail))
    }
}

/// Exact pure term of the ball, +(207/1536π)(Nα/(3/4π))²/a, expressed
/// through Nα for materials not built from ε.
pub fn ball_pure_from_n_alpha(radius: f64, n_alpha: f64) -> f64 {
    let cm = n_alpha / (3.0 / (4.0 * PI));
    207.0 / (1536.0 * PI) * cm * cm / radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::body::Body;
    use crate::geometry::{analytic, grid};
    use crate::kernel::Epsilon;
    use crate::pairwise::ball_pairwise_pure;
    use approx::assert_relative_eq;

    fn conductor() -> Material {
        Material::perfect_conductor(1.0).unwrap()
    }

    #[test]
    fn ball_finite_part_is_the_pure_term() {
        for a in [1.0, 2.0] {
            let p = analytic::ball(a).unwrap();
            let e = SelfEnergy::new(&p, conductor());
            let fp = e.finite_part().unwrap();
            assert_relative_eq!(
                fp,
                ball_pairwise_pure(a, Epsilon::Infinite).unwrap(),
                max_relative = 1e-12
            );
            let (powers, log) = e.divergent_terms().unwrap();
            assert_eq!(log, 0.0);
            let exps: Vec<i32> = powers.iter().map(|t| t.0).collect();
            assert_eq!(exps, vec![-4, -3, -1]);
        }
    }

    #[test]
    fn ball_series_reproduces_e_of_s() {
        let p = analytic::ball(1.0).unwrap();
        let e = SelfEnergy::new(&p, conductor());
        let (powers, _) = e.divergent_terms().unwrap();
        let fp = e.finite_part().unwrap();
        for s in [0.01f64, 0.1, 0.5, 0.9] {
            let series: f64 = fp + powers.iter().map(|&(k, c)| c * s.powi(k)).sum::<f64>();
            assert_relative_eq!(e.at(s).unwrap(), series, max_relative = 1e-12);
        }
    }

    #[test]
    fn cylinder_finite_part_vanishes() {
        let p = analytic::cylinder(1.0).unwrap();
        let e = SelfEnergy::new(&p, conductor());
        assert!(e.finite_part().unwrap().abs() < 1e-11);
    }

    #[test]
    fn cutoff_range_is_enforced() {
        let p = analytic::ball(1.0).unwrap();
        let e = SelfEnergy::new(&p, conductor());
        assert!(e.at(0.0).is_err());
        assert!(e.at(1.0).is_err());
        assert!(e.at(-0.1).is_err());
        assert!(e.at(0.999).is_ok());
    }

    #[test]
    fn divergent_part_shrinks_with_cutoff() {
        let p = analytic::ball(1.0).unwrap();
        let e = SelfEnergy::new(&p, conductor());
        let vals: Vec<f64> = (1..40).map(|i| e.at(0.02 * i as f64).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1].abs() < w[0].abs()));
    }

    #[test]
    fn empty_material_has_no_energy() {
        let p = analytic::ball(1.0).unwrap();
        let e = SelfEnergy::new(&p, Material::new(1.0, 0.0).unwrap());
        assert_eq!(e.at(0.1).unwrap(), 0.0);
    }

    #[test]
    fn grid_ball_tracks_analytic_above_five_percent() {
        let body = Body::ball(1.0).unwrap();
        let g = grid::density(&body, 64).unwrap();
        let a = analytic::ball(1.0).unwrap();
        let (eg, ea) = (
            SelfEnergy::new(&g, conductor()),
            SelfEnergy::new(&a, conductor()),
        );
        for s in [0.05, 0.1, 0.2, 0.5] {
            assert_relative_eq!(eg.at(s).unwrap(), ea.at(s).unwrap(), max_relative = 5e-3);
        }
    }
}
