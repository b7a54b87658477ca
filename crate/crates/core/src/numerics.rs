//! Quadrature and least-squares helpers shared by the geometry and fitting
//! code.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n).expect("rule needs at least one node");
    GaussLegendre::new(n).as_node_weight_pairs().to_vec()
}

/// Integrates `f` over [a, b] with a fixed rule from [`gauss_legendre`].
pub fn gl_integrate(rule: &[(f64, f64)], a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * rule
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

/// Double-exponential quadrature over a finite interval.
pub fn de_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    quadrature::double_exponential::integrate(f, a, b, abs_tol).integral
}

/// Double-exponential quadrature over [a, ∞) through x = a + t/(1−t).
pub fn de_integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, abs_tol: f64) -> f64 {
    de_integrate(
        |t| {
            let u = 1.0 - t;
            let x = a + t / u;
            f(x) / (u * u)
        },
        0.0,
        1.0,
        abs_tol,
    )
}

/// Solution of a linear least-squares problem.
#[derive(Debug, Clone)]
pub struct LstsqSolution {
    pub x: DVector<f64>,
    /// Ratio of largest to smallest singular value.
    pub condition_number: f64,
    pub singular_values: DVector<f64>,
}

/// Minimizes ‖A x − b‖₂ by SVD after scaling every column to unit norm.
///
/// The reported condition number is that of the equilibrated matrix.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LstsqSolution> {
    let (m, n) = a.shape();
    if m < n || n == 0 {
        return Err(Error::Fit(format!(
            "{m} equations cannot determine {n} unknowns"
        )));
    }
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    if let Some(j) = norms.iter().position(|&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::Fit(format!("column {j} is zero or not finite")));
    }
    let mut scaled = a.clone();
    for (j, &c) in norms.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / c);
    }
    let svd = scaled.svd(true, true);
    let sv = svd.singular_values.clone();
    let smax = sv.max();
    let smin = sv.min();
    if smin.is_nan() || smin <= smax * 1e3 * f64::EPSILON {
        return Err(Error::Fit(format!(
            "design matrix is rank deficient (singular values {smax:.3e} .. {smin:.3e})"
        )));
    }
    let y = svd
        .solve(b, 0.0)
        .map_err(|e| Error::Fit(format!("SVD solve failed: {e}")))?;
    let x = DVector::from_iterator(n, y.iter().zip(&norms).map(|(v, c)| v / c));
    Ok(LstsqSolution {
        x,
        condition_number: smax / smin,
        singular_values: sv,
    })
}
