//! Closed-form pair-separation measures.

use std::f64::consts::PI;

use super::body::Body;
use super::density::{PairDistanceDensity, Piece, Provenance};
use crate::error::Result;

/// Terms kept from the disk series on [0, a/2]; the next one is below 1e-17
/// relative.
const DISK_SERIES_TERMS: usize = 16;
const DISK_TAIL_TOL: f64 = 1e-13;

/// Ball of radius a: P(r) = V²(3r²/a³ − 9r³/4a⁴ + 3r⁵/16a⁶) on [0, 2a].
pub fn ball(radius: f64) -> Result<PairDistanceDensity> {
    let body = Body::ball(radius)?;
    let v = body.measure().unwrap();
    let k = v * v / radius;
    let origin = Piece::Origin {
        end: 2.0 * radius,
        scale: radius,
        powers: vec![2, 3, 5],
        coefficients: vec![3.0 * k, -2.25 * k, 0.1875 * k],
    };
    PairDistanceDensity::new(body, Provenance::Analytic, vec![origin])
}

/// Pair measure of a disk of radius a,
/// P(ρ) = 4πa²ρ [acos x − x√(1−x²)], x = ρ/2a.
pub fn disk_density(radius: f64, rho: f64) -> f64 {
    if !(0.0..=2.0 * radius).contains(&rho) {
        return 0.0;
    }
    let x = (rho / (2.0 * radius)).min(1.0);
    4.0 * PI * radius * radius * rho * (x.acos() - x * (1.0 - x * x).sqrt())
}

/// Coefficients b_n = (−1)ⁿ·C(1/2, n) of √(1−y) = Σ b_n yⁿ.
fn sqrt_series(n_terms: usize) -> Vec<f64> {
    let mut b = Vec::with_capacity(n_terms);
    let mut binom = 1.0;
    for n in 0..n_terms {
        b.push(if n % 2 == 0 { binom } else { -binom });
        binom *= (0.5 - n as f64) / (n as f64 + 1.0);
    }
    b
}

fn adaptive_chebyshev(lo: f64, hi: f64, f: &dyn Fn(f64) -> f64, scale: f64, out: &mut Vec<Piece>) {
    let piece = Piece::chebyshev_from_fn(lo, hi, f);
    let err = (1..8)
        .map(|i| {
            let r = lo + (hi - lo) * (i as f64 - 0.5) / 7.0;
            (piece.eval(r) - f(r)).abs()
        })
        .fold(0.0, f64::max);
    if err <= DISK_TAIL_TOL * scale || hi - lo < 1e-10 * scale.max(1.0).min(hi) {
        out.push(piece);
    } else {
        let mid = 0.5 * (lo + hi);
        adaptive_chebyshev(lo, mid, f, scale, out);
        adaptive_chebyshev(mid, hi, f, scale, out);
    }
}

/// Infinite cylinder of radius a: the pair measure of its disk cross-section.
///
/// A power series in ρ/a is used up to a/2 and adaptive Chebyshev pieces
/// beyond.
pub fn cylinder(radius: f64) -> Result<PairDistanceDensity> {
    let body = Body::cylinder(radius)?;
    let a = radius;
    // 4πa²ρ [π/2 − 2 Σ b_n x^(2n+1)/(2n+1)], x = ρ/2a
    let mut powers = vec![1];
    let mut coefficients = vec![2.0 * PI * PI * a.powi(3)];
    for (n, b) in sqrt_series(DISK_SERIES_TERMS).into_iter().enumerate() {
        let m = 2 * n + 1;
        powers.push(m as i32 + 1);
        coefficients.push(-8.0 * PI * a.powi(3) * b / (m as f64) / 2f64.powi(m as i32));
    }
    let mut pieces = vec![Piece::Origin {
        end: 0.5 * a,
        scale: a,
        powers,
        coefficients,
    }];
    let f = move |r: f64| disk_density(a, r);
    let peak = 4.0 * PI * a.powi(3);
    let mut edges = vec![0.5 * a, a, 1.5 * a, 2.0 * a];
    edges.dedup();
    for w in edges.windows(2) {
        adaptive_chebyshev(w[0], w[1], &f, peak, &mut pieces);
    }
    PairDistanceDensity::new(body, Provenance::Analytic, pieces)
}
