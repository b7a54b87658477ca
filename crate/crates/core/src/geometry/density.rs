use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::body::Body;
use crate::error::{domain, Error, Result};
use crate::numerics::{gauss_legendre, gl_integrate, lstsq};

/// Bumped whenever the serialized layout changes; part of the cache key.
pub const FORMAT_VERSION: u32 = 1;

/// Nodes used to build a Chebyshev piece.
pub(crate) const CHEBYSHEV_NODES: usize = 16;
/// Highest Chebyshev degree stored per piece.
pub const CHEBYSHEV_DEGREE: usize = 5;
/// Gauss-Legendre nodes for kernel moments over a Chebyshev piece.
const MOMENT_NODES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    GridAutocorrelation { resolution: usize },
    MonteCarlo { samples: u64, seed: u64 },
}

/// One interval of the piecewise representation of P(r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    /// P(r) = Σ c_k (r/scale)^k on [0, end].
    Origin {
        end: f64,
        scale: f64,
        powers: Vec<i32>,
        coefficients: Vec<f64>,
    },
    /// P(r) = Σ c_j T_j(x) on [lo, hi], x = (2r − lo − hi)/(hi − lo).
    Chebyshev {
        lo: f64,
        hi: f64,
        coefficients: Vec<f64>,
    },
}

fn clenshaw(coefficients: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coefficients.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coefficients.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// ∫ r^e dr from a to b, with the logarithm at e = −1.
fn power_integral(e: i32, a: f64, b: f64) -> f64 {
    if e == -1 {
        (b / a).ln()
    } else {
        let k = (e + 1) as f64;
        (b.powi(e + 1) - a.powi(e + 1)) / k
    }
}

impl Piece {
    pub fn lo(&self) -> f64 {
        match self {
            Piece::Origin { .. } => 0.0,
            Piece::Chebyshev { lo, .. } => *lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match self {
            Piece::Origin { end, .. } => *end,
            Piece::Chebyshev { hi, .. } => *hi,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Piece::Origin {
                scale,
                powers,
                coefficients,
                ..
            } => {
                let x = r / scale;
                powers
                    .iter()
                    .zip(coefficients)
                    .map(|(&k, &c)| c * x.powi(k))
                    .sum()
            }
            Piece::Chebyshev {
                lo,
                hi,
                coefficients,
            } => clenshaw(coefficients, (2.0 * r - lo - hi) / (hi - lo)),
        }
    }

    /// ∫ P(r) r^e dr over [a, b], which must lie inside the piece.
    fn moment(&self, e: i32, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match self {
            Piece::Origin {
                scale,
                powers,
                coefficients,
                ..
            } => powers
                .iter()
                .zip(coefficients)
                .map(|(&k, &c)| c * scale.powi(-k) * power_integral(k + e, a, b))
                .sum(),
            Piece::Chebyshev { .. } => {
                let rule = gauss_legendre(MOMENT_NODES);
                gl_integrate(&rule, a, b, |r| self.eval(r) * r.powi(e))
            }
        }
    }

    fn scaled(&self, factor: f64) -> Piece {
        let mut p = self.clone();
        match &mut p {
            Piece::Origin { coefficients, .. } | Piece::Chebyshev { coefficients, .. } => {
                coefficients.iter_mut().for_each(|c| *c *= factor)
            }
        }
        p
    }

    /// Chebyshev interpolant of degree [`CHEBYSHEV_DEGREE`] through the
    /// values of `f` at Chebyshev-Gauss nodes.
    pub fn chebyshev_from_fn(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Piece {
        let values: Vec<(f64, f64)> = chebyshev_nodes(lo, hi)
            .into_iter()
            .map(|(x, r)| (x, f(r)))
            .collect();
        Piece::Chebyshev {
            lo,
            hi,
            coefficients: chebyshev_coefficients(&values),
        }
    }
}

/// Chebyshev-Gauss nodes as (x in [−1, 1], r in [lo, hi]).
pub(crate) fn chebyshev_nodes(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    (0..CHEBYSHEV_NODES)
        .map(|j| {
            let x = (PI * (j as f64 + 0.5) / CHEBYSHEV_NODES as f64).cos();
            (x, 0.5 * (lo + hi) + 0.5 * (hi - lo) * x)
        })
        .collect()
}

pub(crate) fn chebyshev_coefficients(values: &[(f64, f64)]) -> Vec<f64> {
    let n = values.len() as f64;
    (0..=CHEBYSHEV_DEGREE)
        .map(|k| {
            let s: f64 = values
                .iter()
                .map(|&(x, v)| v * (k as f64 * x.acos()).cos())
                .sum();
            if k == 0 {
                s / n
            } else {
                2.0 * s / n
            }
        })
        .collect()
}

/// Least-squares fit of Σ c_k (r/scale)^k to sampled (r, P) values.
pub(crate) fn fit_origin(
    samples: &[(f64, f64)],
    end: f64,
    scale: f64,
    powers: &[i32],
) -> Result<Piece> {
    let a = DMatrix::from_fn(samples.len(), powers.len(), |i, j| {
        (samples[i].0 / scale).powi(powers[j])
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let sol = lstsq(&a, &b)?;
    Ok(Piece::Origin {
        end,
        scale,
        powers: powers.to_vec(),
        coefficients: sol.x.iter().copied().collect(),
    })
}

/// (end of the origin piece, [(exponent of s, coefficient)], log coefficient).
pub(crate) type OriginSeries = (f64, Vec<(i32, f64)>, f64);

/// Pair-separation measure P(r) of a body: the density of ordered point
/// pairs at distance r, so that ∫P dr is the squared volume (squared
/// cross-section area for the cylinder).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDistanceDensity {
    pub format_version: u32,
    pub body: Body,
    /// 3 for solids, 2 for the cylinder cross-section.
    pub dimension: usize,
    pub scale: f64,
    pub total_measure: f64,
    pub provenance: Provenance,
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Piece>,
    /// Leave-one-chunk-out refits of the pieces (Monte Carlo only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replicates: Vec<Vec<Piece>>,
}

fn breakpoints_of(pieces: &[Piece]) -> Vec<f64> {
    let mut b: Vec<f64> = pieces.iter().map(Piece::lo).collect();
    if let Some(last) = pieces.last() {
        b.push(last.hi());
    }
    b
}

impl PairDistanceDensity {
    pub(crate) fn new(body: Body, provenance: Provenance, pieces: Vec<Piece>) -> Result<Self> {
        let dimension = body
            .pair_dimension()
            .ok_or_else(|| Error::Capability(format!("no pair density for {}", body.name())))?;
        let scale = body.size().expect("finite body has a size");
        let total_measure = body.measure().expect("finite body has a measure").powi(2);
        Ok(PairDistanceDensity {
            format_version: FORMAT_VERSION,
            body,
            dimension,
            scale,
            total_measure,
            provenance,
            breakpoints: breakpoints_of(&pieces),
            pieces,
            replicates: Vec::new(),
        })
    }

    /// Rescales pieces (and replicates) so that ∫P equals the exact squared
    /// measure of the body.
    pub(crate) fn renormalized(mut self) -> Result<Self> {
        let factor = |pieces: &[Piece]| -> Result<f64> {
            let m: f64 = pieces.iter().map(|p| p.moment(0, p.lo(), p.hi())).sum();
            if m > 0.0 && m.is_finite() {
                Ok(self.total_measure / m)
            } else {
                Err(Error::Fit(format!("pair measure integrates to {m}")))
            }
        };
        let f = factor(&self.pieces)?;
        self.pieces = self.pieces.iter().map(|p| p.scaled(f)).collect();
        let mut reps = Vec::with_capacity(self.replicates.len());
        for rep in &self.replicates {
            let f = factor(rep)?;
            reps.push(rep.iter().map(|p| p.scaled(f)).collect());
        }
        self.replicates = reps;
        Ok(self)
    }

    /// Upper end of the support.
    pub fn support_end(&self) -> f64 {
        *self.breakpoints.last().unwrap_or(&0.0)
    }

    /// Exponent p of the effective pair kernel r^−p: 7 in three dimensions,
    /// 6 for the axially integrated cylinder kernel.
    pub fn kernel_power(&self) -> i32 {
        self.dimension as i32 + 4
    }

    pub fn eval(&self, r: f64) -> f64 {
        eval_pieces(&self.pieces, r)
    }

    /// ∫ P(r) dr over [a, b].
    pub fn integral_between(&self, a: f64, b: f64) -> f64 {
        moment_pieces(&self.pieces, 0, a, b)
    }

    pub fn integral(&self) -> f64 {
        self.integral_between(0.0, self.support_end())
    }

    /// Fraction of pairs closer than r.
    pub fn cdf(&self, r: f64) -> f64 {
        self.integral_between(0.0, r) / self.integral()
    }

    /// ∫ P(r) r^e dr over [a, b]; `a` must be positive when e ≤ −1 and the
    /// origin piece is included.
    pub fn moment(&self, e: i32, a: f64, b: f64) -> f64 {
        moment_pieces(&self.pieces, e, a, b)
    }

    /// The same moment for every stored replicate.
    pub fn replicate_moments(&self, e: i32, a: f64, b: f64) -> Vec<f64> {
        self.replicates
            .iter()
            .map(|rep| moment_pieces(rep, e, a, b))
            .collect()
    }

    /// Checks support, positivity, P(0) = 0 and normalization to `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let diameter = self.body.diameter().unwrap_or(f64::INFINITY);
        if self.support_end() > diameter * (1.0 + 1e-12) {
            return domain(format!(
                "support ends at {} beyond the diameter {diameter}",
                self.support_end()
            ));
        }
        if self.eval(0.0) != 0.0 {
            return domain("P(0) must vanish");
        }
        let rel = (self.integral() - self.total_measure).abs() / self.total_measure;
        if rel > tol {
            return domain(format!("∫P deviates from the total measure by {rel:.3e}"));
        }
        let peak = (1..=2000)
            .map(|i| self.eval(self.support_end() * i as f64 / 2000.0))
            .fold(0.0f64, f64::max);
        for i in 0..=2000 {
            let r = self.support_end() * i as f64 / 2000.0;
            if self.eval(r) < -1e-6 * peak {
                return domain(format!("P({r}) is negative"));
            }
        }
        Ok(())
    }

    /// Contribution of the origin piece's power terms to the cutoff series:
    /// returns (exponent of s, coefficient) pairs such that
    /// ∫_s^end Σ c_k (r/L)^k r^−p dr = const − Σ coeff·s^exp, plus the log term.
    pub(crate) fn origin_series(&self) -> Option<OriginSeries> {
        let p = self.kernel_power();
        match self.pieces.first()? {
            Piece::Origin {
                end,
                scale,
                powers,
                coefficients,
            } => {
                let mut terms = Vec::new();
                let mut log_coeff = 0.0;
                for (&k, &c) in powers.iter().zip(coefficients) {
                    let c = c * scale.powi(-k);
                    if k == p - 1 {
                        log_coeff += c;
                    } else {
                        terms.push((k - p + 1, c / (k - p + 1) as f64));
                    }
                }
                Some((*end, terms, log_coeff))
            }
            _ => None,
        }
    }
}

fn eval_pieces(pieces: &[Piece], r: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    for p in pieces {
        if r <= p.hi() {
            return p.eval(r);
        }
    }
    0.0
}

fn moment_pieces(pieces: &[Piece], e: i32, a: f64, b: f64) -> f64 {
    pieces
        .iter()
        .map(|p| p.moment(e, a.max(p.lo()), b.min(p.hi())))
        .sum()
}
