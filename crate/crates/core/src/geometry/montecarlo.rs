//! Pair measures from uniformly sampled point pairs.
//!
//! Samples are split over a fixed number of chunks, each driven by its own
//! ChaCha stream derived from the seed, so the histogram does not depend on
//! how many threads run the chunks.

use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::body::Body;
use super::density::{PairDistanceDensity, Piece, Provenance, CHEBYSHEV_DEGREE};
use super::grid::disk_tail_edges;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, gl_integrate, lstsq};

pub const MIN_SAMPLES: u64 = 100_000;
pub const CHUNKS: usize = 16;

/// A 3×3 rotation applied to the body before sampling. For the cylinder
/// only the upper-left 2×2 block (rotation about the axis) is used.
pub type Rotation = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOptions {
    pub samples: u64,
    pub seed: u64,
    pub rotation: Option<Rotation>,
}

impl MonteCarloOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        MonteCarloOptions {
            samples,
            seed,
            rotation: None,
        }
    }
}

struct Sampler {
    body: Body,
    dim: usize,
    half: f64,
    rotation: Option<Rotation>,
}

impl Sampler {
    fn new(body: &Body, rotation: Option<Rotation>) -> Result<Self> {
        let dim = body.pair_dimension().ok_or_else(|| {
            Error::Capability(format!("Monte Carlo pair density of {}", body.name()))
        })?;
        // A rotated body no longer fills its own bounding box.
        let half = if rotation.is_some() {
            body.circumradius().unwrap()
        } else {
            body.half_extent().unwrap()
        };
        Ok(Sampler {
            body: *body,
            dim,
            half,
            rotation,
        })
    }

    fn point(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        loop {
            let mut p = [0.0; 3];
            for c in p.iter_mut().take(self.dim) {
                *c = rng.random_range(-self.half..self.half);
            }
            // membership of R⁻¹p in the canonical body
            let q = match &self.rotation {
                None => p,
                Some(r) => {
                    let mut q = [0.0; 3];
                    for (i, qi) in q.iter_mut().enumerate().take(self.dim) {
                        *qi = (0..self.dim).map(|j| r[j][i] * p[j]).sum();
                    }
                    q
                }
            };
            if self.body.contains_centered(&q[..self.dim]) {
                return p;
            }
        }
    }
}

fn chunk_sizes(samples: u64) -> Vec<u64> {
    let base = samples / CHUNKS as u64;
    let extra = samples % CHUNKS as u64;
    (0..CHUNKS as u64)
        .map(|k| base + u64::from(k < extra))
        .collect()
}

/// Per-chunk histograms of pair distances over ascending `edges`.
/// Distances outside [edges[0], edges[last]) are dropped.
pub fn chunk_histograms(
    body: &Body,
    opts: &MonteCarloOptions,
    edges: &[f64],
) -> Result<Vec<Vec<u64>>> {
    if opts.samples < MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {}",
            opts.samples
        )));
    }
    let sampler = Sampler::new(body, opts.rotation)?;
    let bins = edges.len() - 1;
    let (lo, hi) = (edges[0], edges[bins]);
    Ok(chunk_sizes(opts.samples)
        .into_par_iter()
        .enumerate()
        .map(|(k, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(k as u64);
            let mut hist = vec![0u64; bins];
            for _ in 0..count {
                let a = sampler.point(&mut rng);
                let b = sampler.point(&mut rng);
                let r = a
                    .iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                if r >= lo && r < hi {
                    let i = edges.partition_point(|&e| e <= r) - 1;
                    hist[i] += 1;
                }
            }
            hist
        })
        .collect())
}

/// Histogram of all chunks together.
pub fn histogram(body: &Body, opts: &MonteCarloOptions, edges: &[f64]) -> Result<Vec<u64>> {
    let chunks = chunk_histograms(body, opts, edges)?;
    let mut total = vec![0u64; edges.len() - 1];
    for h in &chunks {
        for (t, c) in total.iter_mut().zip(h) {
            *t += c;
        }
    }
    Ok(total)
}

struct PieceBins {
    lo: f64,
    hi: f64,
    bins: usize,
    origin: bool,
}

fn mc_layout(body: &Body) -> (Vec<PieceBins>, Vec<i32>) {
    let pb = |lo, hi, bins, origin| PieceBins {
        lo,
        hi,
        bins,
        origin,
    };
    let uniform = |lo: f64, hi: f64, k: usize| -> Vec<PieceBins> {
        (0..k)
            .map(|i| {
                let a = lo + (hi - lo) * i as f64 / k as f64;
                let b = lo + (hi - lo) * (i + 1) as f64 / k as f64;
                pb(a, b, 12, false)
            })
            .collect()
    };
    match *body {
        Body::Ball { radius, .. } => (vec![pb(0.0, 2.0 * radius, 200, true)], vec![2, 3, 4, 5]),
        Body::Cube { side, .. } => {
            let mut v = vec![pb(0.0, side, 100, true)];
            v.extend(uniform(side, 2f64.sqrt() * side, 4));
            v.extend(uniform(2f64.sqrt() * side, 3f64.sqrt() * side, 4));
            (v, vec![2, 3, 4, 5])
        }
        Body::Cylinder { radius, .. } => {
            let mut v = vec![pb(0.0, 0.5 * radius, 100, true)];
            let edges = disk_tail_edges(radius);
            // merge the graded end into pieces wide enough to hold 12 bins
            let stop = edges[10];
            v.extend(uniform(0.5 * radius, stop, 10));
            v.push(pb(stop, 2.0 * radius, 12, false));
            (v, vec![1, 2, 3, 4, 6, 8])
        }
        _ => unreachable!("layout requested for a body without pair density"),
    }
}

fn bin_edges(layout: &[PieceBins]) -> Vec<f64> {
    let mut edges = vec![layout[0].lo];
    for p in layout {
        for i in 1..=p.bins {
            edges.push(p.lo + (p.hi - p.lo) * i as f64 / p.bins as f64);
        }
    }
    edges
}

/// Fits every piece to bin integrals `mass` (one per bin, already scaled to
/// the pair measure).
fn fit_pieces(
    layout: &[PieceBins],
    edges: &[f64],
    mass: &[f64],
    powers: &[i32],
    scale: f64,
) -> Result<Vec<Piece>> {
    let rule = gauss_legendre(4);
    let mut pieces = Vec::with_capacity(layout.len());
    let mut first = 0;
    for p in layout {
        let bins: Vec<(f64, f64, f64)> = (first..first + p.bins)
            .map(|i| (edges[i], edges[i + 1], mass[i]))
            .collect();
        first += p.bins;
        let b = DVector::from_iterator(bins.len(), bins.iter().map(|t| t.2));
        if p.origin {
            let a = DMatrix::from_fn(bins.len(), powers.len(), |i, j| {
                let k = powers[j] + 1;
                ((bins[i].1 / scale).powi(k) - (bins[i].0 / scale).powi(k)) * scale / k as f64
            });
            let sol = lstsq(&a, &b)?;
            pieces.push(Piece::Origin {
                end: p.hi,
                scale,
                powers: powers.to_vec(),
                coefficients: sol.x.iter().copied().collect(),
            });
        } else {
            let (lo, hi) = (p.lo, p.hi);
            let a = DMatrix::from_fn(bins.len(), CHEBYSHEV_DEGREE + 1, |i, j| {
                gl_integrate(&rule, bins[i].0, bins[i].1, |r| {
                    let x = ((2.0 * r - lo - hi) / (hi - lo)).clamp(-1.0, 1.0);
                    (j as f64 * x.acos()).cos()
                })
            });
            let sol = lstsq(&a, &b)?;
            pieces.push(Piece::Chebyshev {
                lo,
                hi,
                coefficients: sol.x.iter().copied().collect(),
            });
        }
    }
    Ok(pieces)
}

/// Pair measure from `opts.samples` uniformly sampled pairs, with the
/// leave-one-chunk-out refits stored as replicates.
pub fn density(body: &Body, opts: &MonteCarloOptions) -> Result<PairDistanceDensity> {
    Sampler::new(body, opts.rotation)?;
    let (layout, powers) = mc_layout(body);
    let edges = bin_edges(&layout);
    let chunks = chunk_histograms(body, opts, &edges)?;
    let bins = edges.len() - 1;
    let mut total = vec![0u64; bins];
    for h in &chunks {
        for (t, c) in total.iter_mut().zip(h) {
            *t += c;
        }
    }
    let v2 = body.measure().unwrap().powi(2);
    let scale = body.size().unwrap();
    let to_mass = |counts: &[u64], n: u64| -> Vec<f64> {
        counts.iter().map(|&c| c as f64 / n as f64 * v2).collect()
    };
    let pieces = fit_pieces(
        &layout,
        &edges,
        &to_mass(&total, opts.samples),
        &powers,
        scale,
    )?;
    let sizes = chunk_sizes(opts.samples);
    let replicates = chunks
        .par_iter()
        .zip(&sizes)
        .map(|(h, &size)| {
            let rest: Vec<u64> = total.iter().zip(h).map(|(t, c)| t - c).collect();
            fit_pieces(
                &layout,
                &edges,
                &to_mass(&rest, opts.samples - size),
                &powers,
                scale,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut density = PairDistanceDensity::new(
        *body,
        Provenance::MonteCarlo {
            samples: opts.samples,
            seed: opts.seed,
        },
        pieces,
    )?;
    density.replicates = replicates;
    density.renormalized()
}
