//! Pair measures from the autocorrelation of a voxelized body.
//!
//! The body is voxelized on a centered n^d grid (a cell belongs to the body
//! when its center does). Along the last axis every column of a convex body
//! is a single run of cells, so the overlap of two columns as a function of
//! the axial lag is a trapezoid. Each column pair therefore contributes four
//! entries to a second-difference array, and two prefix sums recover the
//! exact integer overlap counts for every lag. Counts are kept only for the
//! non-negative octant; the bodies handled here are symmetric under every
//! axis reflection.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use rayon::prelude::*;

use super::body::Body;
use super::density::{fit_origin, PairDistanceDensity, Piece, Provenance};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

pub const MIN_RESOLUTION: usize = 32;
const ANGULAR_NODES_3D: usize = 48;
const ANGULAR_NODES_2D: usize = 256;
const ORIGIN_SAMPLES: usize = 400;

/// Exact lag counts C(k) = #{cells c : c ∈ B, c + k ∈ B} for k ≥ 0.
#[derive(Debug, Clone)]
pub struct Autocorrelation {
    pub dimension: usize,
    pub resolution: usize,
    /// Cell edge length.
    pub spacing: f64,
    /// Row-major over (n+1)^d lags; the last index along each axis is zero.
    pub counts: Vec<u32>,
}

type Run = Option<(i64, i64)>;

/// Half-open run [lo, hi) of inside cells along the last axis.
fn column_run(inside: impl Fn(usize) -> bool, n: usize) -> Run {
    let first = (0..n).find(|&i| inside(i))?;
    let last = (first..n).rev().find(|&i| inside(i))?;
    Some((first as i64, last as i64 + 1))
}

#[inline]
fn add_trapezoid(diff: &mut [i64], offset: i64, a: (i64, i64), b: (i64, i64)) {
    diff[(offset + b.0 - a.1) as usize] += 1;
    diff[(offset + b.1 - a.1) as usize] -= 1;
    diff[(offset + b.0 - a.0) as usize] -= 1;
    diff[(offset + b.1 - a.0) as usize] += 1;
}

/// Double prefix sum of `diff`, written for lags 0..n into `out`.
fn integrate_trapezoids(diff: &[i64], offset: usize, out: &mut [u32]) {
    let n = out.len() - 1;
    let mut slope = 0i64;
    let mut value = 0i64;
    for (idx, d) in diff.iter().enumerate().take(offset + n) {
        if idx >= offset {
            out[idx - offset] = value as u32;
        }
        slope += d;
        value += slope;
    }
    out[n] = 0;
}

impl Autocorrelation {
    pub fn compute(body: &Body, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::Domain(format!(
                "grid resolution must be >= {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let dimension = body
            .pair_dimension()
            .ok_or_else(|| Error::Capability(format!("grid autocorrelation of {}", body.name())))?;
        let h = body.half_extent().unwrap();
        let n = resolution;
        let spacing = 2.0 * h / n as f64;
        let center = |i: usize| -h + (i as f64 + 0.5) * spacing;
        let counts = match dimension {
            3 => {
                let runs: Vec<Run> = (0..n * n)
                    .map(|c| {
                        let (x, y) = (center(c / n), center(c % n));
                        column_run(|k| body.contains_centered(&[x, y, center(k)]), n)
                    })
                    .collect();
                autocorrelate_3d(&runs, n)
            }
            _ => {
                let runs: Vec<Run> = (0..n)
                    .map(|c| {
                        let x = center(c);
                        column_run(|k| body.contains_centered(&[x, center(k)]), n)
                    })
                    .collect();
                autocorrelate_2d(&runs, n)
            }
        };
        Ok(Autocorrelation {
            dimension,
            resolution,
            spacing,
            counts,
        })
    }

    fn count(&self, idx: &[usize]) -> f64 {
        let m = self.resolution + 1;
        let flat = idx.iter().fold(0, |acc, &i| acc * m + i);
        self.counts[flat] as f64
    }

    /// Overlap measure g(h) of the body with its translate by h.
    pub fn overlap(&self, h: &[f64]) -> f64 {
        let n = self.resolution;
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for (axis, &c) in h.iter().enumerate() {
            let u = c.abs() / self.spacing;
            if u >= n as f64 {
                return 0.0;
            }
            let i = (u.floor() as usize).min(n - 1);
            base[axis] = i;
            frac[axis] = u - i as f64;
        }
        let d = self.dimension;
        let mut total = 0.0;
        for corner in 0..(1usize << d) {
            let mut idx = [0usize; 3];
            let mut w = 1.0;
            for axis in 0..d {
                let bit = (corner >> axis) & 1;
                idx[axis] = base[axis] + bit;
                w *= if bit == 1 {
                    frac[axis]
                } else {
                    1.0 - frac[axis]
                };
            }
            if w != 0.0 {
                total += w * self.count(&idx[..d]);
            }
        }
        total * self.spacing.powi(d as i32)
    }
}

fn autocorrelate_3d(runs: &[Run], n: usize) -> Vec<u32> {
    let m = n + 1;
    let offset = n + 1;
    let slabs: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|kx| {
            let mut slab = vec![0u32; m * m];
            let mut diff = vec![0i64; 2 * n + 3];
            for ky in 0..n {
                diff.iter_mut().for_each(|d| *d = 0);
                let mut any = false;
                for ix in 0..n - kx {
                    for iy in 0..n - ky {
                        if let (Some(a), Some(b)) =
                            (runs[ix * n + iy], runs[(ix + kx) * n + iy + ky])
                        {
                            add_trapezoid(&mut diff, offset as i64, a, b);
                            any = true;
                        }
                    }
                }
                if any {
                    integrate_trapezoids(&diff, offset, &mut slab[ky * m..(ky + 1) * m]);
                }
            }
            slab
        })
        .collect();
    let mut counts = vec![0u32; m * m * m];
    for (kx, slab) in slabs.into_iter().enumerate() {
        counts[kx * m * m..(kx + 1) * m * m].copy_from_slice(&slab);
    }
    counts
}

fn autocorrelate_2d(runs: &[Run], n: usize) -> Vec<u32> {
    let m = n + 1;
    let offset = n + 1;
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|kx| {
            let mut row = vec![0u32; m];
            let mut diff = vec![0i64; 2 * n + 3];
            for ix in 0..n - kx {
                if let (Some(a), Some(b)) = (runs[ix], runs[ix + kx]) {
                    add_trapezoid(&mut diff, offset as i64, a, b);
                }
            }
            integrate_trapezoids(&diff, offset, &mut row);
            row
        })
        .collect();
    let mut counts = vec![0u32; m * m];
    for (kx, row) in rows.into_iter().enumerate() {
        counts[kx * m..(kx + 1) * m].copy_from_slice(&row);
    }
    counts
}

/// Evaluates P(r) = r^(d−1) ∮ g(r·u) dΩ by product Gauss-Legendre over the
/// positive octant (quadrant in 2-D).
pub struct RadialIntegrator<'a> {
    corr: &'a Autocorrelation,
    directions: Vec<([f64; 3], f64)>,
}

impl<'a> RadialIntegrator<'a> {
    pub fn new(corr: &'a Autocorrelation) -> Self {
        let mut directions = Vec::new();
        if corr.dimension == 3 {
            let rule = gauss_legendre(ANGULAR_NODES_3D);
            for &(xm, wm) in &rule {
                let mu = 0.5 * (xm + 1.0);
                let st = (1.0 - mu * mu).sqrt();
                for &(xp, wp) in &rule {
                    let phi = FRAC_PI_2 * 0.5 * (xp + 1.0);
                    // octant solid angle factors: dμ → ½, dφ → π/4, ×8 octants
                    let w = 8.0 * 0.5 * wm * (FRAC_PI_2 * 0.5) * wp;
                    directions.push(([st * phi.cos(), st * phi.sin(), mu], w));
                }
            }
        } else {
            let rule = gauss_legendre(ANGULAR_NODES_2D);
            for &(xp, wp) in &rule {
                let phi = FRAC_PI_2 * 0.5 * (xp + 1.0);
                directions.push(([phi.cos(), phi.sin(), 0.0], 4.0 * FRAC_PI_2 * 0.5 * wp));
            }
        }
        RadialIntegrator { corr, directions }
    }

    pub fn density(&self, r: f64) -> f64 {
        let d = self.corr.dimension;
        let sum: f64 = self
            .directions
            .iter()
            .map(|(u, w)| {
                let h = [r * u[0], r * u[1], r * u[2]];
                w * self.corr.overlap(&h[..d])
            })
            .sum();
        sum * r.powi(d as i32 - 1)
    }
}

/// Breakpoints clustered toward both ends of [lo, hi].
pub(crate) fn cosine_graded(lo: f64, hi: f64, pieces: usize) -> Vec<f64> {
    (0..=pieces)
        .map(|i| {
            lo + (hi - lo) * 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / pieces as f64).cos())
        })
        .collect()
}

/// Breakpoints of the disk tail: uniform on [a/2, 7a/4], then halving
/// toward the square-root endpoint at 2a.
pub(crate) fn disk_tail_edges(a: f64) -> Vec<f64> {
    let mut e: Vec<f64> = (0..=10)
        .map(|i| 0.5 * a + 1.25 * a * i as f64 / 10.0)
        .collect();
    for k in 1..=12 {
        e.push(2.0 * a - 0.25 * a * 0.5f64.powi(k));
    }
    e.push(2.0 * a);
    e
}

/// Piece layout shared by the numerical methods: origin interval, powers of
/// its exact small-r model, and tail breakpoints (graded variant for grids).
pub(crate) struct Layout {
    pub origin_end: f64,
    pub powers: Vec<i32>,
    pub tail: Vec<f64>,
}

pub(crate) fn grid_layout(body: &Body) -> Layout {
    match *body {
        Body::Ball { radius, .. } => Layout {
            origin_end: 2.0 * radius,
            powers: vec![2, 3, 4, 5],
            tail: vec![],
        },
        Body::Cube { side, .. } => {
            let mut tail = cosine_graded(side, SQRT_2 * side, 8);
            tail.extend(
                cosine_graded(SQRT_2 * side, 3f64.sqrt() * side, 8)
                    .into_iter()
                    .skip(1),
            );
            Layout {
                origin_end: side,
                powers: vec![2, 3, 4, 5],
                tail,
            }
        }
        Body::Cylinder { radius, .. } => Layout {
            origin_end: 0.5 * radius,
            powers: vec![1, 2, 3, 4, 6, 8],
            tail: disk_tail_edges(radius),
        },
        _ => unreachable!("layout requested for a body without pair density"),
    }
}

/// Pair measure from the grid autocorrelation at `resolution` cells per axis.
pub fn density(body: &Body, resolution: usize) -> Result<PairDistanceDensity> {
    let corr = Autocorrelation::compute(body, resolution)?;
    let integrator = RadialIntegrator::new(&corr);
    let layout = grid_layout(body);
    let r0 = 3.0 * corr.spacing;
    let samples: Vec<(f64, f64)> = (0..ORIGIN_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let r = r0 + (layout.origin_end - r0) * i as f64 / (ORIGIN_SAMPLES - 1) as f64;
            (r, integrator.density(r))
        })
        .collect();
    let scale = body.size().unwrap();
    let mut pieces = vec![fit_origin(
        &samples,
        layout.origin_end,
        scale,
        &layout.powers,
    )?];
    let tail: Vec<Piece> = layout
        .tail
        .windows(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|w| Piece::chebyshev_from_fn(w[0], w[1], |r| integrator.density(r)))
        .collect();
    pieces.extend(tail);
    PairDistanceDensity::new(
        *body,
        Provenance::GridAutocorrelation { resolution },
        pieces,
    )?
    .renormalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn brute_force_3d(inside: &[bool], n: usize, k: [usize; 3]) -> u32 {
        let mut c = 0;
        for x in 0..n - k[0] {
            for y in 0..n - k[1] {
                for z in 0..n - k[2] {
                    if inside[(x * n + y) * n + z]
                        && inside[((x + k[0]) * n + y + k[1]) * n + z + k[2]]
                    {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn run_length_counts_match_brute_force() {
        let body = Body::ball(1.0).unwrap();
        let n = 32;
        let corr = Autocorrelation::compute(&body, n).unwrap();
        let h = 1.0;
        let s = 2.0 * h / n as f64;
        let c = |i: usize| -h + (i as f64 + 0.5) * s;
        let inside: Vec<bool> = (0..n * n * n)
            .map(|i| body.contains_centered(&[c(i / (n * n)), c((i / n) % n), c(i % n)]))
            .collect();
        let m = n + 1;
        for k in [
            [0, 0, 0],
            [1, 0, 0],
            [0, 3, 7],
            [5, 2, 9],
            [20, 10, 3],
            [31, 0, 0],
            [16, 16, 16],
        ] {
            let flat = (k[0] * m + k[1]) * m + k[2];
            assert_eq!(
                corr.counts[flat],
                brute_force_3d(&inside, n, k),
                "lag {k:?}"
            );
        }
        // zero lag counts the voxelized volume
        let vol = inside.iter().filter(|&&b| b).count() as u32;
        assert_eq!(corr.counts[0], vol);
    }

    #[test]
    fn cube_overlap_is_exact_between_lattice_points() {
        let corr = Autocorrelation::compute(&Body::cube(1.0).unwrap(), 32).unwrap();
        for h in [
            [0.0, 0.0, 0.0],
            [0.1234, 0.5, 0.77],
            [0.9, 0.01, 0.3],
            [0.3, -0.2, 0.1],
        ] {
            let exact: f64 = h.iter().map(|c: &f64| (1.0 - c.abs()).max(0.0)).product();
            assert_relative_eq!(corr.overlap(&h), exact, max_relative = 1e-12);
        }
        assert_eq!(corr.overlap(&[1.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn cube_origin_piece_recovers_exact_polynomial() {
        let p = density(&Body::cube(1.0).unwrap(), 32).unwrap();
        for r in [0.1, 0.4, 0.8, 1.0] {
            let exact = 4.0 * PI * r * r - 6.0 * PI * r.powi(3) + 8.0 * r.powi(4) - r.powi(5);
            assert_relative_eq!(p.eval(r), exact, max_relative = 1e-4);
        }
        p.check_invariants(1e-6).unwrap();
    }

    #[test]
    fn disk_counts_match_brute_force() {
        let body = Body::cylinder(1.0).unwrap();
        let n = 40;
        let corr = Autocorrelation::compute(&body, n).unwrap();
        let s = 2.0 / n as f64;
        let c = |i: usize| -1.0 + (i as f64 + 0.5) * s;
        let inside = |x: usize, y: usize| body.contains_centered(&[c(x), c(y)]);
        for k in [[0, 0], [3, 5], [17, 2], [39, 0], [25, 25]] {
            let mut cnt = 0;
            for x in 0..n - k[0] {
                for y in 0..n - k[1] {
                    if inside(x, y) && inside(x + k[0], y + k[1]) {
                        cnt += 1;
                    }
                }
            }
            assert_eq!(corr.counts[k[0] * (n + 1) + k[1]], cnt);
        }
    }

    #[test]
    fn resolution_floor_and_capability() {
        assert!(matches!(
            density(&Body::ball(1.0).unwrap(), 16),
            Err(Error::Domain(_))
        ));
        let hs = Body::HalfSpace {
            offset: 0.0,
            orientation: super::super::body::Orientation::Upper,
        };
        assert!(matches!(
            Autocorrelation::compute(&hs, 64),
            Err(Error::Capability(_))
        ));
    }
}
