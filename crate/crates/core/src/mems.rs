//! Spring-mounted plate facing a fixed plate under the ideal-conductor
//! Casimir pressure.
//!
//! With δ = d/d₀ and τ = t·√(k/m) the equation of motion becomes
//! δ'' = (1 − δ) − λ/δ⁴ − ζδ', where λ = π²ℏcA/(240 k d₀⁵) and ζ = γ/√(km).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{ATMOSPHERE, HBAR_C};
use crate::error::{domain, require_positive, Result};

/// Largest λ with an equilibrium: (1 − δ)δ⁴ peaks at δ = 4/5.
pub const LAMBDA_CRITICAL: f64 = 256.0 / 3125.0;
/// Gap of the marginal equilibrium at λ = λ*.
pub const MARGINAL_GAP: f64 = 0.8;
/// Default contact floor in units of d₀.
pub const CONTACT_FLOOR: f64 = 1e-3;
/// Fewest steps per linearized period accepted by [`simulate`].
pub const MIN_STEPS_PER_PERIOD: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorConfig {
    /// k (N/m)
    pub spring_constant: f64,
    /// d₀ (m)
    pub rest_gap: f64,
    /// A (m²)
    pub plate_area: f64,
    /// m (kg)
    pub plate_mass: f64,
    /// γ (kg/s)
    pub damping: f64,
}

impl OscillatorConfig {
    pub fn new(
        spring_constant: f64,
        rest_gap: f64,
        plate_area: f64,
        plate_mass: f64,
        damping: f64,
    ) -> Result<Self> {
        let c = OscillatorConfig {
            spring_constant,
            rest_gap,
            plate_area,
            plate_mass,
            damping,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("spring constant", self.spring_constant)?;
        require_positive("rest gap", self.rest_gap)?;
        require_positive("plate area", self.plate_area)?;
        require_positive("plate mass", self.plate_mass)?;
        if !(self.damping.is_finite() && self.damping >= 0.0) {
            return domain(format!(
                "damping must be finite and >= 0, got {}",
                self.damping
            ));
        }
        Ok(())
    }

    /// √(k/m) (rad/s)
    pub fn natural_frequency(&self) -> f64 {
        (self.spring_constant / self.plate_mass).sqrt()
    }

    /// ζ = γ/√(km)
    pub fn damping_ratio(&self) -> f64 {
        self.damping / (self.spring_constant * self.plate_mass).sqrt()
    }

    /// k d₀², the energy unit of the dimensionless Hamiltonian.
    pub fn energy_scale(&self) -> f64 {
        self.spring_constant * self.rest_gap * self.rest_gap
    }
}

/// λ = π²ℏcA/(240 k d₀⁵)
pub fn lambda_param(config: &OscillatorConfig) -> f64 {
    PI * PI * HBAR_C * config.plate_area
        / (240.0 * config.spring_constant * config.rest_gap.powi(5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    /// δ = d/d₀
    pub gap: f64,
    pub stability: Stability,
    /// k_eff/k = 1 − 4λ/δ⁵; the sign fixes the stability.
    pub stiffness: f64,
}

fn net_force(delta: f64, lambda: f64) -> f64 {
    (1.0 - delta) - lambda / delta.powi(4)
}

fn balance(delta: f64, lambda: f64) -> f64 {
    (1.0 - delta) * delta.powi(4) - lambda
}

/// Root of `f` on [lo, hi] given f(lo) and f(hi) of opposite sign, to the
/// last representable bit.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return if f(lo).abs() < f(hi).abs() { lo } else { hi };
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn classify(delta: f64, lambda: f64, marginal: bool) -> Equilibrium {
    let stiffness = 1.0 - 4.0 * lambda / delta.powi(5);
    let stability = if marginal {
        Stability::Marginal
    } else if stiffness > 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    Equilibrium {
        gap: delta,
        stability,
        stiffness,
    }
}

/// Equilibria of (1 − δ)δ⁴ = λ on (0, 1], largest gap first.
pub fn equilibria_for_lambda(lambda: f64) -> Result<Vec<Equilibrium>> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return domain(format!("λ must be finite and >= 0, got {lambda}"));
    }
    if lambda == 0.0 {
        return Ok(vec![classify(1.0, 0.0, false)]);
    }
    if (lambda - LAMBDA_CRITICAL).abs() <= 4.0 * f64::EPSILON * LAMBDA_CRITICAL {
        return Ok(vec![classify(MARGINAL_GAP, lambda, true)]);
    }
    if lambda > LAMBDA_CRITICAL {
        return Ok(Vec::new());
    }
    let g = |d: f64| balance(d, lambda);
    let upper = bisect(g, MARGINAL_GAP, 1.0);
    let lower = bisect(g, 0.0, MARGINAL_GAP);
    Ok(vec![
        classify(upper, lambda, false),
        classify(lower, lambda, false),
    ])
}

pub fn equilibria(config: &OscillatorConfig) -> Vec<Equilibrium> {
    equilibria_for_lambda(lambda_param(config)).expect("λ of a valid config is positive")
}

fn stable_gap(lambda: f64) -> Option<f64> {
    equilibria_for_lambda(lambda)
        .ok()?
        .into_iter()
        .find(|e| e.stability == Stability::Stable)
        .map(|e| e.gap)
}

/// Dimensionless H = ½v² + ½(δ − 1)² − λ/3δ³.
pub fn dimensionless_energy(delta: f64, velocity: f64, lambda: f64) -> f64 {
    0.5 * velocity * velocity + 0.5 * (delta - 1.0).powi(2) - lambda / (3.0 * delta.powi(3))
}

/// Linearized period about the stable equilibrium, or 2π/ω₀ without one.
pub fn linearized_period(config: &OscillatorConfig) -> f64 {
    let lambda = lambda_param(config);
    let kappa = stable_gap(lambda).map_or(1.0, |d| 1.0 - 4.0 * lambda / d.powi(5));
    2.0 * PI / (config.natural_frequency() * kappa.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    /// m
    pub initial_gap: f64,
    /// m/s
    pub initial_velocity: f64,
    /// s
    pub duration: f64,
    /// s
    pub timestep: f64,
    /// In units of d₀.
    pub contact_floor: f64,
    /// Keep every n-th step in the trajectory.
    pub record_every: usize,
}

impl SimulationOptions {
    pub fn new(initial_gap: f64, initial_velocity: f64, duration: f64, timestep: f64) -> Self {
        SimulationOptions {
            initial_gap,
            initial_velocity,
            duration,
            timestep,
            contact_floor: CONTACT_FLOOR,
            record_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub gap: f64,
    pub velocity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub lambda: f64,
    pub points: Vec<TrajectoryPoint>,
    /// Time at which the gap reached the contact floor.
    pub contact_time: Option<f64>,
    pub steps: u64,
    /// J
    pub initial_energy: f64,
    pub final_energy: f64,
    /// max |H − H₀|/|H₀| over all steps.
    pub max_energy_deviation: f64,
}

impl Trajectory {
    pub fn last(&self) -> TrajectoryPoint {
        *self.points.last().unwrap()
    }
}

/// Velocity Verlet in dimensionless time, with the damping applied as an
/// exact half-step decay on either side (Strang splitting).
pub fn simulate(config: &OscillatorConfig, opts: &SimulationOptions) -> Result<Trajectory> {
    config.validate()?;
    let d0 = config.rest_gap;
    if !(opts.initial_gap > 0.0 && opts.initial_gap <= d0) {
        return domain(format!(
            "initial gap must lie in (0, {d0}], got {}",
            opts.initial_gap
        ));
    }
    require_positive("duration", opts.duration)?;
    require_positive("timestep", opts.timestep)?;
    if !opts.initial_velocity.is_finite() {
        return domain("initial velocity must be finite");
    }
    if !(opts.contact_floor > 0.0 && opts.contact_floor < 1.0) {
        return domain(format!(
            "contact floor must lie in (0, 1), got {}",
            opts.contact_floor
        ));
    }
    if opts.record_every == 0 {
        return domain("record_every must be at least 1");
    }
    let period = linearized_period(config);
    if opts.timestep * MIN_STEPS_PER_PERIOD > period * (1.0 + 1e-12) {
        return domain(format!(
            "timestep {:e} s resolves the period {period:e} s by fewer than {MIN_STEPS_PER_PERIOD} steps",
            opts.timestep
        ));
    }
    if opts.initial_gap <= opts.contact_floor * d0 {
        return domain("initial gap is already below the contact floor");
    }

    let lambda = lambda_param(config);
    let w0 = config.natural_frequency();
    let dt = opts.timestep * w0;
    let decay = (-0.5 * config.damping_ratio() * dt).exp();
    let steps = (opts.duration / opts.timestep).ceil() as u64;
    let (mut x, mut v) = (opts.initial_gap / d0, opts.initial_velocity / (d0 * w0));
    let h0 = dimensionless_energy(x, v, lambda);
    let mut max_dev: f64 = 0.0;
    let point = |n: u64, x: f64, v: f64| TrajectoryPoint {
        t: n as f64 * opts.timestep,
        gap: x * d0,
        velocity: v * d0 * w0,
    };
    let mut points = vec![point(0, x, v)];
    let mut contact_time = None;
    let mut f = net_force(x, lambda);
    let mut n = 0;
    while n < steps {
        n += 1;
        v *= decay;
        v += 0.5 * dt * f;
        x += dt * v;
        if x <= opts.contact_floor {
            // Latched at the floor; the crossing time is resolved to one step.
            contact_time = Some(n as f64 * opts.timestep);
            x = opts.contact_floor;
            points.push(point(n, x, v));
            break;
        }
        f = net_force(x, lambda);
        v += 0.5 * dt * f;
        v *= decay;
        max_dev = max_dev.max((dimensionless_energy(x, v, lambda) - h0).abs());
        if n % opts.record_every as u64 == 0 || n == steps {
            points.push(point(n, x, v));
        }
    }
    let scale = config.energy_scale();
    let last = points.last().unwrap();
    Ok(Trajectory {
        lambda,
        contact_time,
        steps: n,
        initial_energy: h0 * scale,
        final_energy: dimensionless_energy(last.gap / d0, last.velocity / (d0 * w0), lambda)
            * scale,
        max_energy_deviation: if h0 != 0.0 {
            max_dev / h0.abs()
        } else {
            max_dev
        },
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    SpringConstant,
    RestGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum BranchState {
    /// δ on the stable branch and the corresponding gap in m.
    Attached {
        gap: f64,
        gap_m: f64,
    },
    Collapsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub lambda: f64,
    pub state: BranchState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepDirection {
    Forward,
    Backward,
}

/// Step at which the stable branch disappears.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullIn {
    pub direction: SweepDirection,
    pub index: usize,
    pub value_before: f64,
    pub value_after: f64,
    pub lambda_before: f64,
    pub lambda_after: f64,
    /// Last attached δ.
    pub gap_before: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchDiagram {
    pub parameter: SweepParameter,
    pub forward: Vec<SweepPoint>,
    pub backward: Vec<SweepPoint>,
    pub pull_in: Option<PullIn>,
}

fn sweep_pass(
    template: &OscillatorConfig,
    parameter: SweepParameter,
    values: &[f64],
    direction: SweepDirection,
    mut collapsed: bool,
    pull_in: &mut Option<PullIn>,
) -> Vec<SweepPoint> {
    let mut out: Vec<SweepPoint> = Vec::with_capacity(values.len());
    for (i, &value) in values.iter().enumerate() {
        let mut c = *template;
        match parameter {
            SweepParameter::SpringConstant => c.spring_constant = value,
            SweepParameter::RestGap => c.rest_gap = value,
        }
        let lambda = lambda_param(&c);
        let state = match (collapsed, stable_gap(lambda)) {
            (false, Some(gap)) => BranchState::Attached {
                gap,
                gap_m: gap * c.rest_gap,
            },
            (false, None) => {
                collapsed = true;
                if pull_in.is_none() {
                    if let Some(SweepPoint {
                        value: vb,
                        lambda: lb,
                        state: BranchState::Attached { gap, .. },
                    }) = out.last().copied()
                    {
                        *pull_in = Some(PullIn {
                            direction,
                            index: i,
                            value_before: vb,
                            value_after: value,
                            lambda_before: lb,
                            lambda_after: lambda,
                            gap_before: gap,
                        });
                    }
                }
                BranchState::Collapsed
            }
            (true, _) => BranchState::Collapsed,
        };
        out.push(SweepPoint {
            value,
            lambda,
            state,
        });
    }
    out
}

/// Quasi-static sweep of k or d₀ from `start` to `end` and back along the
/// stable branch. A collapsed plate never releases.
pub fn hysteresis_sweep(
    template: &OscillatorConfig,
    parameter: SweepParameter,
    start: f64,
    end: f64,
    steps: usize,
) -> Result<BranchDiagram> {
    template.validate()?;
    require_positive("sweep start", start)?;
    require_positive("sweep end", end)?;
    if start == end || steps < 2 {
        return domain("sweep needs distinct endpoints and at least 2 steps");
    }
    let values: Vec<f64> = (0..steps)
        .map(|i| start + (end - start) * i as f64 / (steps - 1) as f64)
        .collect();
    let mut pull_in = None;
    let forward = sweep_pass(
        template,
        parameter,
        &values,
        SweepDirection::Forward,
        false,
        &mut pull_in,
    );
    let collapsed = matches!(forward.last().unwrap().state, BranchState::Collapsed);
    let reversed: Vec<f64> = values.iter().rev().copied().collect();
    let backward = sweep_pass(
        template,
        parameter,
        &reversed,
        SweepDirection::Backward,
        collapsed,
        &mut pull_in,
    );
    Ok(BranchDiagram {
        parameter,
        forward,
        backward,
        pull_in,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPressure {
    /// m
    pub gap: f64,
    pub pascal: f64,
    pub atm: f64,
}

/// |π²ℏc/240d⁴| in Pa and atm.
pub fn pressure_at_gap(gap: f64) -> Result<GapPressure> {
    require_positive("gap", gap)?;
    let p = PI * PI * HBAR_C / (240.0 * gap.powi(4));
    Ok(GapPressure {
        gap,
        pascal: p,
        atm: p / ATMOSPHERE,
    })
}
