use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Pairwise Casimir energies, vacuum drag and the Casimir oscillator",
    args_override_self = true
)]
pub struct Cli {
    /// Flat TOML file of flag values for the subcommand; flags given on the
    /// command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Run directory [default: casimir-runs/<subcommand>-<config hash>].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Worker threads. Affects speed only.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,

    /// Directory holding cached pair measures.
    #[arg(
        long,
        global = true,
        value_name = "DIR",
        default_value = ".casimir-cache"
    )]
    pub cache_dir: PathBuf,

    /// Neither read nor write the pair-measure cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise against exact results for atom-wall, plates and the ball.
    #[command(args_override_self = true)]
    Compare(CompareArgs),
    /// Convergent interaction energy of two disjoint bodies.
    #[command(args_override_self = true)]
    Pairwise(PairwiseArgs),
    /// Cutoff-independent term of the pairwise self-energy of a body.
    #[command(args_override_self = true)]
    PureTerm(PureTermArgs),
    /// Velocity drag on a two-level atom in a radiation spectrum.
    #[command(args_override_self = true)]
    Drag(DragArgs),
    /// Unruh temperature and acceleration conversions.
    #[command(args_override_self = true)]
    Unruh(UnruhArgs),
    /// Cutoff estimate of the vacuum energy density.
    #[command(args_override_self = true)]
    Cosmo(CosmoArgs),
    /// Spring-mounted plate under the Casimir pressure.
    #[command(args_override_self = true)]
    Mems(MemsArgs),
    /// Inspect or clear the pair-measure cache.
    #[command(args_override_self = true)]
    Cache(CacheArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compare(_) => "compare",
            Command::Pairwise(_) => "pairwise",
            Command::PureTerm(_) => "pure-term",
            Command::Drag(_) => "drag",
            Command::Unruh(_) => "unruh",
            Command::Cosmo(_) => "cosmo",
            Command::Mems(_) => "mems",
            Command::Cache(_) => "cache",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairGeometry {
    AtomWall,
    Plates,
    AtomBall,
    AtomCube,
    BallBall,
    AtomSlab,
    Slabs,
}

#[derive(Debug, Args, Serialize)]
pub struct PairwiseArgs {
    #[arg(long, value_enum, default_value = "atom-wall")]
    pub geometry: PairGeometry,
    /// Surface-to-surface (or atom-to-surface) separation.
    #[arg(long, default_value_t = 1.0)]
    pub distance: f64,
    /// Ball radius, cube side or slab thickness.
    #[arg(long, default_value_t = 1.0)]
    pub size: f64,
    /// Atomic polarizability.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Dielectric constant fixing Nα; `inf` for a perfect conductor.
    #[arg(long, default_value = "inf", value_parser = parse_epsilon)]
    pub epsilon: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BodyKind {
    Ball,
    Cube,
    Cylinder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodKind {
    Analytic,
    Grid,
    Mc,
}

#[derive(Debug, Args, Serialize)]
pub struct PureTermArgs {
    #[arg(long, value_enum)]
    pub body: BodyKind,
    /// Ball radius, cube side or cylinder radius.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value = "inf", value_parser = parse_epsilon)]
    pub epsilon: String,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Pair-measure method [default: analytic for the ball, grid otherwise].
    #[arg(long, value_enum)]
    pub method: Option<MethodKind>,
    /// Grid points per axis [default: 128 for the cube, 2048 for the cylinder].
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Monte Carlo point pairs.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Monte Carlo seed; required with `--method mc`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Second grid resolution for the doubling check [default: twice the
    /// resolution for the cylinder].
    #[arg(long)]
    pub refine: Option<usize>,
    /// Skip the doubling check.
    #[arg(long)]
    pub no_refine: bool,
    /// Smallest cutoff, in units of a.
    #[arg(long, default_value_t = 0.02)]
    pub s_min: f64,
    /// Largest cutoff, in units of a.
    #[arg(long, default_value_t = 0.3)]
    pub s_max: f64,
    #[arg(long, default_value_t = 24)]
    pub points: usize,
    /// Comma-separated fit terms, e.g. `s-4,s-3,s-2,s-1,log,1`.
    #[arg(long)]
    pub basis: Option<String>,
    #[arg(long, default_value_t = 1e8)]
    pub max_condition: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub residual_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    Vacuum,
    Planck,
    ScaledVacuum,
    Tabulated,
}

#[derive(Debug, Args, Serialize)]
pub struct DragArgs {
    #[arg(long, value_enum, default_value = "planck")]
    pub spectrum: SpectrumKind,
    /// Field temperature (K); also sets thermal populations unless `--p1` is given.
    #[arg(long, default_value_t = 300.0)]
    pub temperature: f64,
    /// Multiplier of the vacuum spectrum.
    #[arg(long, default_value_t = 1.0)]
    pub factor: f64,
    /// Two-column CSV of ω (rad/s) and ρ (J s/m³).
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
    /// Transition angular frequency (rad/s).
    #[arg(long, default_value_t = 1e14)]
    pub omega: f64,
    /// Einstein absorption coefficient.
    #[arg(long, default_value_t = 1.0)]
    pub b12: f64,
    /// Lower-level population; the upper level gets 1 − p1.
    #[arg(long)]
    pub p1: Option<f64>,
    /// Atom velocity (m/s).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub velocity: f64,
    /// Also evaluate this many random (ω, v) pairs into drag.csv.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    /// Seed for `--random`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1e11)]
    pub omega_min: f64,
    #[arg(long, default_value_t = 1e15)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 1e4)]
    pub v_max: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("input").required(true).args(["temperature", "acceleration"])))]
pub struct UnruhArgs {
    /// K
    #[arg(long)]
    pub temperature: Option<f64>,
    /// m/s²
    #[arg(long)]
    pub acceleration: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct CosmoArgs {
    /// Shortest wavelength kept (m).
    #[arg(long, default_value_t = 1e-35)]
    pub cutoff_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    K,
    D0,
}

#[derive(Debug, Args, Serialize)]
pub struct MemsArgs {
    /// Spring constant (N/m).
    #[arg(long)]
    pub k: f64,
    /// Rest gap (m).
    #[arg(long)]
    pub d0: f64,
    /// Plate area (m²).
    #[arg(long)]
    pub area: f64,
    /// Plate mass (kg).
    #[arg(long, default_value_t = 1e-9)]
    pub mass: f64,
    /// Damping coefficient (kg/s).
    #[arg(long, default_value_t = 0.0)]
    pub damping: f64,
    /// Also report the Casimir pressure at this gap (m).
    #[arg(long)]
    pub pressure_gap: Option<f64>,
    /// Integrate the equation of motion into trajectory.csv.
    #[arg(long)]
    pub simulate: bool,
    /// Starting gap (m) [default: d0].
    #[arg(long)]
    pub initial_gap: Option<f64>,
    /// m/s
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub initial_velocity: f64,
    /// Duration in linearized periods.
    #[arg(long, default_value_t = 100.0)]
    pub periods: f64,
    #[arg(long, default_value_t = 200)]
    pub steps_per_period: usize,
    /// Keep every n-th step in trajectory.csv.
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
    /// In units of d0.
    #[arg(long, default_value_t = 1e-3)]
    pub contact_floor: f64,
    /// Quasi-static sweep into branch.csv.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, value_enum, default_value = "k")]
    pub sweep_param: SweepKind,
    /// Sweep start [default: well on the stable side of pull-in].
    #[arg(long)]
    pub from: Option<f64>,
    /// Sweep end [default: well past pull-in].
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheAction {
    List,
    Clear,
}

#[derive(Debug, Args, Serialize)]
pub struct CacheArgs {
    #[arg(value_enum, default_value = "list")]
    pub action: CacheAction,
}

fn parse_epsilon(s: &str) -> Result<String, String> {
    s.parse::<casimir_core::Epsilon>()
        .map(|e| e.to_string())
        .map_err(|e| e.to_string())
}
