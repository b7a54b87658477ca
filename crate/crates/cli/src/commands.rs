use std::collections::BTreeMap;

use casimir_core::extract::{
    pure_term_report_with, Basis, BasisTerm, CutoffWindow, FitConfig, PureTermConfig,
};
use casimir_core::geometry::interaction::half_space_pressure;
use casimir_core::geometry::Orientation;
use casimir_core::kernel::{casimir_plate_pressure, casimir_polder_potential};
use casimir_core::mems::{
    hysteresis_sweep, linearized_period, BranchState, SimulationOptions, Stability, SweepParameter,
    LAMBDA_CRITICAL,
};
use casimir_core::pairwise::{atom_half_space_pairwise, Sign};
use casimir_core::spectra::{drag_kernel, TabulatedSpectrum};
use casimir_core::{
    deviation_report, drag_force, equilibria, eval_spectral, interaction_energy_disjoint,
    lambda_param, pressure_at_gap, simulate, unruh_acceleration, unruh_temperature,
    vacuum_energy_budget, Body, DensityMethod, Epsilon, InteractionEnergy, Material,
    OscillatorConfig, SpectralDensity, TwoLevelAtom,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::cache::{self, Cache};
use crate::exit::CliError;
use crate::run::{num, RunDir};

fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    line(
        width
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    );
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
}

fn sign_str(s: Sign) -> String {
    match s {
        Sign::Negative => "negative",
        Sign::Zero => "zero",
        Sign::Positive => "positive",
    }
    .into()
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn epsilon(text: &str) -> Epsilon {
    text.parse().expect("validated by the argument parser")
}

pub fn compare(_: &CompareArgs, run: &mut RunDir) -> Result<(), CliError> {
    let rows = deviation_report()?;
    run.write_json("compare.json", &json!({ "rows": rows }))?;
    let header = [
        "quantity",
        "size_parameter",
        "pairwise",
        "exact",
        "ratio",
        "exact_ratio",
        "pairwise_sign",
        "exact_sign",
    ];
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.quantity.clone(),
                num(r.size_parameter),
                num(r.pairwise),
                num(r.exact),
                num(r.ratio),
                r.exact_ratio.clone().unwrap_or_default(),
                sign_str(r.pairwise_sign),
                sign_str(r.exact_sign),
            ]
        })
        .collect();
    run.write_csv("compare.csv", &header, &table)?;
    let shown: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.quantity.clone(),
                format!("{:.6e}", r.pairwise),
                format!("{:.6e}", r.exact),
                format!("{:.5}", r.ratio),
                r.exact_ratio.clone().unwrap_or_default(),
                format!("{}/{}", sign_str(r.pairwise_sign), sign_str(r.exact_sign)),
            ]
        })
        .collect();
    print_table(
        &[
            "quantity",
            "pairwise",
            "exact",
            "ratio",
            "exact ratio",
            "signs",
        ],
        &shown,
    );
    Ok(())
}

#[derive(Serialize)]
struct PairwiseOut {
    geometry: PairGeometry,
    distance: f64,
    size: f64,
    alpha: f64,
    epsilon: String,
    n_alpha: f64,
    /// "total" or "per_area"
    kind: &'static str,
    energy: f64,
    closed_form_energy: Option<f64>,
    relative_difference: Option<f64>,
    pressure: Option<f64>,
    closed_form_pressure: Option<f64>,
    /// Casimir-Polder energy or Casimir pressure for the conducting limit.
    exact: Option<f64>,
    ratio_to_exact: Option<f64>,
    warnings: Vec<String>,
}

pub fn pairwise(args: &PairwiseArgs, run: &mut RunDir) -> Result<(), CliError> {
    let eps = epsilon(&args.epsilon);
    let material = Material::from_epsilon(args.alpha, eps)?;
    let na = material.n_alpha();
    let (d, a) = (args.distance, args.size);
    let atom = |z: f64| Body::PointAtom {
        position: [0.0, 0.0, z],
        alpha: args.alpha,
    };
    let lower = Body::HalfSpace {
        offset: 0.0,
        orientation: Orientation::Lower,
    };
    let conductor = eps == Epsilon::Infinite;
    let (first, second) = match args.geometry {
        PairGeometry::AtomWall => (atom(d), lower),
        PairGeometry::Plates => (
            lower,
            Body::HalfSpace {
                offset: d,
                orientation: Orientation::Upper,
            },
        ),
        PairGeometry::AtomBall => (atom(a + d), Body::ball(a)?),
        PairGeometry::AtomCube => (atom(0.5 * a + d), Body::cube(a)?),
        PairGeometry::BallBall => (
            Body::ball(a)?,
            Body::Ball {
                radius: a,
                center: [0.0, 0.0, 2.0 * a + d],
            },
        ),
        PairGeometry::AtomSlab => (
            atom(d),
            Body::Slab {
                thickness: a,
                offset: -a,
            },
        ),
        PairGeometry::Slabs => (
            Body::Slab {
                thickness: a,
                offset: -a,
            },
            Body::Slab {
                thickness: a,
                offset: d,
            },
        ),
    };
    let energy = interaction_energy_disjoint(&first, &second, &material)?;
    let kind = match energy {
        InteractionEnergy::Total(_) => "total",
        InteractionEnergy::PerArea(_) => "per_area",
    };
    let e = energy.value();
    let mut out = PairwiseOut {
        geometry: args.geometry,
        distance: d,
        size: a,
        alpha: args.alpha,
        epsilon: args.epsilon.clone(),
        n_alpha: na,
        kind,
        energy: e,
        closed_form_energy: None,
        relative_difference: None,
        pressure: None,
        closed_form_pressure: None,
        exact: None,
        ratio_to_exact: None,
        warnings: Vec::new(),
    };
    match args.geometry {
        PairGeometry::AtomWall => {
            let (closed, warning) = atom_half_space_pairwise(d, args.alpha, na)?;
            out.closed_form_energy = Some(closed);
            out.warnings.extend(warning);
            if conductor {
                out.exact = Some(casimir_polder_potential(d, args.alpha)?);
            }
        }
        PairGeometry::Plates => {
            out.closed_form_energy = Some(-23.0 / 120.0 * na * na / d.powi(3));
            let p = half_space_pressure(d, &material)?;
            out.pressure = Some(p);
            out.closed_form_pressure = Some(-23.0 / 40.0 * na * na / d.powi(4));
            if conductor {
                out.exact = Some(casimir_plate_pressure(d)?);
            }
        }
        _ => {}
    }
    out.relative_difference = out.closed_form_energy.map(|c| (e - c).abs() / c.abs());
    out.ratio_to_exact = out.exact.map(|x| match args.geometry {
        PairGeometry::Plates => out.closed_form_pressure.unwrap() / x,
        _ => out.closed_form_energy.unwrap() / x,
    });
    run.write_json("pairwise.json", &out)?;

    let mut rows = vec![vec![format!("energy ({kind})"), format!("{e:.10e}")]];
    if let Some(c) = out.closed_form_energy {
        rows.push(vec!["closed form".into(), format!("{c:.10e}")]);
        rows.push(vec![
            "relative difference".into(),
            format!("{:.2e}", out.relative_difference.unwrap()),
        ]);
    }
    if let Some(p) = out.pressure {
        rows.push(vec!["pressure".into(), format!("{p:.10e}")]);
    }
    if let (Some(x), Some(r)) = (out.exact, out.ratio_to_exact) {
        rows.push(vec!["exact".into(), format!("{x:.10e}")]);
        rows.push(vec!["pairwise / exact".into(), format!("{r:.6}")]);
    }
    print_table(&["quantity", "value"], &rows);
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

#[derive(Serialize)]
struct PureTermOut {
    geometry: String,
    size: f64,
    epsilon: String,
    alpha: f64,
    n_alpha: f64,
    provenance: Value,
    b_coefficients: BTreeMap<String, f64>,
    uncertainties: BTreeMap<String, f64>,
    b0: f64,
    b0_uncertainty: f64,
    jackknife_uncertainty: f64,
    sampling_uncertainty: f64,
    fit_residual: f64,
    condition_number: f64,
    direct_finite_part: Option<f64>,
    exact_value: Value,
    pairwise_sign: Sign,
    sign_agreement: bool,
    consistent_with_zero: Option<bool>,
    refinement: Value,
}

fn parse_basis(text: &str) -> Result<Basis, CliError> {
    let terms: Vec<BasisTerm> = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.parse::<BasisTerm>()
                .map_err(|e| CliError::usage(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    Basis::new(terms).map_err(|e| CliError::usage(e.to_string()))
}

pub fn pure_term(args: &PureTermArgs, run: &mut RunDir, cache: &Cache) -> Result<(), CliError> {
    let body = match args.body {
        BodyKind::Ball => Body::ball(args.a)?,
        BodyKind::Cube => Body::cube(args.a)?,
        BodyKind::Cylinder => Body::cylinder(args.a)?,
    };
    let eps = epsilon(&args.epsilon);
    let material = Material::from_epsilon(args.alpha, eps)?;
    let defaults = PureTermConfig::default_for(&body);
    let default_resolution = match args.body {
        BodyKind::Ball => 256,
        BodyKind::Cube => 128,
        BodyKind::Cylinder => 2048,
    };
    let method = match args.method {
        None => match (args.resolution, defaults.method) {
            (Some(r), DensityMethod::Grid { .. }) => DensityMethod::Grid { resolution: r },
            _ => defaults.method,
        },
        Some(MethodKind::Analytic) => DensityMethod::Analytic,
        Some(MethodKind::Grid) => DensityMethod::Grid {
            resolution: args.resolution.unwrap_or(default_resolution),
        },
        Some(MethodKind::Mc) => {
            let seed = args
                .seed
                .ok_or_else(|| CliError::usage("--method mc needs an explicit --seed"))?;
            run.record_seed(seed);
            DensityMethod::MonteCarlo {
                samples: args.samples,
                seed,
            }
        }
    };
    let refinement = match (args.no_refine, args.refine, method) {
        (true, _, _) => None,
        (false, Some(r), DensityMethod::Grid { .. }) => Some(DensityMethod::Grid { resolution: r }),
        (false, Some(_), _) => {
            return Err(CliError::usage("--refine applies to the grid method only"))
        }
        (false, None, DensityMethod::Grid { resolution }) if args.body == BodyKind::Cylinder => {
            Some(DensityMethod::Grid {
                resolution: 2 * resolution,
            })
        }
        _ => None,
    };
    let config = PureTermConfig {
        method,
        refinement,
        window: CutoffWindow {
            lo: args.s_min,
            hi: args.s_max,
            points: args.points,
        },
        basis: args.basis.as_deref().map(parse_basis).transpose()?,
        fit: FitConfig {
            max_condition: args.max_condition,
            residual_tolerance: args.residual_tol,
        },
    };
    if !(args.s_min > 0.0 && args.s_min < args.s_max) || args.points < 2 {
        return Err(CliError::usage(
            "need 0 < --s-min < --s-max and --points >= 2",
        ));
    }

    let row = pure_term_report_with(&body, &material, &config, |b, m| cache.density(b, m))?;
    let e = &row.expansion;
    let b_coefficients = e
        .terms
        .iter()
        .map(|t| (t.term.to_string(), t.coefficient))
        .collect();
    let uncertainties = e
        .terms
        .iter()
        .map(|t| (t.term.to_string(), t.uncertainty))
        .collect();
    let out = PureTermOut {
        geometry: row.geometry.clone(),
        size: row.size,
        epsilon: args.epsilon.clone(),
        alpha: args.alpha,
        n_alpha: material.n_alpha(),
        provenance: to_value(&row.provenance),
        b_coefficients,
        uncertainties,
        b0: e.b0,
        b0_uncertainty: e.b0_uncertainty,
        jackknife_uncertainty: e.jackknife_uncertainty,
        sampling_uncertainty: e.sampling_uncertainty,
        fit_residual: e.fit_residual,
        condition_number: e.condition_number,
        direct_finite_part: row.direct_finite_part,
        exact_value: to_value(&row.exact),
        pairwise_sign: row.pairwise_sign,
        sign_agreement: row.sign_agreement,
        consistent_with_zero: row.consistent_with_zero,
        refinement: to_value(&row.refinement),
    };
    run.write_json("pure_term.json", &out)?;
    let samples: Vec<Vec<String>> = e
        .s_grid
        .iter()
        .zip(&e.energies)
        .map(|(&s, &en)| {
            let fit = e.eval(s);
            vec![num(s), num(en), num(fit), num(en - fit)]
        })
        .collect();
    run.write_csv(
        "e_of_s.csv",
        &["s", "energy", "fitted", "residual"],
        &samples,
    )?;

    let mut rows = vec![
        vec![
            "geometry".into(),
            format!("{} (a = {})", row.geometry, row.size),
        ],
        vec![
            "pair measure".into(),
            serde_json::to_string(&row.provenance).unwrap_or_default(),
        ],
        vec![
            "pairwise b0".into(),
            format!("{:+.6e} ± {:.1e}", e.b0, e.b0_uncertainty),
        ],
    ];
    if let Some(d) = row.direct_finite_part {
        rows.push(vec!["direct finite part".into(), format!("{d:+.6e}")]);
    }
    if let Some(r) = &row.refinement {
        rows.push(vec![
            "refined b0".into(),
            format!(
                "{:+.6e} ± {:.1e} (|b0| decreasing: {})",
                r.b0, r.b0_uncertainty, r.magnitude_decreasing
            ),
        ]);
    }
    let exact = match row.exact.value {
        Some(v) => format!("{v:+} ({})", row.exact.note),
        None => format!("{} ({})", sign_str(row.exact.sign), row.exact.note),
    };
    rows.push(vec!["exact".into(), exact]);
    rows.push(vec![
        "signs".into(),
        format!(
            "pairwise {} / exact {}: {}",
            sign_str(row.pairwise_sign),
            sign_str(row.exact.sign),
            if row.sign_agreement {
                "agree"
            } else {
                "DISAGREE"
            }
        ),
    ]);
    rows.push(vec![
        "fit".into(),
        format!(
            "residual {:.1e}, condition {:.2e}",
            e.fit_residual, e.condition_number
        ),
    ]);
    print_table(&["quantity", "value"], &rows);
    Ok(())
}

#[derive(Serialize)]
struct DragOut {
    spectrum: SpectrumKind,
    temperature: f64,
    factor: f64,
    atom: TwoLevelAtom,
    velocity: f64,
    rho: f64,
    drho_domega: f64,
    kernel: f64,
    force: f64,
    opposes_motion: bool,
    warnings: Vec<String>,
    random: Option<Value>,
}

pub fn drag(args: &DragArgs, run: &mut RunDir) -> Result<(), CliError> {
    let sd = match args.spectrum {
        SpectrumKind::Vacuum => SpectralDensity::Vacuum,
        SpectrumKind::Planck => SpectralDensity::planck(args.temperature)?,
        SpectrumKind::ScaledVacuum => SpectralDensity::scaled_vacuum(args.factor)?,
        SpectrumKind::Tabulated => {
            let path = args
                .table
                .as_ref()
                .ok_or_else(|| CliError::usage("--spectrum tabulated needs --table"))?;
            run.record_input(path)?;
            let file = std::fs::File::open(path)
                .map_err(|e| CliError::io(&path.display().to_string(), e))?;
            SpectralDensity::Tabulated(TabulatedSpectrum::from_csv(file)?)
        }
    };
    let atom_at = |omega: f64| -> Result<TwoLevelAtom, CliError> {
        Ok(match args.p1 {
            Some(p1) => TwoLevelAtom::new(omega, args.b12, p1, 1.0 - p1)?,
            None => TwoLevelAtom::thermal(omega, args.b12, args.temperature)?,
        })
    };
    let atom = atom_at(args.omega)?;
    let (rho, drho) = eval_spectral(&sd, args.omega)?;
    let kernel = drag_kernel(&sd, args.omega)?;
    let (force, warning) = drag_force(&atom, &sd, args.velocity)?;

    let random = if args.random > 0 {
        let seed = args
            .seed
            .ok_or_else(|| CliError::usage("--random needs an explicit --seed"))?;
        run.record_seed(seed);
        if !(args.omega_min > 0.0 && args.omega_min < args.omega_max && args.v_max > 0.0) {
            return Err(CliError::usage(
                "need 0 < --omega-min < --omega-max and --v-max > 0",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = (args.omega_min.log10(), args.omega_max.log10());
        let mut rows = Vec::with_capacity(args.random);
        let mut opposed = 0;
        for _ in 0..args.random {
            let omega = 10f64.powf(rng.random_range(lo..hi));
            let v = rng.random_range(-args.v_max..args.v_max);
            let (f, _) = drag_force(&atom_at(omega)?, &sd, v)?;
            if f * v < 0.0 {
                opposed += 1;
            }
            rows.push(vec![num(omega), num(v), num(f), (f * v < 0.0).to_string()]);
        }
        run.write_csv(
            "drag.csv",
            &["omega", "velocity", "force", "opposes_motion"],
            &rows,
        )?;
        Some(json!({ "seed": seed, "count": args.random, "opposing": opposed }))
    } else {
        None
    };

    let out = DragOut {
        spectrum: args.spectrum,
        temperature: args.temperature,
        factor: args.factor,
        atom,
        velocity: args.velocity,
        rho,
        drho_domega: drho,
        kernel,
        force,
        opposes_motion: force * args.velocity < 0.0,
        warnings: warning.into_iter().collect(),
        random,
    };
    run.write_json("drag.json", &out)?;
    let mut rows = vec![
        vec!["rho (J s/m^3)".into(), format!("{rho:.6e}")],
        vec!["rho - (omega/3) rho'".into(), format!("{kernel:.6e}")],
        vec!["p1 - p2".into(), format!("{:.6}", atom.p1 - atom.p2)],
        vec!["force (N)".into(), format!("{force:.6e}")],
        vec!["opposes motion".into(), out.opposes_motion.to_string()],
    ];
    if let Some(r) = &out.random {
        rows.push(vec![
            "random pairs opposing".into(),
            format!("{}/{}", r["opposing"], r["count"]),
        ]);
    }
    print_table(&["quantity", "value"], &rows);
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

pub fn unruh(args: &UnruhArgs, run: &mut RunDir) -> Result<(), CliError> {
    let (temperature, acceleration, input) = match (args.temperature, args.acceleration) {
        (Some(t), None) => (t, unruh_acceleration(t)?, "temperature"),
        (None, Some(a)) => (unruh_temperature(a)?, a, "acceleration"),
        _ => {
            return Err(CliError::usage(
                "give exactly one of --temperature and --acceleration",
            ))
        }
    };
    run.write_json(
        "unruh.json",
        &json!({ "input": input, "temperature": temperature, "acceleration": acceleration }),
    )?;
    print_table(
        &["quantity", "value"],
        &[
            vec!["temperature (K)".into(), format!("{temperature:.6e}")],
            vec!["acceleration (m/s^2)".into(), format!("{acceleration:.6e}")],
        ],
    );
    Ok(())
}

pub fn cosmo(args: &CosmoArgs, run: &mut RunDir) -> Result<(), CliError> {
    let b = vacuum_energy_budget(args.cutoff_length)?;
    let mut v = to_value(&b);
    v["log10_energy_density"] = json!(b.energy_density.log10());
    v["log10_mass_density"] = json!(b.mass_density.log10());
    v["log10_observed_mass_density"] = json!(b.observed_mass_density.log10());
    run.write_json("cosmo.json", &v)?;
    print_table(
        &["quantity", "value"],
        &[
            vec![
                "cutoff length (m)".into(),
                format!("{:.3e}", b.cutoff_length),
            ],
            vec![
                "energy density (J/m^3)".into(),
                format!("{:.3e}", b.energy_density),
            ],
            vec![
                "mass density (g/cm^3)".into(),
                format!("{:.3e}", b.mass_density),
            ],
            vec![
                "observed (J/m^3)".into(),
                format!("{:.3e}", b.observed_energy_density),
            ],
            vec![
                "observed (g/cm^3)".into(),
                format!("{:.3e}", b.observed_mass_density),
            ],
            vec![
                "gap (orders of magnitude)".into(),
                format!("{:.2}", b.orders_of_magnitude_gap),
            ],
        ],
    );
    Ok(())
}

fn stability_str(s: Stability) -> &'static str {
    match s {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::Marginal => "marginal",
    }
}

pub fn mems(args: &MemsArgs, run: &mut RunDir) -> Result<(), CliError> {
    let config = OscillatorConfig::new(args.k, args.d0, args.area, args.mass, args.damping)?;
    let lambda = lambda_param(&config);
    let eq = equilibria(&config);
    let regime = match eq.len() {
        0 => "collapse",
        1 if eq[0].stability == Stability::Marginal => "marginal",
        _ => "bistable",
    };
    let period = linearized_period(&config);
    let mut summary = json!({
        "lambda": lambda,
        "lambda_critical": LAMBDA_CRITICAL,
        "regime": regime,
        "natural_frequency": config.natural_frequency(),
        "linearized_period": period,
        "equilibria": eq.iter().map(|e| json!({
            "gap": e.gap,
            "gap_m": e.gap * args.d0,
            "stability": stability_str(e.stability),
            "stiffness": e.stiffness,
        })).collect::<Vec<_>>(),
        "pressure_at_rest_gap": to_value(&pressure_at_gap(args.d0)?),
    });
    if let Some(g) = args.pressure_gap {
        summary["pressure_at_gap"] = to_value(&pressure_at_gap(g)?);
    }
    let mut rows = vec![
        vec![
            "lambda".into(),
            format!("{lambda:.6e} (critical {LAMBDA_CRITICAL})"),
        ],
        vec!["regime".into(), regime.into()],
    ];
    for e in &eq {
        rows.push(vec![
            format!("{} equilibrium", stability_str(e.stability)),
            format!("d/d0 = {:.9}", e.gap),
        ]);
    }

    if args.simulate {
        if args.steps_per_period == 0 || args.periods <= 0.0 {
            return Err(CliError::usage(
                "--steps-per-period and --periods must be positive",
            ));
        }
        let mut opts = SimulationOptions::new(
            args.initial_gap.unwrap_or(args.d0),
            args.initial_velocity,
            args.periods * period,
            period / args.steps_per_period as f64,
        );
        opts.contact_floor = args.contact_floor;
        opts.record_every = args.record_every;
        let t = simulate(&config, &opts)?;
        let points: Vec<Vec<String>> = t
            .points
            .iter()
            .map(|p| vec![num(p.t), num(p.gap), num(p.velocity)])
            .collect();
        run.write_csv("trajectory.csv", &["t", "d", "v"], &points)?;
        let last = t.last();
        summary["simulation"] = json!({
            "timestep": opts.timestep,
            "duration": opts.duration,
            "steps": t.steps,
            "contact_time": t.contact_time,
            "final_gap": last.gap,
            "final_velocity": last.velocity,
            "initial_energy": t.initial_energy,
            "final_energy": t.final_energy,
            "max_energy_deviation": t.max_energy_deviation,
        });
        rows.push(vec![
            "simulation".into(),
            match t.contact_time {
                Some(tc) => format!("contact at t = {tc:.6e} s"),
                None => format!("no contact; max |dH/H| = {:.2e}", t.max_energy_deviation),
            },
        ]);
    }

    if args.sweep {
        let (parameter, crit, lo, hi) = match args.sweep_param {
            SweepKind::K => (
                SweepParameter::SpringConstant,
                args.k * lambda / LAMBDA_CRITICAL,
                2.0,
                0.5,
            ),
            SweepKind::D0 => (
                SweepParameter::RestGap,
                args.d0 * (lambda / LAMBDA_CRITICAL).powf(0.2),
                1.3,
                0.85,
            ),
        };
        let from = args.from.unwrap_or(lo * crit);
        let to = args.to.unwrap_or(hi * crit);
        let d = hysteresis_sweep(&config, parameter, from, to, args.steps)?;
        let mut branch = Vec::new();
        for (dir, pts) in [("forward", &d.forward), ("backward", &d.backward)] {
            for p in pts.iter() {
                let (state, gap, gap_m) = match p.state {
                    BranchState::Attached { gap, gap_m } => ("attached", num(gap), num(gap_m)),
                    BranchState::Collapsed => ("collapsed", String::new(), String::new()),
                };
                branch.push(vec![
                    dir.into(),
                    num(p.value),
                    num(p.lambda),
                    state.into(),
                    gap,
                    gap_m,
                ]);
            }
        }
        run.write_csv(
            "branch.csv",
            &["direction", "value", "lambda", "state", "gap", "gap_m"],
            &branch,
        )?;
        summary["sweep"] = json!({
            "parameter": d.parameter,
            "from": from,
            "to": to,
            "steps": args.steps,
            "pull_in": d.pull_in,
        });
        rows.push(vec![
            "pull-in".into(),
            match d.pull_in {
                Some(p) => format!(
                    "between {:.6e} and {:.6e} (lambda {:.5} -> {:.5}, last d/d0 {:.5})",
                    p.value_before, p.value_after, p.lambda_before, p.lambda_after, p.gap_before
                ),
                None => "none".into(),
            },
        ]);
    }
    run.write_json("mems.json", &summary)?;
    print_table(&["quantity", "value"], &rows);
    Ok(())
}

pub fn cache_command(args: &CacheArgs, dir: &std::path::Path) -> Result<(), CliError> {
    match args.action {
        CacheAction::List => {
            let entries =
                cache::list(dir).map_err(|e| CliError::io(&dir.display().to_string(), e))?;
            let rows: Vec<Vec<String>> = entries
                .into_iter()
                .map(|e| {
                    vec![
                        e.key[..12].to_string(),
                        e.body,
                        e.provenance,
                        e.bytes.to_string(),
                    ]
                })
                .collect();
            print_table(&["key", "body", "provenance", "bytes"], &rows);
        }
        CacheAction::Clear => {
            let n = cache::clear(dir).map_err(|e| CliError::io(&dir.display().to_string(), e))?;
            println!("removed {n} entries from {}", dir.display());
        }
    }
    Ok(())
}
