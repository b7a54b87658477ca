//! Spectral energy densities of the radiation field, the velocity drag they
//! exert on a two-level atom, Unruh conversions, and the cutoff estimate of
//! the vacuum energy density. All quantities here are SI.

use std::f64::consts::PI;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::constants::{C, ELEMENTARY_CHARGE, HBAR, K_B};
use crate::error::{domain, require_positive, Error, Result};

/// Natural cubic spline through strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return domain(format!(
                "spline needs at least 3 matching points, got {} and {}",
                n,
                y.len()
            ));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return domain("spline data must be finite");
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return domain("spline abscissae must be strictly increasing");
        }
        // Thomas algorithm on the interior second derivatives.
        let mut m = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            diag[i] = 2.0 * (h0 + h1);
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            if i > 1 {
                let w = h0 / diag[i - 1];
                diag[i] -= w * h0;
                rhs[i] -= w * rhs[i - 1];
            }
        }
        for i in (1..n - 1).rev() {
            let h1 = x[i + 1] - x[i];
            m[i] = (rhs[i] - h1 * m[i + 1]) / diag[i];
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    /// Value and first derivative at `t`; `None` outside the knot range.
    pub fn eval(&self, t: f64) -> Option<(f64, f64)> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&t) {
            return None;
        }
        let i = self
            .x
            .partition_point(|&v| v <= t)
            .clamp(1, self.x.len() - 1)
            - 1;
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let value = a * self.y[i]
            + b * self.y[i + 1]
            + ((a.powi(3) - a) * m0 + (b.powi(3) - b) * m1) * h * h / 6.0;
        let slope = (self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        Some((value, slope))
    }
}

/// Tabulated ρ(ω), ω in rad/s and ρ in J·s/m³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedSpectrum {
    spline: CubicSpline,
}

impl TabulatedSpectrum {
    pub fn new(omega: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if omega.first().is_some_and(|&w| w <= 0.0) {
            return domain("tabulated frequencies must be positive");
        }
        if rho.iter().any(|&r| r < 0.0) {
            return domain("tabulated spectral density must be non-negative");
        }
        Ok(TabulatedSpectrum {
            spline: CubicSpline::new(omega, rho)?,
        })
    }

    /// Reads a two-column CSV (ω, ρ). A non-numeric first row is taken as a
    /// header; lines starting with `#` are skipped.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let (mut omega, mut rho) = (Vec::new(), Vec::new());
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::Parse(format!(
                    "row {}: expected 2 columns, found {}",
                    line + 1,
                    record.len()
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(w), Ok(r)) => {
                    omega.push(w);
                    rho.push(r);
                }
                _ if line == 0 => continue,
                _ => return Err(Error::Parse(format!("row {}: non-numeric value", line + 1))),
            }
        }
        Self::new(omega, rho)
    }

    pub fn range(&self) -> (f64, f64) {
        self.spline.range()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralDensity {
    /// ρ₀ = ℏω³/2π²c³
    Vacuum,
    /// Thermal part ℏω³/π²c³ · 1/(e^(ℏω/kT) − 1).
    Planck {
        temperature: f64,
    },
    Tabulated(TabulatedSpectrum),
    /// factor · ρ₀
    ScaledVacuum {
        factor: f64,
    },
}

/// ℏ/2π²c³, the coefficient of ω³ in ρ₀.
pub const VACUUM_COEFF: f64 = HBAR / (2.0 * PI * PI * C * C * C);

impl SpectralDensity {
    pub fn planck(temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return domain(format!(
                "temperature must be finite and >= 0, got {temperature}"
            ));
        }
        Ok(SpectralDensity::Planck { temperature })
    }

    pub fn scaled_vacuum(factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 0.0) {
            return domain(format!(
                "vacuum scale factor must be finite and >= 0, got {factor}"
            ));
        }
        Ok(SpectralDensity::ScaledVacuum { factor })
    }

    fn power_law(&self) -> Option<f64> {
        match self {
            SpectralDensity::Vacuum => Some(VACUUM_COEFF),
            SpectralDensity::ScaledVacuum { factor } => Some(factor * VACUUM_COEFF),
            _ => None,
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    require_positive("angular frequency", omega)
}

/// ρ(ω) and dρ/dω.
pub fn eval_spectral(sd: &SpectralDensity, omega: f64) -> Result<(f64, f64)> {
    check_omega(omega)?;
    if let Some(k) = sd.power_law() {
        let rho = k * omega.powi(3);
        return Ok((rho, 3.0 * k * omega * omega));
    }
    match sd {
        SpectralDensity::Planck { temperature } => {
            if *temperature == 0.0 {
                return Ok((0.0, 0.0));
            }
            let x = HBAR * omega / (K_B * temperature);
            let rho = 2.0 * VACUUM_COEFF * omega.powi(3) / x.exp_m1();
            let bose = 1.0 / -(-x).exp_m1();
            Ok((rho, rho * (3.0 - x * bose) / omega))
        }
        SpectralDensity::Tabulated(t) => match t.spline.eval(omega) {
            Some(v) => Ok(v),
            None => {
                let (lo, hi) = t.range();
                domain(format!(
                    "ω = {omega:e} outside the tabulated range [{lo:e}, {hi:e}]"
                ))
            }
        },
        _ => unreachable!(),
    }
}

/// ρ(ω) − (ω/3)·dρ/dω, evaluated in closed form where one exists so that
/// the ω³ law cancels exactly.
pub fn drag_kernel(sd: &SpectralDensity, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    const N: f64 = 3.0;
    if let Some(k) = sd.power_law() {
        return Ok(k * omega.powi(3) * (1.0 - N / 3.0));
    }
    match sd {
        SpectralDensity::Planck { temperature } => {
            if *temperature == 0.0 {
                return Ok(0.0);
            }
            let (rho, _) = eval_spectral(sd, omega)?;
            let x = HBAR * omega / (K_B * temperature);
            Ok(rho * (x / 3.0) / -(-x).exp_m1())
        }
        _ => {
            let (rho, d) = eval_spectral(sd, omega)?;
            Ok(rho - omega / 3.0 * d)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelAtom {
    /// Transition angular frequency (rad/s).
    pub omega: f64,
    /// Einstein absorption coefficient.
    pub b12: f64,
    pub p1: f64,
    pub p2: f64,
}

impl TwoLevelAtom {
    pub fn new(omega: f64, b12: f64, p1: f64, p2: f64) -> Result<Self> {
        check_omega(omega)?;
        if !(b12.is_finite() && b12 >= 0.0) {
            return domain(format!("B12 must be finite and >= 0, got {b12}"));
        }
        if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) || (p1 + p2 - 1.0).abs() > 1e-12
        {
            return domain(format!(
                "populations must lie in [0, 1] and sum to 1, got {p1} and {p2}"
            ));
        }
        Ok(TwoLevelAtom { omega, b12, p1, p2 })
    }

    /// Nondegenerate levels in equilibrium at `temperature`: p₂/p₁ = e^(−ℏω/kT).
    pub fn thermal(omega: f64, b12: f64, temperature: f64) -> Result<Self> {
        check_omega(omega)?;
        if !(temperature.is_finite() && temperature >= 0.0) {
            return domain(format!(
                "temperature must be finite and >= 0, got {temperature}"
            ));
        }
        let ratio = if temperature == 0.0 {
            0.0
        } else {
            (-HBAR * omega / (K_B * temperature)).exp()
        };
        let p1 = 1.0 / (1.0 + ratio);
        Self::new(omega, b12, p1, 1.0 - p1)
    }
}

/// Speeds above this fraction of c produce a warning.
pub const NONRELATIVISTIC_LIMIT: f64 = 0.01;

/// F = −(ℏω/c²)(p₁ − p₂)B₁₂ [ρ − (ω/3)ρ′] v, with a warning when |v| is
/// not small against c.
pub fn drag_force(
    atom: &TwoLevelAtom,
    sd: &SpectralDensity,
    v: f64,
) -> Result<(f64, Option<String>)> {
    if !v.is_finite() {
        return domain("velocity must be finite");
    }
    let coeff = -(HBAR * atom.omega / (C * C))
        * (atom.p1 - atom.p2)
        * atom.b12
        * drag_kernel(sd, atom.omega)?;
    let warning = (v.abs() > NONRELATIVISTIC_LIMIT * C).then(|| {
        format!(
            "|v| = {:.3e} m/s exceeds 0.01c; the drag law is nonrelativistic",
            v.abs()
        )
    });
    Ok((coeff * v, warning))
}

/// T = ℏa/2πkc
pub fn unruh_temperature(acceleration: f64) -> Result<f64> {
    require_positive("acceleration", acceleration)?;
    Ok(HBAR * acceleration / (2.0 * PI * K_B * C))
}

/// a = 2πkcT/ℏ
pub fn unruh_acceleration(temperature: f64) -> Result<f64> {
    require_positive("temperature", temperature)?;
    Ok(2.0 * PI * K_B * C * temperature / HBAR)
}

/// Observed vacuum energy density, 4 eV/mm³ in J/m³.
pub const OBSERVED_ENERGY_DENSITY: f64 = 4.0 * ELEMENTARY_CHARGE * 1e9;

/// (J/m³) / c² gives kg/m³; 1 kg/m³ = 1e-3 g/cm³.
fn mass_density_g_cm3(energy_density: f64) -> f64 {
    energy_density / (C * C) * 1e-3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumEnergyBudget {
    pub cutoff_length: f64,
    /// ωc = 2πc/λ (rad/s).
    pub cutoff_frequency: f64,
    /// J/m³
    pub energy_density: f64,
    /// g/cm³
    pub mass_density: f64,
    pub observed_energy_density: f64,
    pub observed_mass_density: f64,
    pub orders_of_magnitude_gap: f64,
}

/// ∫₀^ωc ρ₀ dω = ℏωc⁴/8π²c³ with ωc = 2πc/λ, against the observed value.
pub fn vacuum_energy_budget(cutoff_length: f64) -> Result<VacuumEnergyBudget> {
    require_positive("cutoff length", cutoff_length)?;
    let wc = 2.0 * PI * C / cutoff_length;
    let energy = HBAR * wc.powi(4) / (8.0 * PI * PI * C.powi(3));
    Ok(VacuumEnergyBudget {
        cutoff_length,
        cutoff_frequency: wc,
        energy_density: energy,
        mass_density: mass_density_g_cm3(energy),
        observed_energy_density: OBSERVED_ENERGY_DENSITY,
        observed_mass_density: mass_density_g_cm3(OBSERVED_ENERGY_DENSITY),
        orders_of_magnitude_gap: (energy / OBSERVED_ENERGY_DENSITY).log10(),
    })
}
