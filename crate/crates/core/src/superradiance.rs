//! Collective emission of a localized condensate lake: mode count, angular
//! pattern, cooperativity and the decay-rate enhancement over a single
//! exciton.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::num;
use crate::materials::ExcitonMaterial;
use crate::numerics::{adaptive_quadrature, bessel_j1};

/// Prefactor of the cooperativity integral.
///
/// `LimitConsistent` uses `3/8`, which gives `μ_c → 1` for a point source
/// and `μ_c → 3/(k a_c)²` for a large one. `AsPrinted` carries an extra
/// `1/(k a_c)²` and satisfies neither limit; it is kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    AsPrinted,
    #[default]
    LimitConsistent,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::AsPrinted => "as-printed",
            Variant::LimitConsistent => "limit-consistent",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" => Ok(Variant::AsPrinted),
            "limit-consistent" => Ok(Variant::LimitConsistent),
            other => Err(Error::precondition(format!(
                "unknown variant '{other}' (expected as-printed or limit-consistent)"
            ))),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Radius of the disc with area `L_c²`: `a_c = L_c/√π`.
pub fn condensate_radius(l_c: f64) -> Result<f64> {
    positive("L_c", l_c)?;
    Ok(l_c / PI.sqrt())
}

/// Number of exciton modes in the lake, `N_e = 8 a_c²/a0²`.
pub fn mode_count(a_c: f64, a0: f64) -> Result<f64> {
    if !(a_c >= 0.0 && a_c.is_finite()) {
        return Err(Error::domain(format!("a_c must be non-negative, got {a_c}")));
    }
    positive("a0", a0)?;
    Ok(8.0 * (a_c / a0).powi(2))
}

/// Dipole pattern `I(φ, χ) = cos²χ + sin²χ cos²φ`.
pub fn dipole_pattern(phi: f64, chi: f64) -> f64 {
    let (c, p) = (chi.cos(), phi.cos());
    c * c + (1.0 - c * c) * p * p
}

/// Below this argument `2J1(x)/x` comes from its series.
const SERIES_CUTOFF: f64 = 1e-4;

/// `(2 J1(x)/x)²` for `x >= 0`.
fn airy(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        let f = 1.0 - x2 / 8.0 + x2 * x2 / 192.0;
        f * f
    } else {
        // bessel_j1 only fails on non-finite input
        let f = 2.0 * bessel_j1(x).unwrap_or(f64::NAN) / x;
        f * f
    }
}

/// Collective factor `Γ(φ) = (2 J1(k a_c sinφ)/(k a_c sinφ))²`.
pub fn collective_factor(phi: f64, k_a_c: f64) -> Result<f64> {
    if !(k_a_c >= 0.0 && k_a_c.is_finite() && phi.is_finite()) {
        return Err(Error::domain(format!("need k·a_c >= 0 and finite φ, got {k_a_c}, {phi}")));
    }
    Ok(airy(k_a_c * phi.sin().abs()))
}

/// Beyond this `k a_c` the pattern integral takes its large-source form.
const ASYMPTOTIC_KA: f64 = 1e6;

/// `∫₀^π sinφ (1 + cos²φ) Γ(φ) dφ`, which is `8/3` for a point source and
/// `8/(k a_c)² (1 - 1/(2 k a_c))` for a large one (the quadrature agrees
/// with that form to 1e-9 relative at the switchover).
fn pattern_integral(k_a_c: f64) -> Result<f64> {
    if k_a_c > ASYMPTOTIC_KA {
        return Ok(8.0 / (k_a_c * k_a_c) * (1.0 - 0.5 / k_a_c));
    }
    let f = |phi: f64| {
        let (s, c) = phi.sin_cos();
        s * (1.0 + c * c) * airy(k_a_c * s)
    };
    // the integrand is symmetric about π/2; one panel per lobe of Γ keeps
    // the adaptive rule from chasing oscillations it cannot see
    let panels = (k_a_c / PI).ceil().max(1.0) as usize;
    let tol = 1e-10 * (3.0 / (k_a_c * k_a_c)).min(1.0) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        // panels equally spaced in sinφ, where the lobes are
        let a = (i as f64 / panels as f64).asin();
        let b = ((i + 1) as f64 / panels as f64).asin();
        total += adaptive_quadrature(f, a, b, tol)?;
    }
    Ok(2.0 * total)
}

/// Cooperativity `μ_c` of a lake with `k a_c = k_a_c`.
pub fn cooperativity(k_a_c: f64, variant: Variant) -> Result<f64> {
    positive("k·a_c", k_a_c)?;
    let mu = 3.0 / 8.0 * pattern_integral(k_a_c)?;
    Ok(match variant {
        Variant::LimitConsistent => mu,
        Variant::AsPrinted => mu / (k_a_c * k_a_c),
    })
}

/// Optical and exciton parameters of the emitting medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmissionModel {
    /// Exciton Bohr radius, m.
    pub a0_m: f64,
    /// Wavelength in the material, m.
    pub lambda_m: f64,
    /// Radiative rate of one exciton, 1/s.
    pub gamma0_per_s: f64,
    #[serde(default)]
    pub variant: Variant,
}

impl EmissionModel {
    pub fn from_material(m: &ExcitonMaterial, variant: Variant) -> Self {
        Self { a0_m: m.a0_m, lambda_m: m.wavelength_m, gamma0_per_s: m.gamma0_per_s, variant }
    }

    pub fn validate(&self) -> Result<()> {
        positive("a0", self.a0_m)?;
        positive("wavelength", self.lambda_m)?;
        positive("gamma0", self.gamma0_per_s)
    }

    /// Wavenumber `k = 2π/λ`, 1/m.
    pub fn k(&self) -> f64 {
        2.0 * PI / self.lambda_m
    }

    /// Enhancement `γ/γ0 = μ_c N_e` for a lake of size `l_c_m` (m).
    pub fn enhancement_factor(&self, l_c_m: f64) -> Result<f64> {
        self.validate()?;
        let a_c = condensate_radius(l_c_m)?;
        Ok(cooperativity(self.k() * a_c, self.variant)? * mode_count(a_c, self.a0_m)?)
    }

    /// Both cooperativity variants and the resulting rates at `l_c_m`.
    pub fn report(&self, l_c_m: f64) -> Result<EmissionReport> {
        self.validate()?;
        let a_c_m = condensate_radius(l_c_m)?;
        let n_e = mode_count(a_c_m, self.a0_m)?;
        let ka = self.k() * a_c_m;
        let mu_c_limit_consistent = cooperativity(ka, Variant::LimitConsistent)?;
        let mu_c_as_printed = mu_c_limit_consistent / (ka * ka);
        let mu = match self.variant {
            Variant::LimitConsistent => mu_c_limit_consistent,
            Variant::AsPrinted => mu_c_as_printed,
        };
        Ok(EmissionReport {
            l_c_m,
            a_c_m,
            k_a_c: ka,
            n_e,
            mu_c_as_printed,
            mu_c_limit_consistent,
            enhancement: mu * n_e,
            gamma_per_s: mu * n_e * self.gamma0_per_s,
            variant: self.variant,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionReport {
    pub l_c_m: f64,
    pub a_c_m: f64,
    pub k_a_c: f64,
    pub n_e: f64,
    pub mu_c_as_printed: f64,
    pub mu_c_limit_consistent: f64,
    /// `γ/γ0` with the model's variant.
    pub enhancement: f64,
    pub gamma_per_s: f64,
    pub variant: Variant,
}

impl EmissionReport {
    /// Header plus one row:
    /// `a_c_m,N_e,mu_c_as_printed,mu_c_limit_consistent,enhancement`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["a_c_m", "N_e", "mu_c_as_printed", "mu_c_limit_consistent", "enhancement"])?;
        w.write_record([
            num(self.a_c_m),
            num(self.n_e),
            num(self.mu_c_as_printed),
            num(self.mu_c_limit_consistent),
            num(self.enhancement),
        ])?;
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternSample {
    pub phi: f64,
    pub chi: f64,
    /// `I(φ, χ) Γ(φ)`, one at the normal.
    pub intensity: f64,
}

/// Relative emitted power per unit angle over `phi_grid` (rad, in `[0, π]`).
pub fn emission_pattern_table(
    model: &EmissionModel,
    l_c_m: f64,
    chi: f64,
    phi_grid: &[f64],
) -> Result<Vec<PatternSample>> {
    model.validate()?;
    if !chi.is_finite() {
        return Err(Error::domain(format!("χ must be finite, got {chi}")));
    }
    if let Some(&bad) = phi_grid.iter().find(|&&p| !(0.0..=PI).contains(&p)) {
        return Err(Error::domain(format!("φ must lie in [0, π], got {bad}")));
    }
    let ka = model.k() * condensate_radius(l_c_m)?;
    Ok(phi_grid
        .iter()
        .map(|&phi| PatternSample { phi, chi, intensity: dipole_pattern(phi, chi) * airy(ka * phi.sin()) })
        .collect())
}

/// `n + 1` equally spaced angles covering `[0, π]`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![0.0],
        _ => (0..=n).map(|i| if i == n { PI } else { PI * i as f64 / n as f64 }).collect(),
    }
}

/// Columns `phi_rad,chi_rad,intensity`.
pub fn write_pattern_csv<W: Write>(samples: &[PatternSample], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["phi_rad", "chi_rad", "intensity"])?;
    for s in samples {
        w.write_record([num(s.phi), num(s.chi), num(s.intensity)])?;
    }
    w.flush()?;
    Ok(())
}
