//! Condensate density and localization length of a two-dimensional
//! localized Bose gas at finite temperature:
//!
//! ```text
//! 1 - n_c/n = Λ_cr²/Λ²                 (depletion by thermal bosons)
//! n Λ_cr²   = ln(2 L_c²/Λ_cr²)         (critical wavelength of a lake L_c)
//! L_c       = α (n_g - u n_c)^β        (critical power law)
//! ```
//!
//! Lengths and densities are in units of `L0`; temperatures in kelvin.
//!
//! The unknown is `s = ln(n_g/u - n_c)`, the log of the distance to the
//! density cap: `L_c` then follows in log form without overflow however
//! close `n_c` gets to `n_g/u`, and the depletion `δ = e^s` is kept as a
//! state variable of its own.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::localization::{num, FitParams};
use crate::materials::constants::{HBAR, K_B};
use crate::numerics::{find_root_bracketed, Bracket};
use crate::sweep::map_ordered;

/// Thermal de Broglie wavelength `Λ = sqrt(2πħ²/(M k_B T))`, m.
pub fn thermal_wavelength(t_k: f64, mass_kg: f64) -> Result<f64> {
    if !(t_k > 0.0 && t_k.is_finite() && mass_kg > 0.0 && mass_kg.is_finite()) {
        return Err(Error::domain(format!(
            "thermal wavelength needs T > 0 and M > 0, got T = {t_k}, M = {mass_kg}"
        )));
    }
    Ok((2.0 * PI * HBAR * HBAR / (mass_kg * K_B * t_k)).sqrt())
}

/// Temperature whose thermal wavelength is `lambda_m`.
pub fn temperature_for_wavelength(lambda_m: f64, mass_kg: f64) -> f64 {
    2.0 * PI * HBAR * HBAR / (mass_kg * K_B * lambda_m * lambda_m)
}

/// `ln y` with `n y + ln y = c`. The left side is increasing and convex in
/// `w = ln y`, so Newton from `w = c` (where it is already >= c) descends
/// monotonically onto the root.
fn ln_lambda_cr_sq(n: f64, c: f64) -> f64 {
    let mut w = c;
    for _ in 0..200 {
        let e = n * w.exp();
        let step = (e + w - c) / (e + 1.0);
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    w
}

/// Critical wavelength `Λ_cr` (units of `L0`) of a lake of size `l_c` in a
/// gas of density `n`: the root `y = Λ_cr²` of `n y + ln y = ln(2 L_c²)`,
/// which lies in `(0, 2 L_c²]`.
pub fn solve_lambda_cr(n: f64, l_c: f64) -> Result<f64> {
    if !(n >= 0.0 && n.is_finite() && l_c > 0.0 && l_c.is_finite()) {
        return Err(Error::domain(format!("need n >= 0 and L_c > 0, got n = {n}, L_c = {l_c}")));
    }
    Ok((0.5 * ln_lambda_cr_sq(n, 2f64.ln() + 2.0 * l_c.ln())).exp())
}

/// One point of the finite-temperature problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoInput {
    /// Total density, units of `1/L0²`.
    pub n: f64,
    pub t_k: f64,
    pub u: f64,
    pub fit: FitParams,
    pub mass_kg: f64,
    pub l0_m: f64,
}

impl ThermoInput {
    pub fn validate(&self) -> Result<()> {
        let checks = [("n", self.n), ("T", self.t_k), ("u", self.u), ("M", self.mass_kg), ("L0", self.l0_m)];
        for (name, v) in checks {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::precondition(format!("{name} must be positive, got {v}")));
            }
        }
        self.fit.validate()
    }

    /// Largest condensate density the power law admits, `n_g/u`.
    pub fn critical_density(&self) -> f64 {
        self.fit.n_g / self.u
    }

    /// Dimensionless thermal wavelength `Λ/L0`.
    pub fn lambda(&self) -> Result<f64> {
        Ok(thermal_wavelength(self.t_k, self.mass_kg)? / self.l0_m)
    }

    /// `ln L_c` at depletion `δ = n_g/u - n_c`.
    fn ln_l_c(&self, ln_depletion: f64) -> f64 {
        self.fit.alpha.ln() + self.fit.beta * (self.u.ln() + ln_depletion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState {
    pub t_k: f64,
    pub n_c: f64,
    /// `n_g/u - n_c`, exact even where `n_c` rounds to the cap.
    pub depletion: f64,
    pub condensate_fraction: f64,
    /// Localization length from the power law at this `n_c`, units of `L0`.
    pub l_c: f64,
    pub l_c_m: f64,
    /// Thermal wavelength, units of `L0`.
    pub lambda: f64,
    pub lambda_m: f64,
    pub lambda_cr: f64,
    pub lambda_cr_m: f64,
    pub condensed: bool,
    /// Sign changes of the mismatch seen on the scan (1 when condensed,
    /// 0 otherwise, more would mean competing roots).
    pub roots: usize,
}

/// Relative residuals of the three equations at `state`.
pub fn thermo_residuals(input: &ThermoInput, state: &ThermoState) -> [f64; 3] {
    let n = input.n;
    let y = state.lambda_cr * state.lambda_cr;
    let r1 = ((n - state.n_c) - n * y / (state.lambda * state.lambda)).abs() / n;
    let lhs = n * y;
    let r2 = (lhs - (2.0 * state.l_c * state.l_c / y).ln()).abs() / lhs.abs().max(1.0);
    let ln_lc = state.l_c.ln();
    let r3 = (ln_lc - input.ln_l_c(state.depletion.ln())).abs() / ln_lc.abs().max(1.0);
    [r1, r2, r3]
}

const SCAN_POINTS: usize = 512;

/// Solves the three equations for `n_c`.
///
/// Below onset (`Λ <= Λ_cr` of the lake at `n_c → 0`) the state is
/// uncondensed with `n_c = 0`. Otherwise the mismatch
/// `G = n_c - n (1 - Λ_cr²/Λ²)` is scanned on 512 points of `s` between
/// `n_c = min(n, n_g/u)` and `n_c = 0`, the largest-`n_c` sign change is
/// refined, and the number of sign changes is reported.
pub fn solve_thermo_state(input: &ThermoInput) -> Result<ThermoState> {
    input.validate()?;
    let n = input.n;
    let cap = input.critical_density();
    let lambda = input.lambda()?;
    let lambda_sq = lambda * lambda;
    let s_top = cap.ln();

    // y = Λ_cr² as a function of s, in log form
    let ln_y = |s: f64| ln_lambda_cr_sq(n, 2f64.ln() + 2.0 * input.ln_l_c(s));
    let state = |s: f64, n_c: f64, ln_y: f64, condensed: bool, roots: usize| {
        let l_c = input.ln_l_c(s).exp();
        let lambda_cr = (0.5 * ln_y).exp();
        ThermoState {
            t_k: input.t_k,
            n_c,
            depletion: s.exp(),
            condensate_fraction: n_c / n,
            l_c,
            l_c_m: l_c * input.l0_m,
            lambda,
            lambda_m: lambda * input.l0_m,
            lambda_cr,
            lambda_cr_m: lambda_cr * input.l0_m,
            condensed,
            roots,
        }
    };

    let onset = ln_y(s_top);
    if lambda_sq.ln() <= onset {
        return Ok(state(s_top, 0.0, onset, false, 0));
    }

    // mismatch, scaled by 1/n; decreasing in s
    let g = |s: f64| (cap - s.exp()) / n - 1.0 + (ln_y(s) - lambda_sq.ln()).exp();

    let s_bottom = if n < cap {
        (cap - n).ln()
    } else {
        // above the critical density: walk down until the lake outgrows Λ
        let mut s = s_top;
        loop {
            s -= 2.0;
            if g(s) > 0.0 {
                break s;
            }
            if s < f64::MIN_POSITIVE.ln() {
                return Err(Error::Convergence {
                    iterations: 0,
                    residual: g(s).abs(),
                    best: cap,
                });
            }
        }
    };

    let ss: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| s_bottom + (s_top - s_bottom) * i as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    let gs: Vec<f64> = ss.iter().map(|&s| g(s)).collect();
    let changes: Vec<usize> = (0..SCAN_POINTS - 1).filter(|&i| gs[i] * gs[i + 1] <= 0.0).collect();
    let Some(&first) = changes.first() else {
        return Err(Error::Convergence {
            iterations: SCAN_POINTS,
            residual: gs.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())),
            best: 0.0,
        });
    };
    let bracket = Bracket::from_values(ss[first], ss[first + 1], gs[first], gs[first + 1])?;
    let s = find_root_bracketed(g, bracket, 4.0 * f64::EPSILON * s_bottom.abs().max(1.0))?;
    // deep in the saturated regime the depletion drops below one ulp of the
    // cap; n_c stays strictly below it and `depletion` keeps the exact gap
    let n_c = (cap - s.exp()).clamp(0.0, cap.next_down());
    Ok(state(s, n_c, ln_y(s), true, changes.len()))
}

/// Onset temperature: `Λ(T_c) = Λ_cr(n, L_c(n_c → 0))` with
/// `L_c(0) = α n_g^β`, which does not depend on `u`.
pub fn condensation_temperature(n: f64, fit: &FitParams, mass_kg: f64, l0_m: f64) -> Result<f64> {
    fit.validate()?;
    if !(n > 0.0 && mass_kg > 0.0 && l0_m > 0.0) {
        return Err(Error::precondition("need n, M, L0 > 0"));
    }
    let lambda_cr = solve_lambda_cr(n, fit.coherence_length(0.0))?;
    Ok(temperature_for_wavelength(lambda_cr * l0_m, mass_kg))
}

/// One temperature of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoSample {
    pub t_k: f64,
    pub result: std::result::Result<ThermoState, Error>,
}

/// States along `t_grid` (positive, increasing); a failing temperature
/// keeps its error and the sweep continues.
pub fn thermo_sweep(
    n: f64,
    u: f64,
    fit: &FitParams,
    mass_kg: f64,
    l0_m: f64,
    t_grid: &[f64],
    workers: Option<usize>,
) -> Result<Vec<ThermoSample>> {
    if t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::precondition("temperatures must be positive"));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::precondition("temperatures must be strictly increasing"));
    }
    if let Some(&t_k) = t_grid.first() {
        ThermoInput { n, t_k, u, fit: *fit, mass_kg, l0_m }.validate()?;
    }
    map_ordered(t_grid, workers, |&t_k| ThermoSample {
        t_k,
        result: solve_thermo_state(&ThermoInput { n, t_k, u, fit: *fit, mass_kg, l0_m }),
    })
}

/// Columns `T_K, lambda_m, lambda_cr_m, n_c_dimless, fraction, L_c_dimless,
/// L_c_um, condensed`, plus one column per `extra` entry (name, value per
/// row; `None` leaves the cell empty). Failed rows keep only `T_K`.
pub fn write_thermo_csv<W: Write>(
    samples: &[ThermoSample],
    extra: &[(&str, Vec<Option<f64>>)],
    out: W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header: Vec<&str> = vec![
        "T_K", "lambda_m", "lambda_cr_m", "n_c_dimless", "fraction", "L_c_dimless", "L_c_um", "condensed",
    ];
    header.extend(extra.iter().map(|(name, _)| *name));
    w.write_record(&header)?;
    for (i, sample) in samples.iter().enumerate() {
        let mut row = vec![num(sample.t_k)];
        match &sample.result {
            Ok(s) => row.extend([
                num(s.lambda_m),
                num(s.lambda_cr_m),
                num(s.n_c),
                num(s.condensate_fraction),
                num(s.l_c),
                num(s.l_c_m * 1e6),
                s.condensed.to_string(),
            ]),
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 7)),
        }
        for (_, values) in extra {
            row.push(values.get(i).copied().flatten().map(num).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
