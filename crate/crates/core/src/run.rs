//! Batch runs behind the `boseglass` binary: the TOML configuration, its
//! validation, and one function per subcommand writing CSV files and a run
//! manifest into an output directory.
//!
//! Every section of the configuration is optional and falls back to the
//! defaults printed by `boseglass print-config`. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::gp::GpOptions;
use crate::localization::{
    density_grid, fit_power_law, fit_power_law_points, localization_curve, scan_mu_over_l, write_mu_csv,
    FitParams, LocalizationCurve, PointOutcome, ScanOptions,
};
use crate::materials::{density_to_dimensionless, per_cm2_to_per_m2, ExcitonMaterial};
use crate::superradiance::{emission_pattern_table, phi_grid, write_pattern_csv, EmissionModel, Variant};
use crate::thermo::{condensation_temperature, thermo_sweep, write_thermo_csv};

/// Why a run stopped. Each kind has its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 1,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(m) => RunError::Io(m),
            Error::Convergence { .. }
            | Error::NotLocalized { .. }
            | Error::NoLocalizedSolution { .. }
            | Error::InsufficientPoints { .. }
            | Error::Rank(_) => RunError::Numerical(e.to_string()),
            other => RunError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

type RunResult<T> = std::result::Result<T, RunError>;

fn field(section: &str, e: Error) -> RunError {
    RunError::Config(format!("[{section}] {e}"))
}

fn check(section: &str, ok: bool, message: &str) -> RunResult<()> {
    if ok {
        Ok(())
    } else {
        Err(RunError::Config(format!("[{section}] {message}")))
    }
}

fn positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}

/// A shipped preset with optional per-field overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    pub preset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e0_mev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavelength_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma0_per_s: Option<f64>,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self {
            preset: "gaas".into(),
            m_e: None,
            m_h: None,
            a0_m: None,
            e0_mev: None,
            wavelength_m: None,
            gamma0_per_s: None,
        }
    }
}

impl MaterialConfig {
    pub fn resolve(&self) -> RunResult<ExcitonMaterial> {
        let mut m = ExcitonMaterial::preset(&self.preset).map_err(|e| field("material", e))?;
        let overrides = [
            (&mut m.m_e, self.m_e),
            (&mut m.m_h, self.m_h),
            (&mut m.a0_m, self.a0_m),
            (&mut m.e0_mev, self.e0_mev),
            (&mut m.wavelength_m, self.wavelength_m),
            (&mut m.gamma0_per_s, self.gamma0_per_s),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        m.validate().map_err(|e| field("material", e))?;
        Ok(m)
    }
}

/// `μ₀(L)` at fixed `(u, n_c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MuOfLConfig {
    pub u: f64,
    pub n_c: f64,
    pub l_min: f64,
    pub l_max: f64,
    /// Geometrically spaced radii; 0 gives a header-only table.
    pub points: usize,
}

impl Default for MuOfLConfig {
    fn default() -> Self {
        Self { u: 1.0, n_c: 0.06, l_min: 0.5, l_max: 10.0, points: 60 }
    }
}

impl MuOfLConfig {
    fn validate(&self) -> RunResult<()> {
        check("mu_of_l", self.u >= 0.0 && self.u.is_finite(), "u must be >= 0")?;
        check("mu_of_l", positive(self.n_c), "n_c must be positive")?;
        check("mu_of_l", positive(self.l_min) && self.l_max > self.l_min && self.l_max.is_finite(), "need 0 < l_min < l_max")
    }

    fn radii(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.l_min],
            n => (0..n)
                .map(|i| self.l_min * (self.l_max / self.l_min).powf(i as f64 / (n - 1) as f64))
                .collect(),
        }
    }
}

/// Optimal lakes over a density grid at fixed `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocCurveConfig {
    pub u: f64,
    /// Explicit densities; when empty, `count` densities from `n_min` to
    /// `n_max` crowding geometrically towards `anchor`.
    pub densities: Vec<f64>,
    pub n_min: f64,
    pub n_max: f64,
    pub anchor: f64,
    pub count: usize,
    /// Also write the curve mapped by `u → u/a`, `n_c → a n_c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rescale: Option<f64>,
}

impl Default for LocCurveConfig {
    fn default() -> Self {
        Self { u: 1.0, densities: Vec::new(), n_min: 0.01, n_max: 0.072, anchor: 0.074, count: 14, rescale: None }
    }
}

impl LocCurveConfig {
    fn validate(&self) -> RunResult<()> {
        check("loc_curve", positive(self.u), "u must be positive")?;
        if let Some(a) = self.rescale {
            check("loc_curve", positive(a), "rescale must be positive")?;
        }
        let n = self.densities()?;
        check("loc_curve", n.len() >= 2, "the fit needs at least two densities")?;
        check("loc_curve", n.iter().all(|&x| positive(x)), "densities must be positive")?;
        check("loc_curve", n.windows(2).all(|w| w[1] > w[0]), "densities must be strictly increasing")
    }

    pub fn densities(&self) -> RunResult<Vec<f64>> {
        if self.densities.is_empty() {
            density_grid(self.n_min, self.n_max, self.anchor, self.count).map_err(|e| field("loc_curve", e))
        } else {
            Ok(self.densities.clone())
        }
    }
}

/// Power-law fit, from a saved curve or a fresh `[loc_curve]` run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// A `loc_curve.csv` to fit; its `u` is `[loc_curve] u`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_csv: Option<PathBuf>,
}

/// Critical power law used by the finite-temperature closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerLaw {
    pub alpha: f64,
    pub beta: f64,
    pub n_g: f64,
}

impl Default for PowerLaw {
    fn default() -> Self {
        Self { alpha: 5.4, beta: -0.1317, n_g: 0.074 }
    }
}

impl From<PowerLaw> for FitParams {
    fn from(p: PowerLaw) -> Self {
        FitParams { alpha: p.alpha, beta: p.beta, n_g: p.n_g, rms_residual: 0.0 }
    }
}

/// Condensate fraction and lake size against temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThermoConfig {
    pub u: f64,
    /// Disorder length, m.
    pub l0_m: f64,
    /// Exciton densities, 1/cm²; one table each.
    pub densities_per_cm2: Vec<f64>,
    pub t_min_k: f64,
    pub t_max_k: f64,
    /// Geometrically spaced temperatures.
    pub t_points: usize,
    pub fit: PowerLaw,
}

impl Default for ThermoConfig {
    fn default() -> Self {
        Self {
            u: 47.0,
            l0_m: 1e-8,
            densities_per_cm2: vec![1.2e10, 0.8e10, 0.4e10],
            t_min_k: 0.2,
            t_max_k: 4.0,
            t_points: 40,
            fit: PowerLaw::default(),
        }
    }
}

impl ThermoConfig {
    fn validate(&self) -> RunResult<()> {
        check("thermo", positive(self.u), "u must be positive")?;
        check("thermo", positive(self.l0_m), "l0_m must be positive")?;
        check("thermo", self.densities_per_cm2.iter().all(|&n| positive(n)), "densities must be positive")?;
        check(
            "thermo",
            positive(self.t_min_k) && self.t_max_k > self.t_min_k && self.t_max_k.is_finite(),
            "need 0 < t_min_k < t_max_k",
        )?;
        FitParams::from(self.fit).validate().map_err(|e| field("thermo.fit", e))
    }

    pub fn temperatures(&self) -> Vec<f64> {
        match self.t_points {
            0 => Vec::new(),
            1 => vec![self.t_min_k],
            n => (0..n)
                .map(|i| self.t_min_k * (self.t_max_k / self.t_min_k).powf(i as f64 / (n - 1) as f64))
                .collect(),
        }
    }
}

/// Angular pattern and rate enhancement of one lake.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmissionConfig {
    /// Localization length, m.
    pub l_c_m: f64,
    /// Dipole orientation, rad.
    pub chi_rad: f64,
    /// Angular intervals on `[0, π]`.
    pub phi_points: usize,
    /// Cooperativity prefactor; also used for the thermo enhancement column.
    pub variant: Variant,
}

impl Default for EmissionConfig {
    fn default() -> Self {
        Self { l_c_m: 1e-6, chi_rad: 0.0, phi_points: 360, variant: Variant::LimitConsistent }
    }
}

impl EmissionConfig {
    fn validate(&self) -> RunResult<()> {
        check("emission", positive(self.l_c_m), "l_c_m must be positive")?;
        check("emission", self.chi_rad.is_finite(), "chi_rad must be finite")?;
        check("emission", self.phi_points >= 1, "phi_points must be at least 1")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Threads for independent sweep points; unset uses all cores.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub material: MaterialConfig,
    pub solver: GpOptions,
    pub scan: ScanOptions,
    pub mu_of_l: MuOfLConfig,
    pub loc_curve: LocCurveConfig,
    pub fit: FitConfig,
    pub thermo: ThermoConfig,
    pub emission: EmissionConfig,
}

impl Config {
    pub fn from_toml_str(text: &str) -> RunResult<Self> {
        toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> RunResult<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("the configuration is plain data")
    }

    /// SHA-256 of the canonical TOML form, so formatting and comments of
    /// the source file do not matter.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    /// Checks everything `command` reads, before any computation.
    pub fn validate(&self, command: Command) -> RunResult<()> {
        if self.workers == Some(0) {
            return Err(RunError::Config("workers must be at least 1".into()));
        }
        self.solver.validate().map_err(|e| field("solver", e))?;
        self.scan.validate().map_err(|e| field("scan", e))?;
        match command {
            Command::MuOfL => self.mu_of_l.validate(),
            Command::LocCurve => self.loc_curve.validate(),
            Command::Fit => match &self.fit.curve_csv {
                Some(_) => check("loc_curve", positive(self.loc_curve.u), "u must be positive"),
                None => self.loc_curve.validate(),
            },
            Command::Thermo => {
                self.thermo.validate()?;
                self.material.resolve().map(|_| ())
            }
            Command::Emission => {
                self.emission.validate()?;
                self.material.resolve().map(|_| ())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    MuOfL,
    LocCurve,
    Fit,
    Thermo,
    Emission,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::MuOfL => "mu-of-l",
            Command::LocCurve => "loc-curve",
            Command::Fit => "fit",
            Command::Thermo => "thermo",
            Command::Emission => "emission",
        }
    }
}

/// What a finished run produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub command: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
    /// Sweep points that failed numerically (not merely unlocalized).
    pub failed_points: usize,
    pub notes: Vec<String>,
}

struct Sink<'a> {
    dir: &'a Path,
    outputs: Vec<PathBuf>,
}

impl Sink<'_> {
    fn write(&mut self, name: &str, f: impl FnOnce(&mut Vec<u8>) -> crate::Result<()>) -> RunResult<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        let path = self.dir.join(name);
        fs::write(&path, buf)?;
        self.outputs.push(path);
        Ok(())
    }
}

/// Validates `config`, runs `command`, writes its tables into `out_dir`
/// together with `run_manifest.json`.
///
/// Points of a sweep that fail numerically are left empty in the tables and
/// counted in [`RunSummary::failed_points`]; the caller decides whether
/// that is fatal.
pub fn execute(command: Command, config: &Config, out_dir: &Path) -> RunResult<RunSummary> {
    config.validate(command)?;
    let start = Instant::now();
    fs::create_dir_all(out_dir)?;
    let mut sink = Sink { dir: out_dir, outputs: Vec::new() };
    let mut notes = Vec::new();
    let failed = match command {
        Command::MuOfL => run_mu_of_l(config, &mut sink)?,
        Command::LocCurve => run_loc_curve(config, &mut sink, &mut notes)?,
        Command::Fit => run_fit(config, &mut sink, &mut notes)?,
        Command::Thermo => run_thermo(config, &mut sink, &mut notes)?,
        Command::Emission => run_emission(config, &mut sink)?,
    };
    let mut summary = RunSummary {
        command: command.name(),
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: config.hash(),
        wall_time_s: 0.0,
        outputs: sink.outputs,
        failed_points: failed,
        notes,
    };
    summary.wall_time_s = start.elapsed().as_secs_f64();
    let manifest = serde_json::to_string_pretty(&summary).map_err(|e| RunError::Io(e.to_string()))?;
    fs::write(out_dir.join("run_manifest.json"), manifest + "\n")?;
    Ok(summary)
}

fn run_mu_of_l(config: &Config, sink: &mut Sink) -> RunResult<usize> {
    let c = &config.mu_of_l;
    let rows = scan_mu_over_l(c.u, c.n_c, &c.radii(), &config.solver, config.workers)?;
    sink.write("mu_of_l.csv", |w| write_mu_csv(&rows, w))?;
    Ok(rows.iter().filter(|r| matches!(&r.result, Err(e) if !e.is_not_localized())).count())
}

fn failed_points(curve: &LocalizationCurve) -> usize {
    curve.points.iter().filter(|p| matches!(p.outcome, PointOutcome::Failed(_))).count()
}

fn compute_curve(config: &Config) -> RunResult<LocalizationCurve> {
    let c = &config.loc_curve;
    Ok(localization_curve(c.u, &c.densities()?, &config.scan, &config.solver, config.workers)?)
}

fn run_loc_curve(config: &Config, sink: &mut Sink, notes: &mut Vec<String>) -> RunResult<usize> {
    let curve = compute_curve(config)?;
    sink.write("loc_curve.csv", |w| curve.write_csv(w))?;
    if let Some(a) = config.loc_curve.rescale {
        let scaled = curve.rescaled(a)?;
        sink.write("loc_curve_rescaled.csv", |w| scaled.write_csv(w))?;
        notes.push(format!("rescaled curve is at u = {}", scaled.u));
    }
    match fit_power_law(&curve) {
        Ok(fit) => sink.write("fit.csv", |w| fit.write_csv(w))?,
        Err(e) => notes.push(format!("no power-law fit: {e}")),
    }
    Ok(failed_points(&curve))
}

#[derive(Deserialize)]
struct CurveRow {
    n_c: f64,
    #[serde(rename = "L_c")]
    l_c: Option<f64>,
    localized_flag: bool,
}

fn run_fit(config: &Config, sink: &mut Sink, notes: &mut Vec<String>) -> RunResult<usize> {
    let u = config.loc_curve.u;
    let (fit, failed) = match &config.fit.curve_csv {
        Some(path) => {
            let bad = |e: csv::Error| RunError::Config(format!("[fit] {}: {e}", path.display()));
            let mut reader = csv::Reader::from_path(path).map_err(bad)?;
            let (mut x, mut lc) = (Vec::new(), Vec::new());
            for row in reader.deserialize::<CurveRow>() {
                let row = row.map_err(bad)?;
                if let (true, Some(l)) = (row.localized_flag, row.l_c) {
                    x.push(u * row.n_c);
                    lc.push(l);
                }
            }
            notes.push(format!("fitted {} localized points from {}", x.len(), path.display()));
            (fit_power_law_points(&x, &lc)?, 0)
        }
        None => {
            let curve = compute_curve(config)?;
            (fit_power_law(&curve)?, failed_points(&curve))
        }
    };
    sink.write("fit.csv", |w| fit.write_csv(w))?;
    Ok(failed)
}

fn run_thermo(config: &Config, sink: &mut Sink, notes: &mut Vec<String>) -> RunResult<usize> {
    let c = &config.thermo;
    let material = config.material.resolve()?;
    let model = EmissionModel::from_material(&material, config.emission.variant);
    let fit = FitParams::from(c.fit);
    let temperatures = c.temperatures();
    let mut failed = 0;
    let mut summary = Vec::new();
    for &n_cm2 in &c.densities_per_cm2 {
        let n = density_to_dimensionless(per_cm2_to_per_m2(n_cm2), c.l0_m)?;
        let samples = thermo_sweep(n, c.u, &fit, material.mass_kg(), c.l0_m, &temperatures, config.workers)?;
        let mut enhancement = Vec::with_capacity(samples.len());
        for s in &samples {
            enhancement.push(match &s.result {
                Ok(state) if state.condensed => Some(model.enhancement_factor(state.l_c_m)?),
                _ => None,
            });
        }
        failed += samples.iter().filter(|s| s.result.is_err()).count();
        let name = format!("thermo_n{n_cm2:e}.csv");
        sink.write(&name, |w| write_thermo_csv(&samples, &[("enhancement", enhancement)], w))?;
        let tc = condensation_temperature(n, &fit, material.mass_kg(), c.l0_m)?;
        let above = n > fit.n_g / c.u;
        summary.push((n_cm2, n, tc, above));
    }
    notes.push(format!("density cap n_g/u = {:e} (units 1/L0^2)", fit.n_g / c.u));
    sink.write("thermo_summary.csv", |w| {
        let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        csv.write_record(["n_per_cm2", "n_dimless", "T_c_K", "above_critical"])?;
        for (n_cm2, n, tc, above) in &summary {
            csv.write_record([format!("{n_cm2:e}"), format!("{n:e}"), format!("{tc:e}"), above.to_string()])?;
        }
        csv.flush()?;
        Ok(())
    })?;
    Ok(failed)
}

fn run_emission(config: &Config, sink: &mut Sink) -> RunResult<usize> {
    let c = &config.emission;
    let material = config.material.resolve()?;
    let model = EmissionModel::from_material(&material, c.variant);
    let table = emission_pattern_table(&model, c.l_c_m, c.chi_rad, &phi_grid(c.phi_points))?;
    sink.write("emission_pattern.csv", |w| write_pattern_csv(&table, w))?;
    let report = model.report(c.l_c_m)?;
    sink.write("emission_report.csv", |w| report.write_csv(w))?;
    Ok(0)
}
