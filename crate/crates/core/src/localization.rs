//! The optimal well radius for a given density, the localization-length
//! curve `L_c(n_c)` and its critical power law `L_c = α (n_g - u n_c)^β`.
//!
//! A condensate lake of density `n_c` settles in the well radius `L` that
//! minimizes its chemical potential. Above a critical density no radius
//! binds it any more and `L_c` diverges on approach.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::{solve_gp, GpOptions, GpProblem, GpSolution, RadialProfile};
use crate::numerics::golden_section_minimize;
use crate::sweep::map_ordered;

/// Range and resolution of the search over well radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanOptions {
    pub l_min: f64,
    pub l_max: f64,
    /// Geometrically spaced radii in the coarse scan.
    pub points: usize,
    /// Relative tolerance on the minimizing radius.
    pub rel_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { l_min: 0.5, l_max: 40.0, points: 80, rel_tol: 1e-4 }
    }
}

impl ScanOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.l_min > 0.0 && self.l_max > self.l_min && self.l_max.is_finite()) {
            return Err(Error::precondition(format!(
                "scan needs 0 < l_min < l_max, got [{}, {}]",
                self.l_min, self.l_max
            )));
        }
        if self.points < 3 {
            return Err(Error::precondition("scan needs at least 3 points"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::precondition("rel_tol must lie in (0, 1)"));
        }
        Ok(())
    }

    /// The coarse-scan radii.
    pub fn radii(&self) -> Vec<f64> {
        geometric(self.l_min, self.l_max, self.points)
    }
}

fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = hi / lo;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo * ratio.powf(i as f64 / (count - 1) as f64)
            }
        })
        .collect()
}

/// Densities from `lo` to `hi` whose distance to `anchor` shrinks
/// geometrically, resolving the divergence of `L_c` near the threshold.
pub fn density_grid(lo: f64, hi: f64, anchor: f64, count: usize) -> Result<Vec<f64>> {
    if !(0.0 < lo && lo < hi && hi < anchor) || count < 2 {
        return Err(Error::precondition(
            "density grid needs 0 < lo < hi < anchor and at least 2 points",
        ));
    }
    Ok(geometric(anchor - lo, anchor - hi, count)
        .into_iter()
        .enumerate()
        .map(|(i, gap)| match i {
            0 => lo,
            i if i + 1 == count => hi,
            _ => anchor - gap,
        })
        .collect())
}

fn mu_at(u: f64, n_c: f64, l: f64, gp: &GpOptions) -> Result<Option<GpSolution>> {
    match solve_gp(&GpProblem::with_options(u, n_c, l, *gp)?) {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.is_not_localized() => Ok(None),
        Err(e) => Err(e),
    }
}

/// The well radius minimizing `μ₀` at fixed `(u, n_c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalLake {
    pub l_star: f64,
    pub mu0_star: f64,
    pub l_c: f64,
    pub solution: GpSolution,
    /// Smallest and largest localized radius of the coarse scan.
    pub localized_range: (f64, f64),
}

/// Coarse scan of `μ₀(L)` followed by golden-section refinement between the
/// neighbours of the best scanned radius.
pub fn minimize_mu_over_l(
    u: f64,
    n_c: f64,
    scan: &ScanOptions,
    gp: &GpOptions,
) -> Result<OptimalLake> {
    GpProblem::with_options(u, n_c, 1.0, *gp)?;
    scan.validate()?;
    let radii = scan.radii();
    let mut mu = Vec::with_capacity(radii.len());
    for &l in &radii {
        mu.push(mu_at(u, n_c, l, gp)?.map(|s| s.mu0));
    }
    let localized: Vec<usize> = (0..radii.len()).filter(|&i| mu[i].is_some()).collect();
    let (Some(&first), Some(&last)) = (localized.first(), localized.last()) else {
        return Err(Error::NoLocalizedSolution { u, n_c });
    };
    let best = localized
        .iter()
        .copied()
        .min_by(|&a, &b| mu[a].unwrap().total_cmp(&mu[b].unwrap()))
        .expect("at least one localized radius");

    let lo = radii[best.saturating_sub(1)];
    let hi = radii[(best + 1).min(radii.len() - 1)];
    let mut champion = mu_at(u, n_c, radii[best], gp)?.expect("localized on rescan");
    let mut failure = None;
    golden_section_minimize(
        |l| match mu_at(u, n_c, l, gp) {
            Ok(Some(s)) => {
                let value = s.mu0;
                if value < champion.mu0 {
                    champion = s;
                }
                value
            }
            Ok(None) => f64::INFINITY,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        scan.rel_tol * radii[best],
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(OptimalLake {
        l_star: champion.l,
        mu0_star: champion.mu0,
        l_c: champion.l_c,
        localized_range: (radii[first], radii[last]),
        solution: champion,
    })
}

/// Edges of the set of radii with a localized state, refined by bisection
/// on the localized/not-localized outcome to relative width `rel_tol`.
/// `None` if no scanned radius localizes.
pub fn localized_range(
    u: f64,
    n_c: f64,
    scan: &ScanOptions,
    gp: &GpOptions,
) -> Result<Option<(f64, f64)>> {
    GpProblem::with_options(u, n_c, 1.0, *gp)?;
    scan.validate()?;
    let radii = scan.radii();
    let mut flags = Vec::with_capacity(radii.len());
    for &l in &radii {
        flags.push(mu_at(u, n_c, l, gp)?.is_some());
    }
    let (Some(first), Some(last)) = (flags.iter().position(|&f| f), flags.iter().rposition(|&f| f))
    else {
        return Ok(None);
    };
    let edge = |inside: f64, outside: f64| -> Result<f64> {
        let (mut inside, mut outside) = (inside, outside);
        while (outside - inside).abs() > scan.rel_tol * inside {
            let mid = (inside * outside).sqrt();
            if mu_at(u, n_c, mid, gp)?.is_some() {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(inside)
    };
    let lower = if first == 0 { radii[0] } else { edge(radii[first], radii[first - 1])? };
    let upper = if last + 1 == radii.len() { radii[last] } else { edge(radii[last], radii[last + 1])? };
    Ok(Some((lower, upper)))
}

/// `μ₀` and `L_c` at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct MuSample {
    pub l: f64,
    /// `(μ₀, L_c)`, or why there is none.
    pub result: std::result::Result<(f64, f64), Error>,
}

/// `μ₀(L)` over the given radii; failures stay in their row.
pub fn scan_mu_over_l(
    u: f64,
    n_c: f64,
    radii: &[f64],
    gp: &GpOptions,
    workers: Option<usize>,
) -> Result<Vec<MuSample>> {
    GpProblem::with_options(u, n_c, 1.0, *gp)?;
    map_ordered(radii, workers, |&l| MuSample {
        l,
        result: GpProblem::with_options(u, n_c, l, *gp)
            .and_then(|p| solve_gp(&p))
            .map(|s| (s.mu0, s.l_c)),
    })
}

/// Writes `L, mu0, L_c, localized`; the numbers are empty where the state is
/// not localized.
pub fn write_mu_csv<W: Write>(samples: &[MuSample], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["L", "mu0", "L_c", "localized"])?;
    for s in samples {
        let (mu, lc, flag) = match &s.result {
            Ok((mu, lc)) => (num(*mu), num(*lc), "true"),
            Err(_) => (String::new(), String::new(), "false"),
        };
        w.write_record([num(s.l), mu, lc, flag.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-trip decimal form; stable across runs and platforms.
pub(crate) fn num(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointOutcome {
    Localized(Box<OptimalLake>),
    NotLocalized,
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub n_c: f64,
    pub outcome: PointOutcome,
}

impl CurvePoint {
    pub fn lake(&self) -> Option<&OptimalLake> {
        match &self.outcome {
            PointOutcome::Localized(lake) => Some(lake),
            _ => None,
        }
    }
}

/// `L_c`, `L*` and `μ₀*` against density at fixed `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationCurve {
    pub u: f64,
    pub points: Vec<CurvePoint>,
}

impl LocalizationCurve {
    /// `(n_c, lake)` for the localized points, in density order.
    pub fn localized(&self) -> impl Iterator<Item = (f64, &OptimalLake)> {
        self.points.iter().filter_map(|p| p.lake().map(|l| (p.n_c, l)))
    }

    /// The same curve under `u → u/a`, `n_c → a n_c`, `ψ → √a ψ`.
    pub fn rescaled(&self, a: f64) -> Result<Self> {
        check_scale(a)?;
        let points = self
            .points
            .iter()
            .map(|p| {
                let outcome = match &p.outcome {
                    PointOutcome::Localized(lake) => {
                        let mut lake = lake.clone();
                        let s = &mut lake.solution;
                        s.profile = s.profile.scaled(a.sqrt());
                        s.n_c *= a;
                        PointOutcome::Localized(lake)
                    }
                    other => other.clone(),
                };
                CurvePoint { n_c: a * p.n_c, outcome }
            })
            .collect();
        Ok(Self { u: self.u / a, points })
    }

    /// Writes `n_c, L_c, L_star, mu0_star, localized_flag`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["n_c", "L_c", "L_star", "mu0_star", "localized_flag"])?;
        for p in &self.points {
            let row = match p.lake() {
                Some(l) => [num(p.n_c), num(l.l_c), num(l.l_star), num(l.mu0_star), "true".into()],
                None => [num(p.n_c), String::new(), String::new(), String::new(), "false".into()],
            };
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One optimal lake per density. Densities without a localized state are
/// marked, numerical failures are kept in their point; neither aborts the
/// sweep. Points are independent and evaluated on `workers` threads.
pub fn localization_curve(
    u: f64,
    densities: &[f64],
    scan: &ScanOptions,
    gp: &GpOptions,
    workers: Option<usize>,
) -> Result<LocalizationCurve> {
    if densities.iter().any(|&n| !(n > 0.0) || !n.is_finite()) {
        return Err(Error::precondition("densities must be positive"));
    }
    if densities.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::precondition("densities must be strictly increasing"));
    }
    if let Some(&n) = densities.first() {
        GpProblem::with_options(u, n, 1.0, *gp)?;
    }
    scan.validate()?;
    let points = map_ordered(densities, workers, |&n_c| CurvePoint {
        n_c,
        outcome: match minimize_mu_over_l(u, n_c, scan, gp) {
            Ok(lake) => PointOutcome::Localized(Box::new(lake)),
            Err(e) if e.is_not_localized() => PointOutcome::NotLocalized,
            Err(e) => PointOutcome::Failed(e),
        },
    })?;
    Ok(LocalizationCurve { u, points })
}

fn check_scale(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("scale factor must be positive, got {a}")))
    }
}

/// `(u, n_c, ψ) → (u/a, a n_c, √a ψ)`. `μ₀`, `L` and `L_c` are invariant.
pub fn rescale_solution(
    u: f64,
    n_c: f64,
    profile: &RadialProfile,
    a: f64,
) -> Result<(f64, f64, RadialProfile)> {
    check_scale(a)?;
    Ok((u / a, a * n_c, profile.scaled(a.sqrt())))
}

/// Critical power law `L_c = α (n_g - x)^β` in the scaling variable
/// `x = u n_c`, which makes the fit independent of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitParams {
    pub alpha: f64,
    pub beta: f64,
    /// Threshold of `u n_c`.
    pub n_g: f64,
    /// Root-mean-square residual of `ln L_c`.
    pub rms_residual: f64,
}

impl FitParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.beta < 0.0 && self.n_g > 0.0)
            || !self.alpha.is_finite()
            || !self.beta.is_finite()
            || !self.n_g.is_finite()
        {
            return Err(Error::precondition(format!(
                "fit needs alpha > 0, beta < 0, n_g > 0, got ({}, {}, {})",
                self.alpha, self.beta, self.n_g
            )));
        }
        Ok(())
    }

    /// `ln L_c` at `x = u n_c < n_g`, evaluated in log form so that it stays
    /// finite arbitrarily close to the threshold.
    pub fn ln_coherence_length(&self, x: f64) -> f64 {
        self.alpha.ln() + self.beta * (self.n_g - x).ln()
    }

    pub fn coherence_length(&self, x: f64) -> f64 {
        self.ln_coherence_length(x).exp()
    }

    /// Writes the summary record `alpha, beta, n_g, rms`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["alpha", "beta", "n_g", "rms"])?;
        w.write_record([num(self.alpha), num(self.beta), num(self.n_g), num(self.rms_residual)])?;
        w.flush()?;
        Ok(())
    }
}

/// Fits the localized points of `curve` (at least five).
pub fn fit_power_law(curve: &LocalizationCurve) -> Result<FitParams> {
    if !(curve.u > 0.0) {
        return Err(Error::precondition("the critical fit needs u > 0"));
    }
    let (x, lc): (Vec<f64>, Vec<f64>) = curve.localized().map(|(n, l)| (curve.u * n, l.l_c)).unzip();
    fit_power_law_points(&x, &lc)
}

const MIN_FIT_POINTS: usize = 5;
const THRESHOLD_SCAN: usize = 400;

/// Least-squares fit of `ln L_c = ln α + β ln(n_g - x)`: linear in
/// `(ln α, β)` for fixed `n_g`, leaving a one-dimensional search over
/// `t = ln(n_g - max x)` (scan, then golden section).
pub fn fit_power_law_points(x: &[f64], lc: &[f64]) -> Result<FitParams> {
    if x.len() != lc.len() {
        return Err(Error::Shape { expected: x.len(), got: lc.len() });
    }
    if x.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints { needed: MIN_FIT_POINTS, got: x.len() });
    }
    if x.iter().chain(lc).any(|v| !v.is_finite()) || lc.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::precondition("fit data must be finite with L_c > 0"));
    }
    let y: Vec<f64> = lc.iter().map(|l| l.ln()).collect();
    let y_spread = y.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - y.iter().copied().fold(f64::INFINITY, f64::min);
    if y_spread <= 1e-12 {
        return Err(Error::Rank("L_c is constant".into()));
    }
    let x_max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let x_min = x.iter().copied().fold(f64::INFINITY, f64::min);
    let span = x_max - x_min;
    if !(span > 0.0) {
        return Err(Error::Rank("all points share one density".into()));
    }

    let regress = |t: f64| -> (f64, f64, f64) {
        let n_g = x_max + t.exp();
        let xs: Vec<f64> = x.iter().map(|xi| (n_g - xi).ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|v| (v - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        if !(sxx > 0.0) {
            return (f64::NAN, f64::NAN, f64::INFINITY);
        }
        let beta = sxy / sxx;
        let ln_alpha = my - beta * mx;
        let sse = xs.iter().zip(&y).map(|(a, b)| (b - ln_alpha - beta * a).powi(2)).sum();
        (ln_alpha, beta, sse)
    };

    let t_lo = (1e-9 * span).ln();
    let t_hi = (1e3 * span).ln();
    let ts = (0..THRESHOLD_SCAN)
        .map(|i| t_lo + (t_hi - t_lo) * i as f64 / (THRESHOLD_SCAN - 1) as f64)
        .collect::<Vec<_>>();
    let sse: Vec<f64> = ts.iter().map(|&t| regress(t).2).collect();
    let best = (0..ts.len()).min_by(|&a, &b| sse[a].total_cmp(&sse[b])).unwrap();
    if best == 0 || best + 1 == ts.len() {
        let s = regress(ts[best]).2;
        return Err(Error::Convergence {
            iterations: THRESHOLD_SCAN,
            residual: (s / x.len() as f64).sqrt(),
            best: x_max + ts[best].exp(),
        });
    }
    let (t, _) = golden_section_minimize(|t| regress(t).2, ts[best - 1], ts[best + 1], 1e-13);
    let (ln_alpha, beta, sse) = regress(t);
    if !(beta < 0.0) {
        return Err(Error::Rank(format!("L_c does not diverge toward a threshold (beta = {beta})")));
    }
    Ok(FitParams {
        alpha: ln_alpha.exp(),
        beta,
        n_g: x_max + t.exp(),
        rms_residual: (sse / x.len() as f64).sqrt(),
    })
}
