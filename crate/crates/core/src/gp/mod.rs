//! Radially symmetric ground state of the dimensionless Gross-Pitaevskii
//! equation in a single cylindrical well,
//!
//! ```text
//! -∇²ψ - L θ(1 - r) ψ + u ψ³ = μ₀ L² ψ,
//! ```
//!
//! with `r` in units of the well radius `L` and `ψ` in units of `1/L`, subject
//! to `∫ψ² = n_c L_c²` and `∫ψ⁴ = n_c² L_c² L²`. Their quotient
//! `∫ψ⁴ / ∫ψ² = n_c L²` fixes the amplitude; the first then defines `L_c`.

mod operator;
mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RadialGrid;
use operator::Operator;
use solver::{match_amplitude, relax, Tolerances, Workspace};

pub use solver::ENERGY_SLACK;

/// Discretization and convergence controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GpOptions {
    /// Uniform cells per well radius in the core region.
    pub cells_per_radius: usize,
    /// Extent of the uniform core, in well radii.
    pub core_extent: f64,
    /// Growth of consecutive cells beyond the core, per core cell width:
    /// neighbouring cells differ by the factor `1 + stretch_rate / cells_per_radius`,
    /// so refinement also smooths the stretched region.
    pub stretch_rate: f64,
    /// Smallest cutoff radius, in well radii.
    pub r_max_floor: f64,
    /// Exterior decay lengths `1/κ` kept inside the cutoff.
    pub decay_lengths: f64,
    /// Largest cutoff radius, in well radii.
    pub r_max_cap: f64,
    pub residual_tol: f64,
    /// Per-step change of the eigenvalue regarded as stagnation.
    pub eigen_tol: f64,
    /// Relative accuracy of the amplitude condition.
    pub constraint_tol: f64,
    /// Budget of relaxation steps for one solve.
    pub max_iterations: usize,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self {
            cells_per_radius: 400,
            core_extent: 2.0,
            stretch_rate: 2.0,
            r_max_floor: 4.0,
            decay_lengths: 8.0,
            r_max_cap: 2000.0,
            residual_tol: 1e-10,
            eigen_tol: 1e-10,
            constraint_tol: 1e-9,
            max_iterations: 200_000,
        }
    }
}

impl GpOptions {
    pub fn validate(&self) -> Result<()> {
        if self.cells_per_radius < 4 {
            return Err(Error::precondition("cells_per_radius must be at least 4"));
        }
        let positive = [
            ("core_extent", self.core_extent),
            ("r_max_floor", self.r_max_floor),
            ("decay_lengths", self.decay_lengths),
            ("residual_tol", self.residual_tol),
            ("eigen_tol", self.eigen_tol),
            ("constraint_tol", self.constraint_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::precondition(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.stretch_rate >= 0.0) || !self.stretch_rate.is_finite() {
            return Err(Error::precondition("stretch_rate must be >= 0"));
        }
        if !(self.r_max_cap >= self.r_max_floor) || self.r_max_floor <= 1.0 {
            return Err(Error::precondition("need 1 < r_max_floor <= r_max_cap"));
        }
        Ok(())
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances {
            residual: self.residual_tol,
            eigen: self.eigen_tol,
            constraint: self.constraint_tol,
            max_iterations: self.max_iterations,
        }
    }

    /// Cutoff for an exterior decay constant `kappa` (units of `1/L`),
    /// rounded up to the ladder `r_max_floor * 2^(k/4)` so that nearby
    /// problems share a grid.
    fn cutoff_for(&self, kappa: f64) -> f64 {
        let wanted = if kappa > 0.0 {
            (1.0 + self.decay_lengths / kappa).max(self.r_max_floor)
        } else {
            f64::INFINITY
        };
        let rung = (4.0 * (wanted / self.r_max_floor).log2()).ceil().max(0.0);
        (self.r_max_floor * 2f64.powf(rung / 4.0)).min(self.r_max_cap)
    }

    fn grid(&self, r_max: f64) -> Result<RadialGrid> {
        let h = 1.0 / self.cells_per_radius as f64;
        let max_spacing = ((r_max - 1.0) * h / 2.0).max(h);
        let ratio = 1.0 + self.stretch_rate * h;
        RadialGrid::stretched(h, self.core_extent, r_max, ratio, max_spacing)
    }
}

/// One well: interaction `u`, condensate density `n_c` (units `1/L0²`) and
/// well radius `L` (units `L0`). The disorder strength is 1 by choice of `L0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpProblem {
    pub u: f64,
    pub n_c: f64,
    pub l: f64,
    pub options: GpOptions,
}

impl GpProblem {
    /// Disorder strength in units where the length scale is `L0`; fixed.
    pub const XI0: f64 = 1.0;

    pub fn new(u: f64, n_c: f64, l: f64) -> Result<Self> {
        Self::with_options(u, n_c, l, GpOptions::default())
    }

    pub fn with_options(u: f64, n_c: f64, l: f64, options: GpOptions) -> Result<Self> {
        let p = Self { u, n_c, l, options };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u >= 0.0) || !self.u.is_finite() {
            return Err(Error::precondition(format!("u must be >= 0, got {}", self.u)));
        }
        if !(self.n_c > 0.0) || !self.n_c.is_finite() {
            return Err(Error::precondition(format!("n_c must be > 0, got {}", self.n_c)));
        }
        if !(self.l > 0.0) || !self.l.is_finite() {
            return Err(Error::precondition(format!("L must be > 0, got {}", self.l)));
        }
        self.options.validate()
    }

    /// Healing length `2 / sqrt(u n_c)` in units of `L0`; infinite at `u = 0`.
    pub fn healing_length(&self) -> f64 {
        2.0 / (self.u * self.n_c).sqrt()
    }
}

/// Order parameter samples `ψ(r)` on a radial grid in units of the well radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub grid: RadialGrid,
    pub psi: Vec<f64>,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, psi: Vec<f64>) -> Result<Self> {
        if psi.len() != grid.node_count() {
            return Err(Error::Shape { expected: grid.node_count(), got: psi.len() });
        }
        Ok(Self { grid, psi })
    }

    /// `∫ψ² d²r` with the control-volume measure the solver uses.
    pub fn norm2(&self) -> f64 {
        self.grid.cell_areas().iter().zip(&self.psi).map(|(a, p)| a * p * p).sum()
    }

    /// `∫ψ⁴ d²r` with the control-volume measure the solver uses.
    pub fn norm4(&self) -> f64 {
        self.grid.cell_areas().iter().zip(&self.psi).map(|(a, p)| a * p.powi(4)).sum()
    }

    pub fn max(&self) -> f64 {
        self.psi.iter().copied().fold(0.0, f64::max)
    }

    /// Number of sign changes between consecutive samples.
    pub fn sign_changes(&self) -> usize {
        self.psi
            .windows(2)
            .filter(|w| (w[0] > 0.0 && w[1] < 0.0) || (w[0] < 0.0 && w[1] > 0.0))
            .count()
    }

    /// The same profile multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            psi: self.psi.iter().map(|p| p * factor).collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GpDiagnostics {
    /// Relaxation steps over all particle-number evaluations and regrids.
    pub iterations: usize,
    pub rejected_steps: usize,
    /// Ground states computed while matching the amplitude.
    pub evaluations: usize,
    /// Discrete energies of the accepted iterates of the final relaxation.
    pub energy_history: Vec<f64>,
    pub regrids: usize,
}

/// Converged ground state of one [`GpProblem`].
#[derive(Debug, Clone, PartialEq)]
pub struct GpSolution {
    pub profile: RadialProfile,
    /// Dimensionless chemical potential `μ₀`; the eigenvalue is `μ₀ L²`.
    pub mu0: f64,
    pub l: f64,
    pub n_c: f64,
    /// Coherence length, `L_c² = ∫ψ² / n_c`.
    pub l_c: f64,
    pub healing_length: f64,
    /// Normalized residual of the discrete equation.
    pub residual_norm: f64,
    pub converged: bool,
    pub diagnostics: GpDiagnostics,
}

impl GpSolution {
    /// `N_c = n_c L_c² = ∫ψ²`.
    pub fn particle_number(&self) -> f64 {
        self.profile.norm2()
    }

    /// `|∫ψ⁴/∫ψ² - n_c L²| / (n_c L²)`
    pub fn constraint_residual(&self) -> f64 {
        let target = self.n_c * self.l * self.l;
        (self.profile.norm4() / self.profile.norm2() - target).abs() / target
    }
}

fn gaussian(grid: &RadialGrid, width: f64) -> Vec<f64> {
    let mut psi: Vec<f64> = grid.nodes().iter().map(|r| (-(r / width).powi(2)).exp()).collect();
    *psi.last_mut().unwrap() = 0.0;
    psi
}

fn active(psi: &[f64]) -> Vec<f64> {
    psi[..psi.len() - 1].to_vec()
}

fn full(psi: Vec<f64>) -> Vec<f64> {
    let mut out = psi;
    out.push(0.0);
    out
}

/// Ground state of `problem`.
///
/// The cutoff is first sized from the linear (`u = 0`) bound state and then
/// re-sized from the decay constant `κ = sqrt(-μ₀L²)` of the interacting
/// solution until it stops changing.
pub fn solve_gp(problem: &GpProblem) -> Result<GpSolution> {
    problem.validate()?;
    let opts = problem.options;
    let tol = opts.tolerances();
    let mut ws = Workspace::new();
    let mut regrids = 0;

    let width = if problem.u > 0.0 {
        (problem.healing_length() / problem.l).min(1.0)
    } else {
        1.0
    };

    // Linear pilot for the cutoff.
    let mut r_max = opts.r_max_floor;
    let mut grid = opts.grid(r_max)?;
    let mut psi = active(&gaussian(&grid, width));
    loop {
        let op = Operator::new(&grid, problem.l);
        let relaxed = relax(&op, 0.0, 1.0, &mut psi, &mut ws, &tol)?;
        let next = if relaxed.lambda < 0.0 {
            opts.cutoff_for((-relaxed.lambda).sqrt())
        } else {
            // a bound state may be hidden by box confinement: widen the box
            (2.0 * r_max).min(opts.r_max_cap)
        };
        if next <= r_max {
            if relaxed.lambda >= 0.0 {
                return Err(Error::NotLocalized { mu0: relaxed.lambda / problem.l.powi(2) });
            }
            break;
        }
        let previous = grid;
        grid = opts.grid(next)?;
        psi = regrid(&previous, &full(psi), &grid);
        r_max = next;
        regrids += 1;
    }

    let target = problem.n_c * problem.l * problem.l;
    let mut amplitude;
    loop {
        let op = Operator::new(&grid, problem.l);
        amplitude = match_amplitude(&op, problem.u, target, &mut psi, &mut ws, &tol)
            .map_err(|e| rescale_not_localized(e, problem.l))?;
        let lambda = amplitude.relaxed.lambda;
        if lambda >= 0.0 {
            return Err(Error::NotLocalized { mu0: lambda / problem.l.powi(2) });
        }
        let next = opts.cutoff_for((-lambda).sqrt());
        if next <= r_max || regrids > 8 {
            break;
        }
        let previous = grid;
        grid = opts.grid(next)?;
        psi = regrid(&previous, &full(psi), &grid);
        r_max = next;
        regrids += 1;
    }

    let relaxed = amplitude.relaxed;
    let profile = RadialProfile::new(grid, full(psi))?;
    let particles = profile.norm2();
    Ok(GpSolution {
        mu0: relaxed.lambda / problem.l.powi(2),
        l: problem.l,
        n_c: problem.n_c,
        l_c: (particles / problem.n_c).sqrt(),
        healing_length: problem.healing_length(),
        residual_norm: relaxed.residual,
        converged: true,
        diagnostics: GpDiagnostics {
            iterations: ws.iterations,
            rejected_steps: ws.rejected_steps,
            evaluations: ws.evaluations,
            energy_history: ws.energy_history.clone(),
            regrids,
        },
        profile,
    })
}

/// The solver works with `μ₀ L²`; report `μ₀`.
fn rescale_not_localized(e: Error, l: f64) -> Error {
    match e {
        Error::NotLocalized { mu0 } => Error::NotLocalized { mu0: mu0 / (l * l) },
        other => other,
    }
}

fn regrid(from: &RadialGrid, psi: &[f64], to: &RadialGrid) -> Vec<f64> {
    let mut out: Vec<f64> = to
        .nodes()
        .iter()
        .map(|&r| from.interpolate(psi, r).max(0.0))
        .collect();
    out.pop();
    // beyond the old cutoff the interpolant is zero; seed a small tail so the
    // relaxation starts from a strictly positive state
    let floor = 1e-12 * out.iter().copied().fold(0.0, f64::max);
    out.iter_mut().for_each(|p| *p = p.max(floor));
    out
}

/// `μ₀` of `profile` from the Rayleigh quotient
/// `[∫|∇ψ|² - L ∫_{r<1} ψ² + u ∫ψ⁴] / (L² ∫ψ²)`.
pub fn chemical_potential(profile: &RadialProfile, u: f64, l: f64) -> Result<f64> {
    let op = Operator::new(&profile.grid, l);
    let psi = active(&profile.psi);
    if !(op.norm2(&psi) > 0.0) {
        return Err(Error::domain("chemical potential of a zero profile"));
    }
    Ok(op.rayleigh(&psi, u) / (l * l))
}

/// Normalized residual of `-∇²ψ - Lθψ + uψ³ - μ₀L²ψ` on the solution's grid.
pub fn gp_residual(solution: &GpSolution, u: f64) -> f64 {
    let op = Operator::new(&solution.profile.grid, solution.l);
    let psi = active(&solution.profile.psi);
    op.residual(&psi, u, solution.mu0 * solution.l * solution.l)
}

/// Discrete energy `∫|∇ψ|² - L ∫_{r<1} ψ² + (u/2) ∫ψ⁴` of a profile.
pub fn gp_energy(profile: &RadialProfile, u: f64, l: f64) -> f64 {
    let op = Operator::new(&profile.grid, l);
    op.energy(&active(&profile.psi), u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_problems() {
        assert!(GpProblem::new(-1.0, 0.1, 1.0).is_err());
        assert!(GpProblem::new(1.0, 0.0, 1.0).is_err());
        assert!(GpProblem::new(1.0, 0.1, 0.0).is_err());
        assert!(GpProblem::new(1.0, 0.1, f64::NAN).is_err());
        let bad = GpOptions { stretch_rate: -1.0, ..GpOptions::default() };
        assert!(GpProblem::with_options(1.0, 0.1, 1.0, bad).is_err());
    }

    #[test]
    fn cutoff_ladder() {
        let o = GpOptions::default();
        assert_eq!(o.cutoff_for(10.0), 4.0);
        let c = o.cutoff_for(0.5);
        assert!((17.0..17.0 * 1.19).contains(&c));
        assert_eq!(o.cutoff_for(0.0), o.r_max_cap);
    }

    #[test]
    fn zero_profile_has_no_chemical_potential() {
        let grid = RadialGrid::uniform(4.0, 41).unwrap();
        let p = RadialProfile::new(grid, vec![0.0; 41]).unwrap();
        assert!(matches!(chemical_potential(&p, 1.0, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn interacting_solution_is_consistent() {
        let p = GpProblem::new(1.0, 0.06, 3.0).unwrap();
        let s = solve_gp(&p).unwrap();
        assert!(s.mu0 < 0.0);
        assert!(s.residual_norm <= 1e-8, "{}", s.residual_norm);
        assert!(s.constraint_residual() <= 1e-8);
        assert_eq!(s.profile.sign_changes(), 0);
        assert!(s.profile.psi.iter().all(|&p| p >= 0.0));
        let last = *s.profile.psi.last().unwrap();
        assert!(last <= 1e-6 * s.profile.max());
        let mu = chemical_potential(&s.profile, 1.0, 3.0).unwrap();
        assert!((mu - s.mu0).abs() <= 1e-9 * s.mu0.abs());
        assert!(gp_residual(&s, 1.0) <= 1e-8);
        assert!(((s.l_c * s.l_c * s.n_c) - s.particle_number()).abs() < 1e-12 * s.particle_number());
    }

    #[test]
    fn large_density_is_not_localized() {
        let p = GpProblem::new(1.0, 0.5, 3.0).unwrap();
        assert!(matches!(solve_gp(&p), Err(Error::NotLocalized { .. })));
    }
}
