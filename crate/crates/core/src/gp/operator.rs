//! Control-volume discretization of `-∇²ψ - L θ(1-r) ψ + u ψ³` on a radial
//! grid with `ψ'(0) = 0` and `ψ(r_max) = 0`.
//!
//! Unknowns live on nodes `0..m` (`m = n - 1`); the outer node is the
//! Dirichlet boundary. With cell areas `A` and face couplings
//! `c_i = 2π r_{i+1/2} / (r_{i+1} - r_i)` the discrete energy is
//!
//! ```text
//! E(ψ) = Σ c_i (ψ_{i+1} - ψ_i)² + Σ A_i v_i ψ_i² + (u/2) Σ A_i ψ_i⁴
//! ```
//!
//! and its stationarity condition at fixed `Σ A ψ²` is the generalized
//! tridiagonal eigenproblem `(K + A (v + u ψ²)) ψ = λ A ψ`.

use crate::numerics::RadialGrid;

#[derive(Debug, Clone)]
pub(crate) struct Operator {
    /// cell areas of the active nodes
    pub area: Vec<f64>,
    /// coupling across the face between node i and i+1 (the last one
    /// couples to the Dirichlet node)
    pub face: Vec<f64>,
    /// cell-averaged well potential, `-L` times the covered area fraction
    pub potential: Vec<f64>,
}

impl Operator {
    pub fn new(grid: &RadialGrid, well_radius: f64) -> Self {
        let r = grid.nodes();
        let n = r.len();
        let m = n - 1;
        let all_areas = grid.cell_areas();
        let area = all_areas[..m].to_vec();
        let face = (0..m)
            .map(|i| {
                let mid = 0.5 * (r[i] + r[i + 1]);
                2.0 * std::f64::consts::PI * mid / (r[i + 1] - r[i])
            })
            .collect();
        let potential = (0..m)
            .map(|i| {
                let inner = if i == 0 { 0.0 } else { 0.5 * (r[i - 1] + r[i]) };
                let outer = 0.5 * (r[i] + r[i + 1]);
                let covered = if outer <= 1.0 {
                    1.0
                } else if inner >= 1.0 {
                    0.0
                } else {
                    (1.0 - inner * inner) / (outer * outer - inner * inner)
                };
                -well_radius * covered
            })
            .collect();
        Self { area, face, potential }
    }

    pub fn len(&self) -> usize {
        self.area.len()
    }

    /// `Σ A ψ²`
    pub fn norm2(&self, psi: &[f64]) -> f64 {
        self.area.iter().zip(psi).map(|(a, p)| a * p * p).sum()
    }

    /// `Σ A ψ⁴`
    pub fn norm4(&self, psi: &[f64]) -> f64 {
        self.area.iter().zip(psi).map(|(a, p)| a * p.powi(4)).sum()
    }

    /// `ψᵀ K ψ`, the discrete `∫|∇ψ|²`.
    pub fn kinetic(&self, psi: &[f64]) -> f64 {
        let m = self.len();
        let mut sum = 0.0;
        for i in 0..m {
            let next = if i + 1 < m { psi[i + 1] } else { 0.0 };
            let d = next - psi[i];
            sum += self.face[i] * d * d;
        }
        sum
    }

    pub fn potential_energy(&self, psi: &[f64]) -> f64 {
        self.area
            .iter()
            .zip(&self.potential)
            .zip(psi)
            .map(|((a, v), p)| a * v * p * p)
            .sum()
    }

    pub fn energy(&self, psi: &[f64], u: f64) -> f64 {
        self.kinetic(psi) + self.potential_energy(psi) + 0.5 * u * self.norm4(psi)
    }

    /// Rayleigh quotient `ψᵀ H[ψ] ψ / Σ A ψ²`, i.e. `μ₀ L²`.
    pub fn rayleigh(&self, psi: &[f64], u: f64) -> f64 {
        (self.kinetic(psi) + self.potential_energy(psi) + u * self.norm4(psi)) / self.norm2(psi)
    }

    /// Nodal residual `(H[ψ] ψ)/A - λ ψ`, its `A`-weighted norm divided by
    /// the norm of `ψ`.
    pub fn residual(&self, psi: &[f64], u: f64, lambda: f64) -> f64 {
        let m = self.len();
        let mut sum = 0.0;
        for i in 0..m {
            let left = if i > 0 { self.face[i - 1] * (psi[i] - psi[i - 1]) } else { 0.0 };
            let next = if i + 1 < m { psi[i + 1] } else { 0.0 };
            let right = self.face[i] * (psi[i] - next);
            let applied = (left + right) / self.area[i]
                + (self.potential[i] + u * psi[i] * psi[i]) * psi[i];
            let rho = applied - lambda * psi[i];
            sum += self.area[i] * rho * rho;
        }
        (sum / self.norm2(psi)).sqrt()
    }

    /// Size of round-off in the applied operator relative to `ψ`; residual
    /// targets below this are unreachable.
    pub fn roundoff_floor(&self) -> f64 {
        let m = self.len();
        let stiffest = (0..m)
            .map(|i| {
                let left = if i > 0 { self.face[i - 1] } else { 0.0 };
                (left + self.face[i]) / self.area[i]
            })
            .fold(0.0, f64::max);
        4.0 * f64::EPSILON * stiffest
    }

    /// Solves `(H[ψ_ref] - σ A) y = rhs` by symmetric Gaussian elimination.
    /// Returns `false` without touching `y` if the matrix is not positive
    /// definite, i.e. `σ` is not below the lowest eigenvalue.
    pub fn shifted_solve(
        &self,
        psi_ref: &[f64],
        u: f64,
        sigma: f64,
        rhs: &[f64],
        pivots: &mut Vec<f64>,
        y: &mut Vec<f64>,
    ) -> bool {
        let m = self.len();
        pivots.clear();
        y.clear();
        let mut prev_pivot = 0.0;
        let mut prev_y = 0.0;
        for i in 0..m {
            let left = if i > 0 { self.face[i - 1] } else { 0.0 };
            let diag = left
                + self.face[i]
                + self.area[i] * (self.potential[i] + u * psi_ref[i] * psi_ref[i] - sigma);
            let (pivot, forward) = if i == 0 {
                (diag, rhs[0])
            } else {
                let l = -left / prev_pivot;
                (diag + l * left, rhs[i] - l * prev_y)
            };
            if !(pivot > 0.0) {
                return false;
            }
            pivots.push(pivot);
            y.push(forward);
            prev_pivot = pivot;
            prev_y = forward;
        }
        // back substitution: y_i = (f_i + c_i y_{i+1}) / d_i
        let mut next = 0.0;
        for i in (0..m).rev() {
            let coupling = if i + 1 < m { self.face[i] * next } else { 0.0 };
            y[i] = (y[i] + coupling) / pivots[i];
            next = y[i];
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(l: f64) -> (RadialGrid, Operator) {
        let g = RadialGrid::stretched(0.01, 2.0, 6.0, 1.03, 0.2).unwrap();
        let o = Operator::new(&g, l);
        (g, o)
    }

    #[test]
    fn well_area_is_exact() {
        let (_, o) = op(3.0);
        let covered: f64 = o.area.iter().zip(&o.potential).map(|(a, v)| -a * v / 3.0).sum();
        assert!((covered - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn shifted_solve_inverts_the_matrix() {
        let (_, o) = op(2.0);
        let m = o.len();
        let psi: Vec<f64> = (0..m).map(|i| 1.0 / (1.0 + i as f64 * 0.01)).collect();
        let rhs: Vec<f64> = (0..m).map(|i| (i as f64 * 0.37).sin()).collect();
        let (mut piv, mut y) = (Vec::new(), Vec::new());
        assert!(o.shifted_solve(&psi, 0.7, -5.0, &rhs, &mut piv, &mut y));
        // apply (H - σA) to y and compare
        for i in 0..m {
            let left = if i > 0 { o.face[i - 1] * (y[i] - y[i - 1]) } else { 0.0 };
            let next = if i + 1 < m { y[i + 1] } else { 0.0 };
            let right = o.face[i] * (y[i] - next);
            let applied = left + right + o.area[i] * (o.potential[i] + 0.7 * psi[i] * psi[i] + 5.0) * y[i];
            assert!((applied - rhs[i]).abs() < 1e-9 * (1.0 + rhs[i].abs()), "row {i}");
        }
    }

    #[test]
    fn detects_shift_above_spectrum() {
        let (_, o) = op(2.0);
        let m = o.len();
        let zeros = vec![0.0; m];
        let rhs = vec![1.0; m];
        let (mut piv, mut y) = (Vec::new(), Vec::new());
        // the lowest eigenvalue is above -L = -2
        assert!(o.shifted_solve(&zeros, 0.0, -2.0, &rhs, &mut piv, &mut y));
        assert!(!o.shifted_solve(&zeros, 0.0, 1.0, &rhs, &mut piv, &mut y));
    }
}
