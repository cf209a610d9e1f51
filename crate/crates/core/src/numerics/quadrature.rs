use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::grid::RadialGrid;

/// `∫ f(r) 2πr dr` over `[0, r_max]` from nodal samples.
///
/// Each pair of cells is integrated with the quadratic interpolant of `f`
/// against the exact `2πr` weight; this is the Richardson-extrapolated
/// product trapezoid rule on uniform grids. A trailing unpaired cell uses
/// the quadratic through the last three nodes.
pub fn integrate_radial_2d(grid: &RadialGrid, values: &[f64]) -> Result<f64> {
    Ok(radial_weights(grid, values.len())?
        .iter()
        .zip(values)
        .map(|(w, f)| w * f)
        .sum())
}

/// Product-trapezoid estimate (linear interpolant of `f`), second order.
/// The difference to [`integrate_radial_2d`] is a usable error estimate.
pub fn integrate_radial_2d_trapezoid(grid: &RadialGrid, values: &[f64]) -> Result<f64> {
    check_shape(grid, values.len())?;
    let r = grid.nodes();
    Ok(r.windows(2)
        .zip(values.windows(2))
        .map(|(x, f)| {
            let (a, b) = (x[0], x[1]);
            let h = b - a;
            // ∫_a^b [f_a (b - r)/h + f_b (r - a)/h] 2πr dr
            PI * h / 3.0 * (f[0] * (2.0 * a + b) + f[1] * (a + 2.0 * b))
        })
        .sum())
}

fn check_shape(grid: &RadialGrid, len: usize) -> Result<()> {
    if len != grid.node_count() {
        return Err(Error::Shape {
            expected: grid.node_count(),
            got: len,
        });
    }
    Ok(())
}

fn radial_weights(grid: &RadialGrid, len: usize) -> Result<Vec<f64>> {
    check_shape(grid, len)?;
    let r = grid.nodes();
    let n = r.len();
    let mut w = vec![0.0; n];
    let mut i = 0;
    while i + 2 < n {
        accumulate_quadratic(&mut w, r, i, r[i], r[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        // one cell left over: interpolate through nodes n-3..n-1
        accumulate_quadratic(&mut w, r, n - 3, r[n - 2], r[n - 1]);
    }
    Ok(w)
}

/// Adds to `w[j..j+3]` the weights of `∫_lo^hi p(r) 2πr dr`, `p` the
/// quadratic through nodes `j, j+1, j+2`. The integrand is a cubic, so
/// two-point Gauss–Legendre is exact.
fn accumulate_quadratic(w: &mut [f64], r: &[f64], j: usize, lo: f64, hi: f64) {
    let (x0, x1, x2) = (r[j], r[j + 1], r[j + 2]);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let offset = half / 3f64.sqrt();
    for x in [mid - offset, mid + offset] {
        let l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
        let l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
        let l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
        let g = half * 2.0 * PI * x;
        w[j] += g * l0;
        w[j + 1] += g * l1;
        w[j + 2] += g * l2;
    }
}

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SUBDIVISIONS: usize = 5000;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &wk)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let pair = g(c - h * x) + g(c + h * x);
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of `g` on `[a, b]`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `tol`. Running out of subdivisions returns
/// [`Error::Convergence`] carrying the best estimate.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::precondition(format!(
            "quadrature interval must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::precondition("quadrature tolerance must be positive"));
    }
    let first = gauss_kronrod(&g, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::from(vec![first]);
    let mut splits = 0;
    while error > tol {
        if splits >= MAX_SUBDIVISIONS {
            return Err(Error::Convergence {
                iterations: splits,
                residual: error,
                best: value,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&g, worst.a, mid);
        let right = gauss_kronrod(&g, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
        if splits % 64 == 0 {
            // resum to shed accumulated cancellation in the running totals
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(heap.iter().map(|p| p.value).sum())
}
