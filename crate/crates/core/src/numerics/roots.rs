use crate::error::{Error, Result};

const MAX_ROOT_ITERATIONS: usize = 500;

/// Interval `[lo, hi]` with function values of opposite sign (or a zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `h` at both ends. Endpoints may be given in either order.
    pub fn new<F: FnMut(f64) -> f64>(a: f64, b: f64, mut h: F) -> Result<Self> {
        let (f_a, f_b) = (h(a), h(b));
        Self::from_values(a, b, f_a, f_b)
    }

    pub fn from_values(a: f64, b: f64, f_a: f64, f_b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !f_a.is_finite() || !f_b.is_finite() {
            return Err(Error::precondition("bracket endpoints and values must be finite"));
        }
        if f_a * f_b > 0.0 {
            return Err(Error::precondition(format!(
                "[{a}, {b}] does not bracket a root (f = {f_a}, {f_b})"
            )));
        }
        let (lo, hi, f_lo, f_hi) = if a <= b { (a, b, f_a, f_b) } else { (b, a, f_b, f_a) };
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Root of `h` inside `bracket`, to bracket width `tol` or an exact zero.
///
/// Secant steps are taken while they land inside the bracket and keep
/// shrinking it by at least half every second step; otherwise the step
/// falls back to bisection.
pub fn find_root_bracketed<F: FnMut(f64) -> f64>(mut h: F, bracket: Bracket, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::precondition("root tolerance must be positive"));
    }
    let Bracket { mut lo, mut hi, mut f_lo, mut f_hi } =
        Bracket::from_values(bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    let mut width_before = hi - lo;
    for iteration in 0..MAX_ROOT_ITERATIONS {
        let width = hi - lo;
        if width <= tol {
            return Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi });
        }
        let mid = lo + 0.5 * width;
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let use_secant = iteration % 2 == 1 || width <= 0.5 * width_before;
        let x = if use_secant && secant > lo && secant < hi && secant.is_finite() {
            // keep the trial away from the endpoints so stalled sides still shrink
            secant.clamp(lo + 0.25 * tol, hi - 0.25 * tol)
        } else {
            mid
        };
        if iteration % 2 == 0 {
            width_before = width;
        }
        let fx = h(x);
        if !fx.is_finite() {
            return Err(Error::domain(format!("root function is not finite at {x}")));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == (f_lo < 0.0) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
    }
    Err(Error::Convergence {
        iterations: MAX_ROOT_ITERATIONS,
        residual: f_lo.abs().min(f_hi.abs()),
        best: if f_lo.abs() <= f_hi.abs() { lo } else { hi },
    })
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`,
/// stopping when the interval is shorter than `tol` (or stops shrinking in
/// floating point). Returns `(x, f(x))`.
pub fn golden_section_minimize<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let b = Bracket::new(0.0, 4.0, |x| x - 2.0).unwrap();
        let x = find_root_bracketed(|x| x - 2.0, b, 1e-14).unwrap();
        assert!((x - 2.0).abs() < 1e-14);
    }

    #[test]
    fn monotone_log_sum() {
        let h = |x: f64| x.ln() + x - 2f64.ln();
        let b = Bracket::new(1e-300, 2.0, h).unwrap();
        let x = find_root_bracketed(h, b, 1e-14).unwrap();
        assert!(h(x).abs() < 1e-13);
        assert!(x > 0.0 && x <= 2.0);
    }

    #[test]
    fn invalid_bracket_is_rejected() {
        assert!(matches!(
            Bracket::new(3.0, 4.0, |x| x - 2.0),
            Err(Error::Precondition(_))
        ));
        let bad = Bracket { lo: 3.0, hi: 4.0, f_lo: 1.0, f_hi: 2.0 };
        assert!(find_root_bracketed(|x| x - 2.0, bad, 1e-9).is_err());
    }

    #[test]
    fn endpoint_order_does_not_matter() {
        let h = |x: f64| (x - 0.3).powi(3) + 0.01 * x;
        let a = find_root_bracketed(h, Bracket::new(-1.0, 2.0, h).unwrap(), 1e-13).unwrap();
        let b = find_root_bracketed(h, Bracket::new(2.0, -1.0, h).unwrap(), 1e-13).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = golden_section_minimize(|x| (x - 1.3).powi(2) + 2.0, -4.0, 5.0, 1e-9);
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }
}
