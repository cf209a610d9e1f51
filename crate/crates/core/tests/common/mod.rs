//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use boseglass::numerics::{bessel_j0, bessel_j1, modified_bessel_k0_k1};

/// First zero of `J0`.
pub const J0_ZERO: f64 = 2.404_825_557_695_773;

/// Matching function of the linear well at interior wavenumber `q`:
/// `q J1(q)/J0(q) - κ K1(κ)/K0(κ)` with `κ² = L - q²`.
pub fn matching(l: f64, q: f64) -> f64 {
    let kappa = (l - q * q).sqrt();
    let (k0, k1) = modified_bessel_k0_k1(kappa).unwrap();
    q * bessel_j1(q).unwrap() / bessel_j0(q).unwrap() - kappa * k1 / k0
}

/// Ground-state `μ₀` of the linear well of radius `l` (units of `L0`), by a
/// dense scan of the matching function for its first sign change followed
/// by plain bisection.
pub fn linear_well_mu0(l: f64) -> f64 {
    let top = l.sqrt().min(J0_ZERO) * (1.0 - 1e-13);
    let bottom = 1e-9;
    let steps = 20_000;
    let at = |i: usize| bottom + (top - bottom) * i as f64 / steps as f64;
    let mut a = at(0);
    let mut fa = matching(l, a);
    for i in 1..=steps {
        let b = at(i);
        let fb = matching(l, b);
        if fa * fb <= 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if matching(l, lo) * matching(l, mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let q = 0.5 * (lo + hi);
            return (q * q - l) / (l * l);
        }
        a = b;
        fa = fb;
    }
    panic!("no bound state found for L = {l}");
}

/// Double-double number `hi + lo`, about 32 significant digits.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let v = s - a;
    Dd(s, (a - (s - v)) + (b - v))
}

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let t = two_sum(s.1, self.1 + o.1);
        let r = two_sum(s.0, t.0);
        Dd(r.0, r.1 + t.1)
    }
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        two_sum(p, e + self.0 * o.1 + self.1 * o.0)
    }
    fn div_f64(self, d: f64) -> Dd {
        let q = self.0 / d;
        let r = Dd(self.0, self.1).add(Dd(-q * d, -q.mul_add(d, -q * d)));
        two_sum(q, r.0 / d)
    }
}

/// `J1` from its ascending series summed in double-double arithmetic until
/// the terms drop below `1e-40` of the largest one; on `[0, 30]` the
/// cancellation between terms of size up to `1e11` is harmless there.
pub fn j1_series_oracle(x: f64) -> f64 {
    let half = Dd(0.5 * x, 0.0);
    let q = half.mul(half);
    let mut term = half;
    let mut sum = half;
    let mut largest = x.abs();
    for k in 1..200 {
        term = q.mul(term).div_f64(-((k * (k + 1)) as f64));
        sum = sum.add(term);
        largest = largest.max(term.0.abs());
        if term.0.abs() < 1e-40 * largest {
            break;
        }
    }
    sum.0 + sum.1
}
