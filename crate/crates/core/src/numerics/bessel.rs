//! Bessel functions of integer order 0 and 1 for real arguments.
//!
//! `J0`, `J1`: power series below `SERIES_LIMIT`, Miller backward recurrence
//! on the intermediate band, Hankel asymptotic expansion from
//! `HANKEL_LIMIT` on. `K0`, `K1`: ascending series for `x <= 2`, Temme's
//! continued fraction above.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 8.0;
const HANKEL_LIMIT: f64 = 25.0;

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("Bessel argument must be finite, got {x}")))
    }
}

/// Bessel function of the first kind, order 0.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(j_pair(x.abs()).0)
}

/// Bessel function of the first kind, order 1. Odd in `x`.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_finite(x)?;
    let j1 = j_pair(x.abs()).1;
    Ok(if x < 0.0 { -j1 } else { j1 })
}

/// `(J0(x), J1(x))` for `x >= 0`.
fn j_pair(x: f64) -> (f64, f64) {
    if x < SERIES_LIMIT {
        (j_series(0, x), j_series(1, x))
    } else if x < HANKEL_LIMIT {
        j_miller(x)
    } else {
        (j_hankel(0, x), j_hankel(1, x))
    }
}

/// Ascending series `sum (-1)^k (x/2)^(2k+nu) / (k! (k+nu)!)`.
pub(crate) fn j_series(nu: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = if nu == 0 { 1.0 } else { half };
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + nu as usize) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

/// Backward recurrence from a high order, normalized by
/// `J0 + 2 (J2 + J4 + ...) = 1`.
fn j_miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x + 30.0 + (40.0 * x).sqrt()) as usize / 2);
    let mut above = 0.0_f64;
    let mut current = 1e-30_f64;
    let mut norm = 0.0;
    let (mut j0, mut j1) = (0.0, 0.0);
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        // `current` now holds the order k-1 value.
        let order = k - 1;
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * current;
        }
        if order == 1 {
            j1 = current;
        }
        if order == 0 {
            j0 = current;
        }
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += j0;
    (j0 / norm, j1 / norm)
}

/// Hankel expansion `sqrt(2/(pi x)) (P cos w - Q sin w)`, `w = x - nu pi/2 - pi/4`.
fn j_hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if term.abs() > last {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        last = term.abs();
        if last < 1e-18 {
            break;
        }
        let odd = (2 * k + 1) as f64;
        term *= (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
    }
    let w = x - (nu as f64) * 0.5 * PI - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin())
}

/// Modified Bessel functions of the second kind, `(K0(x), K1(x))`, `x > 0`.
pub fn modified_bessel_k0_k1(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "modified Bessel K needs a positive finite argument, got {x}"
        )));
    }
    Ok(if x <= 2.0 { k_series(x) } else { k_continued_fraction(x) })
}

fn k_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} H_k q^k / (k!)^2
    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
    let mut i0 = 1.0;
    let mut i1 = 0.5 * x;
    let mut k0_tail = 0.0;
    let mut k1_tail = 1.0 - 2.0 * EULER_GAMMA; // psi(1) + psi(2)
    let mut t0 = 1.0; // q^k / (k!)^2
    let mut t1 = 1.0; // q^k / (k! (k+1)!)
    let mut harmonic = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        i0 += t0;
        i1 += 0.5 * x * t1;
        k0_tail += harmonic * t0;
        k1_tail += (2.0 * (harmonic - EULER_GAMMA) + 1.0 / (kf + 1.0)) * t1;
        if t0 < 1e-18 * i0 {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_tail;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_tail;
    (k0, k1)
}

/// Temme's continued fraction (Steed's algorithm) for order zero, valid for `x >= 2`.
fn k_continued_fraction(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        a -= (2 * (i - 1)) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j1_at_origin_and_small_argument_limit() {
        assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
        for x in [1e-3, 1e-6, 1e-9] {
            let ratio = 2.0 * bessel_j1(x).unwrap() / x;
            assert!((ratio - 1.0).abs() < x * x);
        }
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
    }

    #[test]
    fn non_finite_arguments_are_domain_errors() {
        assert!(matches!(bessel_j1(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_j1(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(modified_bessel_k0_k1(0.0), Err(Error::Domain(_))));
        assert!(matches!(modified_bessel_k0_k1(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn branches_agree_at_switchovers() {
        for x in [SERIES_LIMIT, HANKEL_LIMIT] {
            let (a0, a1) = j_miller(x);
            let b = if x == SERIES_LIMIT {
                (j_series(0, x), j_series(1, x))
            } else {
                (j_hankel(0, x), j_hankel(1, x))
            };
            assert!((a0 - b.0).abs() < 1e-13, "J0 at {x}: {a0} vs {}", b.0);
            assert!((a1 - b.1).abs() < 1e-13, "J1 at {x}: {a1} vs {}", b.1);
        }
        let (s0, s1) = k_series(2.0);
        let (c0, c1) = k_continued_fraction(2.0);
        assert!(((s0 - c0) / c0).abs() < 1e-13);
        assert!(((s1 - c1) / c1).abs() < 1e-13);
    }

    #[test]
    fn j1_is_odd() {
        for x in [0.3, 7.0, 19.0, 140.0] {
            assert_eq!(bessel_j1(-x).unwrap(), -bessel_j1(x).unwrap());
        }
    }

    #[test]
    fn k_functions_decrease_and_approach_asymptote() {
        let xs = [0.01, 0.5, 1.0, 1.99, 2.0, 2.01, 5.0, 20.0, 100.0];
        for w in xs.windows(2) {
            let (a0, a1) = modified_bessel_k0_k1(w[0]).unwrap();
            let (b0, b1) = modified_bessel_k0_k1(w[1]).unwrap();
            assert!(b0 < a0 && b1 < a1);
        }
        let x = 500.0;
        let (k0, _) = modified_bessel_k0_k1(x).unwrap();
        let scaled = k0 * x.exp() * x.sqrt();
        assert!((scaled - (PI / 2.0).sqrt()).abs() < 1e-3);
        // with the first correction term -1/(8x)
        assert!((scaled - (PI / 2.0).sqrt() * (1.0 - 0.125 / x)).abs() < 1e-6);
    }
}
