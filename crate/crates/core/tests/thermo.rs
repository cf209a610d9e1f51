use boseglass::localization::FitParams;
use boseglass::materials::ExcitonMaterial;
use boseglass::thermo::{
    condensation_temperature, solve_lambda_cr, solve_thermo_state, thermal_wavelength, thermo_residuals,
    thermo_sweep, write_thermo_csv, ThermoInput,
};
use proptest::prelude::*;

const L0: f64 = 1e-8;
const U: f64 = 47.0;
const DENSITIES: [f64; 3] = [0.012, 0.008, 0.004];

fn fit() -> FitParams {
    FitParams { alpha: 5.4, beta: -0.1317, n_g: 0.074, rms_residual: 0.0 }
}

fn mass() -> f64 {
    ExcitonMaterial::gaas().mass_kg()
}

fn input(n: f64, t_k: f64) -> ThermoInput {
    ThermoInput { n, t_k, u: U, fit: fit(), mass_kg: mass(), l0_m: L0 }
}

fn t_grid() -> Vec<f64> {
    (0..40).map(|i| 0.2 * 20f64.powf(i as f64 / 39.0)).collect()
}

#[test]
fn thermal_wavelength_scaling() {
    let m = mass();
    for t in [0.01, 0.3, 1.0, 7.5, 300.0] {
        let a = thermal_wavelength(t, m).unwrap();
        assert!((thermal_wavelength(4.0 * t, m).unwrap() / a - 0.5).abs() < 1e-15);
        let b = thermal_wavelength(t, 2.0 * m).unwrap();
        assert!((b * 2f64.sqrt() / a - 1.0).abs() < 1e-15);
    }
    assert!(thermal_wavelength(0.0, m).is_err());
    assert!(thermal_wavelength(1.0, -m).is_err());
}

#[test]
fn gaas_wavelength_from_independent_constants() {
    // h from the exact SI definition, the electron mass from its rest energy
    let h = 6.626_070_15e-34;
    let c = 299_792_458.0;
    let m_e = 0.510_998_950_00e6 * 1.602_176_634e-19 / (c * c);
    let k_b = 1.380_649e-23;
    let m = 0.4435 * m_e;
    let expected = h / (2.0 * std::f64::consts::PI * m * k_b * 1.0).sqrt();
    let got = thermal_wavelength(1.0, 0.4435 * boseglass::materials::constants::M0).unwrap();
    assert!((got / expected - 1.0).abs() < 1e-9, "{got} vs {expected}");
    // about 112 nm at 1 K
    assert!((got - 112e-9).abs() < 1e-9, "{got}");
}

#[test]
fn critical_wavelength_limits_and_oracle() {
    for l_c in [0.3, 1.0, 50.0, 1e4] {
        let y = solve_lambda_cr(0.0, l_c).unwrap().powi(2);
        assert!((y / (2.0 * l_c * l_c) - 1.0).abs() < 1e-14);
    }
    // bisection on the monotone form f(y) = n y + ln y - ln(2 L_c²)
    let (n, l_c): (f64, f64) = (0.012, 50.0);
    let f = |y: f64| n * y + y.ln() - (2.0 * l_c * l_c).ln();
    let (mut lo, mut hi) = (1e-300, 2.0 * l_c * l_c);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid
        } else {
            lo = mid
        }
    }
    let y = solve_lambda_cr(n, l_c).unwrap().powi(2);
    assert!((y / lo - 1.0).abs() < 1e-12, "{y} vs {lo}");
    assert!(solve_lambda_cr(-1.0, 1.0).is_err());
    assert!(solve_lambda_cr(1.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn critical_wavelength_never_exceeds_the_free_value(n in 0.0f64..10.0, l_c in 0.01f64..1e6) {
        let y = solve_lambda_cr(n, l_c).unwrap().powi(2);
        prop_assert!(y > 0.0 && y <= 2.0 * l_c * l_c * (1.0 + 1e-14));
        let r = n * y + y.ln() - (2.0 * l_c * l_c).ln();
        prop_assert!(r.abs() <= 1e-12 * (n * y).max(1.0));
    }
}

#[test]
fn above_onset_temperature_is_uncondensed() {
    for n in DENSITIES {
        let tc = condensation_temperature(n, &fit(), mass(), L0).unwrap();
        let s = solve_thermo_state(&input(n, 1.01 * tc)).unwrap();
        assert!(!s.condensed && s.n_c == 0.0 && s.roots == 0);
        let s = solve_thermo_state(&input(n, 0.99 * tc)).unwrap();
        assert!(s.condensed && s.n_c > 0.0);
    }
}

#[test]
fn dilute_gas_condenses_completely_at_low_temperature() {
    // n below the cap n_g/u: the fraction tends to one
    let n = 0.001;
    assert!(n < fit().n_g / U);
    let mut last = 0.0;
    for t in [0.5, 0.1, 0.02, 0.004] {
        let f = solve_thermo_state(&input(n, t)).unwrap().condensate_fraction;
        assert!(f > last, "{t}: {f}");
        last = f;
    }
    assert!(last > 0.98, "{last}");
}

#[test]
fn dense_gas_saturates_at_the_cap_and_lakes_grow() {
    let n = 0.012;
    let cap = fit().n_g / U;
    let mut last_lc = 0.0;
    for t in [1.0, 0.5, 0.2, 0.1, 0.05] {
        let s = solve_thermo_state(&input(n, t)).unwrap();
        assert!(s.l_c > last_lc);
        last_lc = s.l_c;
        assert!(s.n_c < cap);
    }
    let s = solve_thermo_state(&input(n, 0.05)).unwrap();
    assert!((cap - s.n_c) / cap < 1e-12);
    assert!(s.l_c > 1e6);
}

#[test]
fn onset_temperature_matches_flag_bisection() {
    for n in DENSITIES {
        let tc = condensation_temperature(n, &fit(), mass(), L0).unwrap();
        let condensed = |t: f64| solve_thermo_state(&input(n, t)).unwrap().condensed;
        let (mut lo, mut hi) = (0.1, 10.0);
        assert!(condensed(lo) && !condensed(hi));
        while hi - lo > 1e-9 * lo {
            let mid = 0.5 * (lo + hi);
            if condensed(mid) {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((lo / tc - 1.0).abs() < 1e-6, "n={n}: {lo} vs {tc}");
    }
}

#[test]
fn onset_temperature_rises_with_density_and_ignores_u() {
    let ns: Vec<f64> = (1..=40).map(|i| 0.001 * i as f64).collect();
    let tcs: Vec<f64> = ns.iter().map(|&n| condensation_temperature(n, &fit(), mass(), L0).unwrap()).collect();
    assert!(tcs.windows(2).all(|w| w[1] > w[0]));
    // the three GaAs densities condense at roughly 1.5-2.2 K
    let tc = condensation_temperature(0.012, &fit(), mass(), L0).unwrap();
    assert!((tc - 2.166).abs() < 0.01, "{tc}");
    for u in [1.0, 10.0, 47.0, 100.0] {
        let onset = |t: f64| solve_thermo_state(&ThermoInput { u, ..input(0.012, t) }).unwrap().condensed;
        assert!(onset(tc * (1.0 - 1e-6)) && !onset(tc * (1.0 + 1e-6)), "u={u}");
    }
}

#[test]
fn grid_states_satisfy_all_equations() {
    let cap = fit().n_g / U;
    for n in DENSITIES {
        let samples = thermo_sweep(n, U, &fit(), mass(), L0, &t_grid(), Some(2)).unwrap();
        assert_eq!(samples.len(), 40);
        let states: Vec<_> = samples.iter().map(|s| s.result.clone().unwrap()).collect();
        for s in &states {
            if s.condensed {
                let r = thermo_residuals(&input(n, s.t_k), s);
                assert!(r.iter().all(|&x| x <= 1e-9), "n={n} T={}: {r:?}", s.t_k);
                assert!(s.n_c < cap && s.n_c <= n);
                assert_eq!(s.roots, 1);
            }
            assert!((s.l_c_m / s.l_c - L0).abs() <= 1e-15 * L0);
        }
        // the flag is one step: condensed, then not
        let flips = states.windows(2).filter(|w| w[0].condensed != w[1].condensed).count();
        assert_eq!(flips, 1, "n={n}");
        assert!(states[0].condensed && !states[39].condensed);
        for w in states.windows(2) {
            assert!(w[1].condensate_fraction <= w[0].condensate_fraction);
            if w[1].condensed {
                assert!(w[1].l_c < w[0].l_c, "L_c must grow as T falls");
            }
        }
    }
}

#[test]
fn fraction_is_monotone_on_a_fine_grid() {
    let fine: Vec<f64> = (0..400).map(|i| 0.2 + 2.0 * i as f64 / 399.0).collect();
    let samples = thermo_sweep(0.004, U, &fit(), mass(), L0, &fine, None).unwrap();
    let f: Vec<f64> = samples.iter().map(|s| s.result.as_ref().unwrap().condensate_fraction).collect();
    assert!(f.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn empty_and_invalid_grids() {
    assert!(thermo_sweep(0.01, U, &fit(), mass(), L0, &[], None).unwrap().is_empty());
    assert!(thermo_sweep(0.01, U, &fit(), mass(), L0, &[1.0, 0.5], None).is_err());
    assert!(thermo_sweep(0.01, U, &fit(), mass(), L0, &[0.0, 1.0], None).is_err());
    assert!(solve_thermo_state(&input(-0.01, 1.0)).is_err());
    let mut bad = fit();
    bad.alpha = -1.0;
    assert!(solve_thermo_state(&ThermoInput { fit: bad, ..input(0.01, 1.0) }).is_err());
}

#[test]
fn csv_layout() {
    let samples = thermo_sweep(0.004, U, &fit(), mass(), L0, &[1.0, 3.0], Some(1)).unwrap();
    let mut out = Vec::new();
    write_thermo_csv(&samples, &[("extra", vec![Some(2.5), None])], &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "T_K,lambda_m,lambda_cr_m,n_c_dimless,fraction,L_c_dimless,L_c_um,condensed,extra"
    );
    assert!(lines[1].starts_with("1e0,") && lines[1].ends_with(",true,2.5e0"));
    assert!(lines[2].starts_with("3e0,") && lines[2].ends_with(",false,"));
    assert_eq!(lines.len(), 3);
}
