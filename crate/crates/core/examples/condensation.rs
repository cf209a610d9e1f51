//! Condensate fraction and lake size against temperature for GaAs excitons,
//! u = 47, L0 = 10 nm, at the densities 1.2, 0.8 and 0.4 x 10^10 cm^-2.

use boseglass::localization::FitParams;
use boseglass::materials::{density_to_dimensionless, per_cm2_to_per_m2, ExcitonMaterial};
use boseglass::thermo::{condensation_temperature, thermo_sweep};

fn main() -> boseglass::Result<()> {
    let fit = FitParams { alpha: 5.4, beta: -0.1317, n_g: 0.074, rms_residual: 0.0 };
    let (u, l0) = (47.0, 1e-8);
    let mass = ExcitonMaterial::gaas().mass_kg();
    let temps: Vec<f64> = (0..12).map(|i| 0.25 * (i + 1) as f64).collect();
    println!("density cap n_g/u = {:.3e}", fit.n_g / u);

    for n_cm2 in [1.2e10, 0.8e10, 0.4e10] {
        let n = density_to_dimensionless(per_cm2_to_per_m2(n_cm2), l0)?;
        let tc = condensation_temperature(n, &fit, mass, l0)?;
        println!("\nn = {n_cm2:.1e} cm^-2 (n = {n} in 1/L0^2), T_c = {tc:.3} K");
        println!("  T [K]  fraction  L_c [um]");
        for s in thermo_sweep(n, u, &fit, mass, l0, &temps, None)? {
            let st = s.result?;
            if st.condensed {
                println!("  {:5.2}  {:.5}   {:.4}", s.t_k, st.condensate_fraction, st.l_c_m * 1e6);
            } else {
                println!("  {:5.2}  -", s.t_k);
            }
        }
    }
    Ok(())
}
