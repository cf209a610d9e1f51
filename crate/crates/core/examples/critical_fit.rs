//! The localization length against density at u = 1 and the critical power
//! law L_c = alpha (n_g - u n_c)^beta fitted to it. Takes a few tens of
//! seconds on one core.

use boseglass::gp::GpOptions;
use boseglass::localization::{density_grid, fit_power_law, localization_curve, ScanOptions};

fn main() -> boseglass::Result<()> {
    let densities = density_grid(0.01, 0.072, 0.074, 14)?;
    let curve = localization_curve(1.0, &densities, &ScanOptions::default(), &GpOptions::default(), None)?;
    for p in &curve.points {
        match p.lake() {
            Some(l) => println!("n_c = {:.5}  L_c = {:8.4}  L* = {:.4}", p.n_c, l.l_c, l.l_star),
            None => println!("n_c = {:.5}  no localized state", p.n_c),
        }
    }
    let fit = fit_power_law(&curve)?;
    println!(
        "\nalpha = {:.3}, beta = {:.4}, n_g = {:.4} (rms {:.1e} in ln L_c)",
        fit.alpha, fit.beta, fit.n_g, fit.rms_residual
    );

    // the same lakes at u = 47
    let gaas = curve.rescaled(1.0 / 47.0)?;
    let (n, lake) = gaas.localized().last().expect("a localized point");
    println!("at u = {}: densest lake n_c = {n:.3e}, L_c = {:.4}", gaas.u, lake.l_c);
    Ok(())
}
