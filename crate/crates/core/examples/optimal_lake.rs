//! mu0 against the well radius at u = 1, n_c = 0.06, and the radius that
//! minimizes it.

use boseglass::gp::GpOptions;
use boseglass::localization::{minimize_mu_over_l, scan_mu_over_l, ScanOptions};

fn main() -> boseglass::Result<()> {
    let gp = GpOptions::default();
    let radii: Vec<f64> = (0..16).map(|i| 1.5 + 0.4 * i as f64).collect();
    for row in scan_mu_over_l(1.0, 0.06, &radii, &gp, None)? {
        match row.result {
            Ok((mu, lc)) => println!("L = {:5.2}  mu0 = {mu:+.6}  L_c = {lc:.4}", row.l),
            Err(e) => println!("L = {:5.2}  {e}", row.l),
        }
    }

    let lake = minimize_mu_over_l(1.0, 0.06, &ScanOptions::default(), &gp)?;
    println!(
        "\nL* = {:.4}, mu0* = {:.6}, L_c = {:.4}; localized for L in [{:.3}, {:.3}]",
        lake.l_star, lake.mu0_star, lake.l_c, lake.localized_range.0, lake.localized_range.1
    );
    Ok(())
}
