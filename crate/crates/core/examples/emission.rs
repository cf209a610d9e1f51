//! Superradiant emission of condensate lakes of growing size: cooperativity
//! in both normalizations, the rate enhancement, and the angular pattern of
//! a 1 um lake.

use boseglass::materials::ExcitonMaterial;
use boseglass::superradiance::{emission_pattern_table, phi_grid, EmissionModel, Variant};

fn main() -> boseglass::Result<()> {
    let model = EmissionModel::from_material(&ExcitonMaterial::gaas(), Variant::LimitConsistent);
    println!("  L_c [um]   k a_c      mu_c      mu_c(printed)  gamma/gamma0");
    for l_c in [0.01e-6, 0.03e-6, 0.1e-6, 0.3e-6, 1e-6, 3e-6, 10e-6] {
        let r = model.report(l_c)?;
        println!(
            "  {:8.3}  {:8.3}  {:.4e}  {:.4e}     {:.2}",
            l_c * 1e6,
            r.k_a_c,
            r.mu_c_limit_consistent,
            r.mu_c_as_printed,
            r.enhancement
        );
    }
    println!("saturation 24/(k a0)^2 = {:.2}", 24.0 / (model.k() * model.a0_m).powi(2));

    println!("\n  phi [deg]  I*Gamma (chi = 0)");
    for s in emission_pattern_table(&model, 1e-6, 0.0, &phi_grid(90))?.iter().take(12) {
        println!("  {:8.2}  {:.6}", s.phi.to_degrees(), s.intensity);
    }
    Ok(())
}
