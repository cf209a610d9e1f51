//! Interaction strength of GaAs excitons and the dimensionless units.

use boseglass::materials::{
    density_to_dimensionless, healing_length, per_cm2_to_per_m2, xi_from_length_scale, ExcitonMaterial,
};
use boseglass::thermo::thermal_wavelength;

fn main() -> boseglass::Result<()> {
    let m = ExcitonMaterial::gaas();
    println!("M = {:.4} m0, m_r = {:.4} m0, u = {:.2}", m.total_mass(), m.reduced_mass(), m.u());
    println!("exchange integral I = {:.3e} J m^2", m.exchange_integral());

    let l0 = 1e-8;
    let xi = xi_from_length_scale(l0, m.mass_kg())?;
    println!("L0 = 10 nm needs disorder strength xi = {xi:.3e} J m ({:.3} meV at L0)", xi / l0 / 1.602e-22);
    for n_cm2 in [1.2e10, 0.8e10, 0.4e10] {
        let n = density_to_dimensionless(per_cm2_to_per_m2(n_cm2), l0)?;
        println!("n = {n_cm2:.1e} cm^-2 -> {n} / L0^2, healing length {:.1} L0", healing_length(m.u(), n)?);
    }
    for t in [0.5, 1.0, 2.0, 4.0] {
        println!("Lambda({t} K) = {:.1} nm", thermal_wavelength(t, m.mass_kg())? * 1e9);
    }
    Ok(())
}
