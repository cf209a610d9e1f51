//! Bessel functions, the first zero of J1, and adaptive quadrature.

use boseglass::numerics::{
    adaptive_quadrature, bessel_j0, bessel_j1, find_root_bracketed, modified_bessel_k0_k1, Bracket,
};

fn main() -> boseglass::Result<()> {
    for x in [0.5, 1.0, 5.0, 12.0, 30.0] {
        let (k0, k1) = modified_bessel_k0_k1(x)?;
        println!("x = {x:5.1}  J0 = {:+.15}  J1 = {:+.15}  K0 = {k0:.6e}  K1 = {k1:.6e}", bessel_j0(x)?, bessel_j1(x)?);
    }
    let j1 = |x: f64| bessel_j1(x).unwrap_or(f64::NAN);
    let zero = find_root_bracketed(j1, Bracket::new(3.0, 4.5, j1)?, 1e-14)?;
    println!("first zero of J1: {zero:.14}");
    let v = adaptive_quadrature(|p: f64| p.sin() * (1.0 + p.cos().powi(2)), 0.0, std::f64::consts::PI, 1e-14)?;
    println!("int_0^pi sin(1 + cos^2) = {v:.15} (8/3 = {:.15})", 8.0 / 3.0);
    Ok(())
}
