//! (u, n_c, psi) -> (u/a, a n_c, sqrt(a) psi) leaves mu0 and L_c unchanged.

use boseglass::gp::{solve_gp, GpProblem};

fn main() -> boseglass::Result<()> {
    let base = solve_gp(&GpProblem::new(1.0, 0.05, 3.0)?)?;
    println!("u = 1       mu0 = {:.12}  L_c = {:.10}", base.mu0, base.l_c);
    for a in [0.1, 1.0 / 47.0, 2.0, 10.0] {
        let s = solve_gp(&GpProblem::new(1.0 / a, a * 0.05, 3.0)?)?;
        println!(
            "u = {:<8.4} mu0 = {:.12}  L_c = {:.10}  dmu/mu = {:.1e}",
            1.0 / a,
            s.mu0,
            s.l_c,
            (s.mu0 / base.mu0 - 1.0).abs()
        );
    }
    Ok(())
}
