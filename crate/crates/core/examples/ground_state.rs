//! One well: the constrained ground state at u = 1, n_c = 0.06, L = 3.

use boseglass::gp::{gp_residual, solve_gp, GpProblem};

fn main() -> boseglass::Result<()> {
    let s = solve_gp(&GpProblem::new(1.0, 0.06, 3.0)?)?;
    println!("mu0 = {:.10}", s.mu0);
    println!("L_c = {:.6}  (healing length {:.4})", s.l_c, s.healing_length);
    println!("residual {:.2e}, constraint {:.2e}", gp_residual(&s, 1.0), s.constraint_residual());
    println!(
        "{} iterations, {} grid nodes out to r = {:.1} L",
        s.diagnostics.iterations,
        s.profile.grid.node_count(),
        s.profile.grid.r_max()
    );

    println!("\n  r/L      psi");
    let grid = &s.profile.grid;
    for r in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0] {
        println!("{r:5.2}  {:.6}", grid.interpolate(&s.profile.psi, r));
    }
    Ok(())
}
