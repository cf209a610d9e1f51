//! Numerical kernel shared by the solver and post-processing modules:
//! radial grids, quadrature, Bessel functions, bracketed root finding.

pub mod bessel;
pub mod grid;
pub mod quadrature;
pub mod roots;

pub use bessel::{bessel_j0, bessel_j1, modified_bessel_k0_k1};
pub use grid::RadialGrid;
pub use quadrature::{adaptive_quadrature, integrate_radial_2d, integrate_radial_2d_trapezoid};
pub use roots::{find_root_bracketed, golden_section_minimize, Bracket};
