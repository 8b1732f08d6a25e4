//! Grids, quadrature, dense complex linear algebra and special functions.

pub mod fft;
mod grid;
mod linalg;
mod special;

pub use grid::{quadrature_integrate, quadrature_integrate_real, tensor_weights, Grid1D, Rule};
pub use linalg::{householder, hs_norm_sq, ComplexMatrix};
pub use special::{
    bessel_j, bessel_j_orders, hermite_function, hermite_functions, BESSEL_MAX_ORDER,
    HERMITE_MAX_ORDER,
};
