//! Bessel functions, Jacobi polynomials, gamma, and quadrature.

pub mod bessel;
pub mod gamma;
pub mod jacobi;
pub mod quadrature;

pub use bessel::{bessel_j, scaled_bessel};
pub use gamma::{gamma, ln_gamma};
pub use jacobi::jacobi_polynomial;
pub use quadrature::{
    composite_gauss_legendre, gauss_hermite, gauss_legendre, standard_normal_rule, QuadratureRule,
};
