pub mod convergence;
pub mod fk;
pub mod geometry;
pub mod spectral;
