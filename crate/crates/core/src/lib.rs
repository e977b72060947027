//! Numerical verification of the Feynman-Kac formula for a charged particle
//! in the field of a Dirac monopole.
//!
//! The numerical kernels are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod error;
pub mod geometry;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod stochastic;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point = geometry::Point3<f64>;
pub type Atlas = geometry::ChartAtlas<f64>;
pub type Fiber = geometry::FiberValue<f64>;
pub type Covector = geometry::Covector3<f64>;
pub type Rule = special::QuadratureRule<f64>;
pub type Harmonic = spectral::HarmonicTable<f64>;
pub type Profile = spectral::RadialProfile<f64>;
pub type Section = spectral::SectionInD<f64>;
pub type Path = stochastic::BrownianPath<f64>;
pub type PathParams = stochastic::PathConfig<f64>;
pub type Transport = stochastic::TransportState<f64>;
pub type Estimate = stochastic::FkEstimate<f64>;
