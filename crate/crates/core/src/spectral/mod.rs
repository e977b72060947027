//! Monopole harmonics, the Fourier-Bessel transform, and sections in the
//! domain of the Hamiltonian.

pub mod harmonic;
pub mod mode;
pub mod radial;
pub mod section;

pub use harmonic::{angular_momentum_check, AngularResiduals, HarmonicTable};
pub use mode::{mu_of, AngularMode};
pub use radial::{
    fourier_bessel_forward, fourier_bessel_inverse, radial_hamiltonian_fd, truncation_tail, ProfileKind,
    RadialGrid, RadialProfile, Spectrum, SPECTRAL_NODES,
};
pub use section::{SectionInD, SectionSpec, SectionTerm, TermSpec};
