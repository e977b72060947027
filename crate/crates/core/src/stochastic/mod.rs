//! Brownian paths, stochastic integrals, stochastic parallel transport and
//! the Feynman-Kac estimator.

pub mod estimator;
pub mod integral;
pub mod oracle;
pub mod path;
pub mod rng;
pub mod transport;

pub use estimator::{fk_estimate, fk_estimate_in_chart, FkConfig, FkEstimate, MAX_REJECTED_FRACTION};
pub use integral::{ito_integral, stratonovich_integral};
pub use oracle::gaussian_smoothing;
pub use path::{sample_brownian_path, sample_brownian_path_into, BrownianPath, PathConfig};
pub use rng::path_rng;
pub use transport::{
    stochastic_transport, stochastic_transport_with, transport_inverse_apply, ChartSwitch, SwitchPolicy,
    TransportState,
};
