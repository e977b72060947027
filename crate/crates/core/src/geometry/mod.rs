//! Geometry of the monopole line bundle over R^3 minus the origin: the
//! two-chart atlas, transition functions, connection forms and
//! deterministic parallel transport.

mod atlas;
mod point;
mod transport;

pub use atlas::{azimuth, ChartAtlas, ChartId, FiberValue};
pub use point::{Covector3, Point3};
pub use transport::trapezoid_increment;
