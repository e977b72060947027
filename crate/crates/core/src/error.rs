use thiserror::Error;

use crate::geometry::ChartId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the origin is not a point of the base manifold")]
    Origin,
    #[error("azimuth is undefined on the polar axis")]
    UndefinedAzimuth,
    #[error("point lies outside the chart overlap")]
    OutsideOverlap,
    #[error("point lies outside chart {0:?}")]
    OutOfChart(ChartId),
    #[error("invalid atlas: {0}")]
    InvalidAtlas(String),
    #[error("invalid angular mode (n={n}, ell={ell}, m={m})")]
    InvalidMode { n: i32, ell: i32, m: i32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("negative evolution time {0}")]
    NegativeTime(f64),
    #[error("origin-proximity resample budget exceeded ({0} resamples)")]
    ResampleBudgetExceeded(u64),
    #[error("increment at step {step} leaves chart {chart:?} before the switch threshold")]
    StepStraddle { step: usize, chart: ChartId },
    #[error("path hit the origin at step {0}")]
    OriginCollision(usize),
    #[error("forced chart switch at step {0} is not inside the chart overlap")]
    ForcedSwitchOutsideOverlap(usize),
    #[error("{rejected} of {total} paths rejected, above the 1% cap")]
    RejectionCap { rejected: u64, total: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
