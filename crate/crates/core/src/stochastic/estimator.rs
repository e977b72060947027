//! Monte Carlo estimate of `E^x[Pi_t^{-1} Psi(X_t)]`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::{sample_brownian_path_into, BrownianPath, PathConfig};
use super::transport::{stochastic_transport, transport_inverse_apply};
use crate::error::{Error, Result};
use crate::geometry::{ChartAtlas, ChartId, Point3};
use crate::scalar::Real;
use crate::spectral::SectionInD;

/// Largest tolerated fraction of rejected paths.
pub const MAX_REJECTED_FRACTION: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FkConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FkEstimate<T> {
    pub mean: Complex<T>,
    pub stderr: T,
    pub n_paths: usize,
    pub n_rejected: u64,
    /// Increments redrawn for landing near the origin, summed over paths.
    pub n_resampled: u64,
}

struct PathOutcome<T> {
    value: Option<Complex<T>>,
    resampled: u64,
}

fn one_path<T: Real>(
    section: &SectionInD<T>,
    atlas: &ChartAtlas<T>,
    x: Point3<T>,
    chart: ChartId,
    cfg: &PathConfig<T>,
    buf: &mut BrownianPath<T>,
) -> PathOutcome<T> {
    let run = |buf: &mut BrownianPath<T>| -> Result<Complex<T>> {
        sample_brownian_path_into(x, cfg, buf)?;
        let state = stochastic_transport(buf, atlas, chart)?;
        transport_inverse_apply(&state, section, buf, atlas, chart)
    };
    match run(buf) {
        Ok(v) => PathOutcome { value: Some(v), resampled: buf.n_resampled },
        Err(e) => {
            log::debug!("path {} rejected: {e}", cfg.path_index);
            PathOutcome { value: None, resampled: buf.n_resampled }
        }
    }
}

/// Plain Monte Carlo over `n_paths` paths, expressed at `x` in its preferred
/// chart. The reduction runs in path-index order, so the result does not
/// depend on the number of workers.
pub fn fk_estimate<T: Real>(
    section: &SectionInD<T>,
    atlas: &ChartAtlas<T>,
    x: Point3<T>,
    t: T,
    cfg: &FkConfig,
) -> Result<FkEstimate<T>> {
    let chart = atlas.preferred_chart(&x)?;
    fk_estimate_in_chart(section, atlas, x, t, cfg, chart)
}

pub fn fk_estimate_in_chart<T: Real>(
    section: &SectionInD<T>,
    atlas: &ChartAtlas<T>,
    x: Point3<T>,
    t: T,
    cfg: &FkConfig,
    chart: ChartId,
) -> Result<FkEstimate<T>> {
    if cfg.n_paths < 2 {
        return Err(Error::InvalidArgument("need at least two paths for a standard error".into()));
    }
    if !atlas.chart_contains(chart, &x)? {
        return Err(Error::OutOfChart(chart));
    }
    let template = PathConfig::new(t, cfg.n_steps, cfg.seed, 0)?;
    let work = || -> Vec<PathOutcome<T>> {
        (0..cfg.n_paths as u64)
            .into_par_iter()
            .map_init(BrownianPath::default, |buf, i| {
                one_path(section, atlas, x, chart, &template.with_index(i), buf)
            })
            .collect()
    };
    let outcomes = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    reduce(&outcomes, cfg.n_paths)
}

fn reduce<T: Real>(outcomes: &[PathOutcome<T>], n_paths: usize) -> Result<FkEstimate<T>> {
    let n_resampled = outcomes.iter().map(|o| o.resampled).sum();
    let values: Vec<Complex<T>> = outcomes.iter().filter_map(|o| o.value).collect();
    let n_rejected = (n_paths - values.len()) as u64;
    if n_rejected as f64 > MAX_REJECTED_FRACTION * n_paths as f64 {
        return Err(Error::RejectionCap { rejected: n_rejected, total: n_paths as u64 });
    }
    let n = T::of_int(values.len() as i64);
    let zero = Complex::new(T::zero(), T::zero());
    let mean = values.iter().fold(zero, |acc, v| acc + v) / n;
    let ss = values.iter().fold(T::zero(), |acc, v| acc + (v - mean).norm_sqr());
    let stderr = (ss / (n - T::one()) / n).sqrt();
    Ok(FkEstimate { mean, stderr, n_paths, n_rejected, n_resampled })
}
