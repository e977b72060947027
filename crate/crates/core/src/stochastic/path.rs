use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::rng::path_rng;
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::scalar::Real;

/// Increments landing closer than this (times `max(1, |x0|)`) to the origin are redrawn.
pub const ORIGIN_GUARD: f64 = 1e-9;
/// Total redraws allowed for a single path.
pub const RESAMPLE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathConfig<T> {
    pub t_final: T,
    pub n_steps: usize,
    pub seed: u64,
    pub path_index: u64,
}

impl<T: Real> PathConfig<T> {
    pub fn new(t_final: T, n_steps: usize, seed: u64, path_index: u64) -> Result<Self> {
        if !(t_final > T::zero() && t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_final must be positive and finite, got {t_final}")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
        }
        Ok(Self { t_final, n_steps, seed, path_index })
    }

    pub fn step(&self) -> T {
        self.t_final / T::of_int(self.n_steps as i64)
    }

    pub fn with_index(&self, path_index: u64) -> Self {
        Self { path_index, ..*self }
    }
}

/// Sampled Brownian trajectory on a uniform grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BrownianPath<T> {
    pub times: Vec<T>,
    pub points: Vec<Point3<T>>,
    /// Increments redrawn because they landed too close to the origin.
    pub n_resampled: u64,
}

impl<T: Real> BrownianPath<T> {
    pub fn n_steps(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn start(&self) -> Point3<T> {
        self.points[0]
    }

    pub fn end(&self) -> Point3<T> {
        self.points[self.points.len() - 1]
    }

    pub fn increments(&self) -> impl Iterator<Item = Point3<T>> + '_ {
        self.points.windows(2).map(|w| w[1] - w[0])
    }

    /// Every `stride`-th grid point, giving the same path at step `stride * h`.
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        if stride == 0 || !self.n_steps().is_multiple_of(stride) {
            return Err(Error::InvalidArgument(format!(
                "stride {stride} does not divide {} steps",
                self.n_steps()
            )));
        }
        Ok(Self {
            times: self.times.iter().step_by(stride).copied().collect(),
            points: self.points.iter().step_by(stride).copied().collect(),
            n_resampled: self.n_resampled,
        })
    }
}

/// Samples a path from `x0` with i.i.d. `N(0, h)` coordinate increments.
pub fn sample_brownian_path<T: Real>(x0: Point3<T>, cfg: &PathConfig<T>) -> Result<BrownianPath<T>> {
    let mut path = BrownianPath::default();
    sample_brownian_path_into(x0, cfg, &mut path)?;
    Ok(path)
}

/// As [`sample_brownian_path`], reusing the buffers of `path`.
pub fn sample_brownian_path_into<T: Real>(
    x0: Point3<T>,
    cfg: &PathConfig<T>,
    path: &mut BrownianPath<T>,
) -> Result<()> {
    if x0.norm() == T::zero() {
        return Err(Error::Origin);
    }
    let n = cfg.n_steps;
    let h = cfg.step();
    let sd = h.sqrt().to_f64_lossy();
    let guard = T::of(ORIGIN_GUARD) * x0.norm().max(T::one());
    let guard_sqr = guard * guard;
    let mut rng = path_rng(cfg.seed, cfg.path_index);

    path.times.clear();
    path.points.clear();
    path.times.reserve(n + 1);
    path.points.reserve(n + 1);
    path.n_resampled = 0;
    path.times.push(T::zero());
    path.points.push(x0);

    let mut x = x0;
    for j in 1..=n {
        loop {
            let dx = Point3::new(
                T::of(sd * rng.sample::<f64, _>(StandardNormal)),
                T::of(sd * rng.sample::<f64, _>(StandardNormal)),
                T::of(sd * rng.sample::<f64, _>(StandardNormal)),
            );
            let next = x + dx;
            if next.norm_sqr() >= guard_sqr {
                x = next;
                break;
            }
            path.n_resampled += 1;
            if path.n_resampled > RESAMPLE_BUDGET {
                return Err(Error::ResampleBudgetExceeded(path.n_resampled));
            }
        }
        path.points.push(x);
        path.times.push(if j == n { cfg.t_final } else { h * T::of_int(j as i64) });
    }
    Ok(())
}
