//! Run configurations. Every field has a default, so `{}` is a valid config
//! for any command; unknown fields are rejected.

use anyhow::{bail, ensure, Result};
use monofk_core::geometry::{ChartAtlas, Point3};
use monofk_core::spectral::{RadialGrid, SectionSpec};
use serde::{Deserialize, Serialize};

/// Discretization budget constant in `C * sqrt(h)`, calibrated by the
/// `convergence` command.
pub const DEFAULT_C_BUDGET: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtlasConfig {
    pub charge: i32,
    pub delta: f64,
    pub switch_margin: f64,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        Self { charge: 1, delta: 0.5, switch_margin: 0.5 }
    }
}

impl AtlasConfig {
    pub fn build(&self) -> Result<ChartAtlas<f64>> {
        Ok(ChartAtlas::new(self.charge, self.delta, self.switch_margin)?)
    }
}

fn headline_section() -> SectionSpec {
    SectionSpec::single(1, 1, 0, 1.0, 3.0)
}

fn check_section(atlas: &AtlasConfig, section: &SectionSpec) -> Result<()> {
    if section.n != atlas.charge {
        bail!("section charge {} differs from atlas charge {}", section.n, atlas.charge);
    }
    Ok(())
}

pub fn point(x: [f64; 3]) -> Result<Point3<f64>> {
    let p = Point3::new(x[0], x[1], x[2]);
    ensure!(x.iter().all(|v| v.is_finite()), "x must be finite");
    ensure!(p.norm() > 0.0, "x must not be the origin");
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub atlas: AtlasConfig,
    pub seed: u64,
    pub holonomy_thetas: Vec<f64>,
    pub holonomy_segments: usize,
    pub samples: usize,
    pub arc_segments: usize,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            atlas: AtlasConfig::default(),
            seed: 0,
            holonomy_thetas: vec![std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_2],
            holonomy_segments: 10_000,
            samples: 10_000,
            arc_segments: 10_000,
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<()> {
        self.atlas.build()?;
        ensure!(self.holonomy_segments >= 3, "holonomy_segments must be at least 3");
        ensure!(self.arc_segments >= 1, "arc_segments must be positive");
        for &th in &self.holonomy_thetas {
            ensure!(th > 0.0 && th < std::f64::consts::PI, "holonomy theta {th} must lie in (0, pi)");
            ensure!(
                th.cos() > -self.atlas.delta,
                "the circle at theta {th} is not inside chart Plus for delta {}",
                self.atlas.delta
            );
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub atlas: AtlasConfig,
    pub seed: u64,
    pub section: SectionSpec,
    pub radial_grid: RadialGrid<f64>,
    /// `(ell, m)` pairs for the angular momentum check; `n` is the section charge.
    pub angular_modes: Vec<[i32; 2]>,
    pub angular_theta: f64,
    pub angular_phi: f64,
    pub angular_step: f64,
    pub eigen_ks: Vec<f64>,
    pub eigen_rs: Vec<f64>,
    pub semigroup_times: [f64; 2],
    pub laplacian_points: usize,
    pub laplacian_radii: [f64; 2],
    pub laplacian_step: f64,
    pub small_r_window: [f64; 2],
    pub large_r_window: [f64; 2],
    /// Band of the narrow-band term used for the large-r envelope.
    pub narrow_band: [f64; 2],
    pub slope_direction: [f64; 3],
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            atlas: AtlasConfig::default(),
            seed: 0,
            section: headline_section(),
            radial_grid: RadialGrid::default(),
            angular_modes: vec![[1, 0], [1, 1]],
            angular_theta: std::f64::consts::FRAC_PI_2,
            angular_phi: 1.0,
            angular_step: 1e-4,
            eigen_ks: vec![1.0, 2.0],
            eigen_rs: vec![0.7, 1.9, 4.4],
            semigroup_times: [0.2, 0.3],
            laplacian_points: 20,
            laplacian_radii: [0.5, 5.0],
            laplacian_step: 1e-3,
            small_r_window: [1e-4, 1e-3],
            large_r_window: [1e2, 1e3],
            narrow_band: [1.0, 1.001],
            slope_direction: [0.6, 0.0, 0.8],
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        self.atlas.build()?;
        check_section(&self.atlas, &self.section)?;
        ensure!(!self.section.terms.is_empty(), "section needs at least one term");
        ensure!(self.angular_step > 0.0 && self.laplacian_step > 0.0, "finite-difference steps must be positive");
        ensure!(self.semigroup_times.iter().all(|&t| t >= 0.0), "semigroup times must be non-negative");
        ensure!(
            self.laplacian_radii[0] > 0.0 && self.laplacian_radii[0] < self.laplacian_radii[1],
            "laplacian_radii must be increasing and positive"
        );
        for w in [self.small_r_window, self.large_r_window, self.narrow_band] {
            ensure!(w[0] > 0.0 && w[0] < w[1], "windows and bands must be increasing and positive");
        }
        point(self.slope_direction)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FkRunConfig {
    pub atlas: AtlasConfig,
    pub section: SectionSpec,
    pub x: [f64; 3],
    pub t: f64,
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub c_budget: f64,
    /// Also run at `4 n_steps` and `16 n_steps` and tabulate.
    pub convergence_table: bool,
    /// Gauss-Hermite nodes per axis for the `n = 0` heat-kernel reference.
    pub oracle_nodes: usize,
}

impl Default for FkRunConfig {
    fn default() -> Self {
        Self {
            atlas: AtlasConfig::default(),
            section: headline_section(),
            x: [0.0, 0.0, 2.0],
            t: 0.5,
            n_paths: 20_000,
            n_steps: 5_000,
            seed: 1,
            c_budget: DEFAULT_C_BUDGET,
            convergence_table: false,
            oracle_nodes: 24,
        }
    }
}

impl FkRunConfig {
    pub fn validate(&self) -> Result<()> {
        self.atlas.build()?;
        check_section(&self.atlas, &self.section)?;
        point(self.x)?;
        ensure!(self.t > 0.0 && self.t.is_finite(), "t must be positive (t = 0 is rejected)");
        ensure!(self.n_steps >= 10, "n_steps must be at least 10 so that t >= 10 h");
        ensure!(self.n_paths >= 2, "n_paths must be at least 2");
        ensure!(self.c_budget >= 0.0, "c_budget must be non-negative");
        ensure!(self.oracle_nodes >= 1, "oracle_nodes must be positive");
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub atlas: AtlasConfig,
    pub section: SectionSpec,
    pub seed: u64,
    /// Start point and horizon of the standard-error and budget studies.
    pub x: [f64; 3],
    pub t: f64,
    pub stderr_path_counts: Vec<usize>,
    pub stderr_steps: usize,
    /// Coupled paths for the order studies; each path is refined by 4 per level.
    pub order_paths: usize,
    pub order_t: f64,
    pub order_base_steps: usize,
    pub order_levels: usize,
    /// Start point of paths confined to the chart overlap.
    pub overlap_x: [f64; 3],
    /// Overlap parameters compared in the hysteresis chart-choice study.
    pub delta_pair: [f64; 2],
    pub calibration_paths: usize,
    pub calibration_fine_steps: usize,
    pub calibration_strides: Vec<usize>,
    pub c_budget: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            atlas: AtlasConfig::default(),
            section: headline_section(),
            seed: 1,
            x: [0.8, 0.3, 0.6],
            t: 0.5,
            stderr_path_counts: vec![1_000, 10_000, 100_000],
            stderr_steps: 500,
            order_paths: 400,
            order_t: 0.1,
            order_base_steps: 16,
            order_levels: 3,
            overlap_x: [1.5, 0.0, 0.0],
            delta_pair: [0.3, 0.6],
            calibration_paths: 4_000,
            calibration_fine_steps: 8_000,
            calibration_strides: vec![16, 4],
            c_budget: DEFAULT_C_BUDGET,
        }
    }
}

impl ConvergenceConfig {
    pub fn validate(&self) -> Result<()> {
        self.atlas.build()?;
        check_section(&self.atlas, &self.section)?;
        point(self.x)?;
        point(self.overlap_x)?;
        ensure!(self.t > 0.0 && self.order_t > 0.0, "horizons must be positive");
        ensure!(self.stderr_path_counts.len() >= 2, "need at least two path counts");
        ensure!(self.stderr_path_counts.iter().all(|&n| n >= 2), "path counts must be at least 2");
        ensure!(self.stderr_steps >= 10 && self.order_base_steps >= 1, "too few steps");
        ensure!(self.order_levels >= 2, "need at least two refinement levels");
        ensure!(self.order_paths >= 2 && self.calibration_paths >= 2, "too few paths");
        for &d in &self.delta_pair {
            ChartAtlas::new(self.atlas.charge, d, self.atlas.switch_margin)?;
        }
        for &s in &self.calibration_strides {
            ensure!(s > 1 && self.calibration_fine_steps.is_multiple_of(s), "calibration stride {s} must divide the fine steps");
        }
        Ok(())
    }
}
