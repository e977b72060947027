//! Finite-h and finite-N scaling studies. The order studies share one fine
//! path per index across all levels (coarse levels are subsamples), so
//! differences between levels are per-path and not Monte Carlo noise.

use anyhow::Result;
use monofk_core::geometry::{ChartAtlas, ChartId, Covector3, Point3};
use monofk_core::spectral::SectionInD;
use monofk_core::stochastic::{
    fk_estimate, ito_integral, sample_brownian_path, stochastic_transport, stochastic_transport_with,
    stratonovich_integral, transport_inverse_apply, BrownianPath, FkConfig, PathConfig, SwitchPolicy,
};
use num_complex::Complex64;

use super::spectral::fit_slope;
use crate::config::{point, ConvergenceConfig};
use crate::report::{Check, Report, Table, TableRow};

const STDERR_SLOPE: f64 = -0.5;
const STDERR_SLOPE_TOL: f64 = 0.05;
/// Expected shrink factor per h -> h/4 at order sqrt(h), and its relative tolerance.
const ORDER_RATIO: f64 = 2.0;
const ORDER_RATIO_TOL: f64 = 0.3;
const EXACT_TOL: f64 = 1e-12;

/// Mean per-path absolute difference at each level of a coupled study.
struct LevelStudy {
    name: &'static str,
    means: Vec<f64>,
    used: usize,
    skipped: usize,
}

impl LevelStudy {
    fn new(name: &'static str, levels: usize) -> Self {
        Self { name, means: vec![0.0; levels], used: 0, skipped: 0 }
    }

    fn push(&mut self, diffs: Option<Vec<f64>>) {
        match diffs {
            Some(d) => {
                for (m, v) in self.means.iter_mut().zip(d) {
                    *m += v;
                }
                self.used += 1;
            }
            None => self.skipped += 1,
        }
    }

    fn finish(mut self, base_h: f64, report: &mut Report) {
        for m in &mut self.means {
            *m /= self.used.max(1) as f64;
        }
        report.real(&format!("{}_paths_used", self.name), self.used as f64);
        report.real(&format!("{}_paths_skipped", self.name), self.skipped as f64);
        let mut rows = Vec::new();
        for (l, &m) in self.means.iter().enumerate() {
            let h = base_h / 4f64.powi(l as i32);
            report.real(&format!("{}_mean_abs_diff_level{l}", self.name), m);
            rows.push(TableRow { h, n_paths: self.used, value_re: m, value_im: 0.0, stderr: 0.0 });
        }
        let last = self.means.len() - 1;
        let order = (self.means[0] / self.means[last]).ln() / 4f64.powi(last as i32).ln();
        report.real(&format!("{}_observed_order", self.name), order);
        for l in 0..last {
            let ratio = self.means[l] / self.means[l + 1];
            report.check(Check::near(
                format!("{}_ratio_level{l}", self.name),
                ratio,
                ORDER_RATIO,
                ORDER_RATIO_TOL * ORDER_RATIO,
            ));
        }
        report.tables.push(Table { name: self.name.into(), rows });
    }
}

struct Coupled<'a> {
    fine: BrownianPath<f64>,
    cfg: &'a ConvergenceConfig,
}

impl Coupled<'_> {
    fn level(&self, l: usize) -> BrownianPath<f64> {
        let stride = 4usize.pow((self.cfg.order_levels - 1 - l) as u32);
        self.fine.subsample(stride).expect("stride divides the fine grid")
    }

    fn levels(&self) -> impl Iterator<Item = (usize, BrownianPath<f64>)> + '_ {
        (0..self.cfg.order_levels).map(|l| (l, self.level(l)))
    }
}

fn confined(path: &BrownianPath<f64>, keep: impl Fn(&Point3<f64>) -> bool) -> bool {
    path.points.iter().all(keep)
}

/// Transport factor from chart Plus at `X_0` to chart Plus at `X_N`.
fn plus_to_plus(atlas: &ChartAtlas<f64>, path: &BrownianPath<f64>, start: ChartId) -> Option<Complex64> {
    let s = stochastic_transport_with(path, atlas, start, &SwitchPolicy::Manual(Vec::new())).ok()?;
    let mut f = s.factor();
    if start == ChartId::Minus {
        f = f * atlas.transition_phase(&path.end()).ok()? * atlas.transition_phase(&path.start()).ok()?.conj();
    }
    Some(f)
}

fn stderr_study(cfg: &ConvergenceConfig, section: &SectionInD<f64>, atlas: &ChartAtlas<f64>, threads: Option<usize>, report: &mut Report) -> Result<()> {
    let x = point(cfg.x)?;
    let mut rows = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for &n in &cfg.stderr_path_counts {
        let est = fk_estimate(section, atlas, x, cfg.t, &FkConfig { n_paths: n, n_steps: cfg.stderr_steps, seed: cfg.seed, threads })?;
        xs.push((n as f64).ln());
        ys.push(est.stderr.ln());
        rows.push(TableRow {
            h: cfg.t / cfg.stderr_steps as f64,
            n_paths: n,
            value_re: est.mean.re,
            value_im: est.mean.im,
            stderr: est.stderr,
        });
    }
    let slope = fit_slope(&xs, &ys);
    report.real("stderr_slope", slope);
    report.check(Check::near("stderr_slope", slope, STDERR_SLOPE, STDERR_SLOPE_TOL));
    report.tables.push(Table { name: "stderr_vs_paths".into(), rows });
    Ok(())
}

fn order_studies(cfg: &ConvergenceConfig, section: &SectionInD<f64>, atlas: &ChartAtlas<f64>, report: &mut Report) -> Result<()> {
    let levels = cfg.order_levels;
    let fine_steps = cfg.order_base_steps * 4usize.pow((levels - 1) as u32);
    let base_h = cfg.order_t / cfg.order_base_steps as f64;
    let x_overlap = point(cfg.overlap_x)?;
    let x_free = point(cfg.x)?;
    let [d_lo, d_hi] = cfg.delta_pair;
    let atlas_lo = ChartAtlas::new(atlas.charge, d_lo, atlas.switch_margin)?;
    let atlas_hi = ChartAtlas::new(atlas.charge, d_hi, atlas.switch_margin)?;
    let in_overlap = |p: &Point3<f64>| atlas.in_overlap(p).unwrap_or(false);
    let in_plus = |p: &Point3<f64>| atlas.chart_contains(ChartId::Plus, p).unwrap_or(false);

    let mut chart_choice = LevelStudy::new("chart_choice", levels);
    let mut delta_choice = LevelStudy::new("chart_choice_delta", levels);
    let mut refinement = LevelStudy::new("refinement", levels);
    let mut gradient = LevelStudy::new("gradient_identity", levels);
    let mut strat_ito = LevelStudy::new("stratonovich_minus_ito", levels);
    let mut worst_noop = 0.0f64;

    let g = |p: &Point3<f64>| p.x3 / p.norm();
    let grad_g = |p: &Point3<f64>| {
        let r = p.norm();
        let r3 = r * r * r;
        Covector3::new(-p.x3 * p.x1 / r3, -p.x3 * p.x2 / r3, (r * r - p.x3 * p.x3) / r3)
    };

    for i in 0..cfg.order_paths as u64 {
        let pcfg = PathConfig::new(cfg.order_t, fine_steps, cfg.seed, i)?;

        let ov = Coupled { fine: sample_brownian_path(x_overlap, &pcfg)?, cfg };
        if confined(&ov.fine, in_overlap) {
            let mut cc = Vec::new();
            let mut rf = Vec::new();
            for (_, p) in ov.levels() {
                let plus = plus_to_plus(atlas, &p, ChartId::Plus);
                let minus = plus_to_plus(atlas, &p, ChartId::Minus);
                cc.push(plus.zip(minus).map(|(a, b)| (a - b).norm()));

                let n = p.n_steps();
                let (j1, j2) = (n / 4, n / 2);
                let manual = |steps: Vec<usize>| {
                    stochastic_transport_with(&p, atlas, ChartId::Plus, &SwitchPolicy::Manual(steps)).ok().map(|s| s.factor())
                };
                let plain = manual(Vec::new());
                if let (Some(a), Some(b)) = (plain, manual(vec![j1, j1])) {
                    worst_noop = worst_noop.max((a - b).norm());
                }
                rf.push(plain.zip(manual(vec![j1, j2])).map(|(a, b)| (a - b).norm()));
            }
            chart_choice.push(cc.into_iter().collect());
            refinement.push(rf.into_iter().collect());
        } else {
            chart_choice.push(None);
            refinement.push(None);
        }

        let dc: Option<Vec<f64>> = ov
            .levels()
            .map(|(_, p)| {
                let run = |a: &ChartAtlas<f64>| {
                    let s = stochastic_transport(&p, a, ChartId::Plus).ok()?;
                    transport_inverse_apply(&s, section, &p, a, ChartId::Plus).ok()
                };
                run(&atlas_lo).zip(run(&atlas_hi)).map(|(a, b)| (a - b).norm())
            })
            .collect();
        delta_choice.push(dc);

        let free = Coupled { fine: sample_brownian_path(x_free, &pcfg)?, cfg };
        gradient.push(Some(
            free.levels()
                .map(|(_, p)| (stratonovich_integral(&p, grad_g) - (g(&p.end()) - g(&p.start()))).abs())
                .collect(),
        ));
        if confined(&free.fine, in_plus) {
            let a_plus = |p: &Point3<f64>| atlas.connection_form(ChartId::Plus, p).expect("path stays in chart Plus");
            strat_ito.push(Some(
                free.levels()
                    .map(|(_, p)| (stratonovich_integral(&p, a_plus) - ito_integral(&p, a_plus)).abs())
                    .collect(),
            ));
        } else {
            strat_ito.push(None);
        }
    }

    report.check(Check::at_most("refinement_noop_exact", worst_noop, EXACT_TOL));
    for study in [chart_choice, delta_choice, refinement, gradient, strat_ito] {
        study.finish(base_h, report);
    }
    Ok(())
}

/// Upper bound on `|bias(h)| / sqrt(h)` from coupled coarse/fine estimates.
fn calibrate(cfg: &ConvergenceConfig, section: &SectionInD<f64>, atlas: &ChartAtlas<f64>, report: &mut Report) -> Result<()> {
    let x = point(cfg.x)?;
    let chart = atlas.preferred_chart(&x)?;
    let k = cfg.calibration_strides.len();
    let mut diffs: Vec<Vec<Complex64>> = vec![Vec::new(); k];
    let mut rejected = 0usize;
    for i in 0..cfg.calibration_paths as u64 {
        let fine = sample_brownian_path(x, &PathConfig::new(cfg.t, cfg.calibration_fine_steps, cfg.seed, i)?)?;
        let value = |p: &BrownianPath<f64>| {
            let s = stochastic_transport(p, atlas, chart).ok()?;
            transport_inverse_apply(&s, section, p, atlas, chart).ok()
        };
        let coarse: Option<Vec<Complex64>> =
            cfg.calibration_strides.iter().map(|&s| value(&fine.subsample(s).ok()?)).collect();
        match (coarse, value(&fine)) {
            (Some(c), Some(f)) => {
                for (d, v) in diffs.iter_mut().zip(c) {
                    d.push(v - f);
                }
            }
            _ => rejected += 1,
        }
    }
    let mut c_est = 0.0f64;
    let mut rows = Vec::new();
    for (d, &stride) in diffs.iter().zip(&cfg.calibration_strides) {
        let n = d.len() as f64;
        let mean = d.iter().sum::<Complex64>() / n;
        let var = d.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let h = cfg.t * stride as f64 / cfg.calibration_fine_steps as f64;
        c_est = c_est.max((mean.norm() + 2.0 * se) / h.sqrt());
        rows.push(TableRow { h, n_paths: d.len(), value_re: mean.re, value_im: mean.im, stderr: se });
    }
    report.real("calibration_paths_rejected", rejected as f64);
    report.real("c_budget_calibrated", c_est);
    report.check(Check::at_most("c_budget_covers_calibration", c_est, cfg.c_budget));
    report.tables.push(Table { name: "coupled_bias".into(), rows });
    Ok(())
}

pub fn run(cfg: &ConvergenceConfig, threads: Option<usize>) -> Result<Report> {
    cfg.validate()?;
    let atlas = cfg.atlas.build()?;
    let section = SectionInD::<f64>::from_spec(&cfg.section)?;
    let mut report = Report::new("convergence", cfg.seed, serde_json::to_value(cfg)?);
    stderr_study(cfg, &section, &atlas, threads, &mut report)?;
    order_studies(cfg, &section, &atlas, &mut report)?;
    calibrate(cfg, &section, &atlas, &mut report)?;
    Ok(report)
}
