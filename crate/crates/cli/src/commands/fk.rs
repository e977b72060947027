use anyhow::Result;
use monofk_core::spectral::SectionInD;
use monofk_core::stochastic::{fk_estimate, gaussian_smoothing, FkConfig};

use crate::config::{point, FkRunConfig};
use crate::report::{Check, Report, Table, TableRow};

/// Agreement between the Gauss-Hermite reference and the spectral semigroup.
const ORACLE_SPECTRAL_TOL: f64 = 1e-6;

pub fn run(cfg: &FkRunConfig, threads: Option<usize>) -> Result<Report> {
    cfg.validate()?;
    let atlas = cfg.atlas.build()?;
    let section = SectionInD::<f64>::from_spec(&cfg.section)?;
    let x = point(cfg.x)?;
    let chart = atlas.preferred_chart(&x)?;
    let mut report = Report::new("fk", cfg.seed, serde_json::to_value(cfg)?);

    let spectral = section.semigroup_apply(cfg.t)?.eval(&atlas, chart, &x)?.value;
    let mc_cfg = FkConfig { n_paths: cfg.n_paths, n_steps: cfg.n_steps, seed: cfg.seed, threads };
    let est = fk_estimate(&section, &atlas, x, cfg.t, &mc_cfg)?;
    let h = cfg.t / cfg.n_steps as f64;
    let diff = (est.mean - spectral).norm();
    let budget = 3.0 * est.stderr + cfg.c_budget * h.sqrt();

    report.complex("mc_mean", est.mean, Some(est.stderr));
    report.real("mc_stderr", est.stderr);
    report.complex("spectral_value", spectral, None);
    report.real("difference", diff);
    report.real("h", h);
    report.real("discretization_budget", cfg.c_budget * h.sqrt());
    report.real("n_rejected", est.n_rejected as f64);
    report.real("n_resampled", est.n_resampled as f64);
    report.check(Check::at_most("fk_agreement", diff, budget));

    if section.charge == 0 {
        let oracle = gaussian_smoothing(&section, x, cfg.t, cfg.oracle_nodes)?;
        report.complex("heat_kernel_oracle", oracle, None);
        report.check(Check::at_most("oracle_vs_spectral", (oracle - spectral).norm(), ORACLE_SPECTRAL_TOL));
        report.check(Check::at_most("mc_vs_oracle", (est.mean - oracle).norm(), 3.0 * est.stderr));
    }

    if cfg.convergence_table {
        let mut rows = vec![TableRow { h, n_paths: cfg.n_paths, value_re: est.mean.re, value_im: est.mean.im, stderr: est.stderr }];
        for refine in [4, 16] {
            let steps = cfg.n_steps * refine;
            let e = fk_estimate(&section, &atlas, x, cfg.t, &FkConfig { n_steps: steps, ..mc_cfg })?;
            rows.push(TableRow {
                h: cfg.t / steps as f64,
                n_paths: cfg.n_paths,
                value_re: e.mean.re,
                value_im: e.mean.im,
                stderr: e.stderr,
            });
        }
        report.tables.push(Table { name: "fk_step_refinement".into(), rows });
    }
    Ok(report)
}
