use anyhow::Result;
use monofk_core::geometry::{ChartAtlas, ChartId, Point3};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::GeometryConfig;
use crate::report::{Check, Report};

const HOLONOMY_TOL: f64 = 1e-5;
const UNIT_TOL: f64 = 1e-12;
const GAUGE_TOL: f64 = 1e-12;
const DIVERGENCE_TOL: f64 = 1e-6;

/// Uniform direction with `x3/|x|` in `(lo, hi)`, log-uniform radius in `[1e-3, 1e3]`.
fn sample_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Point3<f64> {
    let c: f64 = rng.random_range(lo..hi);
    let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let r = 10f64.powf(rng.random_range(-3.0..3.0));
    let s = (1.0 - c * c).sqrt();
    Point3::new(r * s * phi.cos(), r * s * phi.sin(), r * c)
}

fn divergence(atlas: &ChartAtlas<f64>, chart: ChartId, x: &Point3<f64>) -> Result<f64> {
    let h = 1e-5 * x.norm();
    let mut div = 0.0;
    for k in 0..3 {
        let e = Point3::axis(k) * h;
        let fwd = atlas.connection_form(chart, &(*x + e))?;
        let bwd = atlas.connection_form(chart, &(*x - e))?;
        div += (fwd[k] - bwd[k]) / (2.0 * h);
    }
    Ok(div)
}

pub fn run(cfg: &GeometryConfig) -> Result<Report> {
    cfg.validate()?;
    let atlas = cfg.atlas.build()?;
    let n = atlas.charge as f64;
    let mut report = Report::new("geometry", cfg.seed, serde_json::to_value(cfg)?);

    for &theta in &cfg.holonomy_thetas {
        let h = atlas.loop_holonomy(ChartId::Plus, theta, cfg.holonomy_segments)?;
        // Stokes: n times the solid angle of the cap
        let exact = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * n * (1.0 - theta.cos()));
        let name = format!("holonomy_theta_{theta:.6}");
        report.complex(&name, h, None);
        report.complex(&format!("{name}_exact"), exact, None);
        report.check(Check::at_most(&name, (h - exact).norm(), HOLONOMY_TOL));
        report.check(Check::at_most(format!("{name}_unit_modulus"), (h.norm() - 1.0).abs(), UNIT_TOL));
    }

    let arc: Vec<Point3<f64>> = (0..=cfg.arc_segments)
        .map(|j| {
            let phi = std::f64::consts::FRAC_PI_2 * j as f64 / cfg.arc_segments as f64;
            Point3::new(phi.cos(), phi.sin(), 0.0)
        })
        .collect();
    let fwd = atlas.parallel_transport_polyline(ChartId::Plus, &arc)?;
    let rev: Vec<_> = arc.iter().rev().copied().collect();
    let back = atlas.parallel_transport_polyline(ChartId::Plus, &rev)?;
    report.complex("equatorial_arc", fwd, None);
    report.check(Check::at_most(
        "equatorial_arc",
        (fwd - Complex64::from_polar(1.0, n * std::f64::consts::FRAC_PI_2)).norm(),
        HOLONOMY_TOL,
    ));
    report.check(Check::at_most("equatorial_arc_reversal", (back - fwd.conj()).norm(), UNIT_TOL));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let delta = atlas.delta;
    let (mut violations, mut max_abs, mut worst_gauge, mut worst_div) = (0usize, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..cfg.samples {
        let x = sample_point(&mut rng, -delta, 1.0);
        let r = x.norm();
        let a = atlas.connection_form(ChartId::Plus, &x)?;
        let bound = n.abs() / ((1.0 - delta) * r);
        let big = a.to_array().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        max_abs = max_abs.max(big);
        if big > bound * (1.0 + 1e-12) {
            violations += 1;
        }

        // keep the stencil inside the chart
        if r > 1e-2 && x.cos_polar() > -delta + 0.05 {
            let div = divergence(&atlas, ChartId::Plus, &x)?;
            let scale = (a.c1 * a.c1 + a.c2 * a.c2).sqrt() / r;
            if scale > 0.0 {
                worst_div = worst_div.max(div.abs() / scale);
            }
        }

        let y = sample_point(&mut rng, -delta, delta);
        let diff = atlas.connection_form(ChartId::Plus, &y)? - atlas.connection_form(ChartId::Minus, &y)?;
        let rho2 = y.rho_sqr();
        let want = [-2.0 * n * y.x2 / rho2, 2.0 * n * y.x1 / rho2, 0.0];
        let scale = want[0].hypot(want[1]).max(f64::MIN_POSITIVE);
        let err = diff.to_array().iter().zip(want).fold(0.0f64, |m, (d, w)| m.max((d - w).abs()));
        worst_gauge = worst_gauge.max(err / scale.max(1.0));
    }
    report.real("connection_bound_violations", violations as f64);
    report.check(Check::at_most("connection_bound_violations", violations as f64, 0.0));
    report.check(Check::at_most("gauge_relation", worst_gauge, GAUGE_TOL));
    report.check(Check::at_most("divergence_free", worst_div, DIVERGENCE_TOL));
    if atlas.charge == 0 {
        report.check(Check::at_most("zero_charge_connection", max_abs, 0.0));
    }
    Ok(report)
}
