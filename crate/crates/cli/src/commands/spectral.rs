use anyhow::Result;
use monofk_core::geometry::{ChartAtlas, ChartId, FiberValue, Point3};
use monofk_core::special::scaled_bessel;
use monofk_core::spectral::{
    angular_momentum_check, fourier_bessel_forward, radial_hamiltonian_fd, truncation_tail, AngularMode,
    HarmonicTable, SectionInD, SectionSpec, SectionTerm, TermSpec,
};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{point, SpectralConfig};
use crate::report::{Check, Report};

const PARSEVAL_TOL: f64 = 1e-6;
const ROUND_TRIP_TOL: f64 = 1e-6;
const EIGEN_TOL: f64 = 1e-6;
const L3_TOL: f64 = 1e-7;
const L2_TOL: f64 = 1e-5;
const SLOPE_TOL: f64 = 0.05;
const LARGE_R_TOL: f64 = 0.1;
const SEMIGROUP_TOL: f64 = 1e-12;
const LAPLACIAN_TOL: f64 = 1e-3;
const CHART_TOL: f64 = 1e-10;
const SLOPE_SAMPLES: usize = 9;

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Log-log slope of `f` over the window.
fn power_slope(window: [f64; 2], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let rs = log_space(window[0], window[1], SLOPE_SAMPLES);
    let ys = rs.iter().map(|&r| Ok(f(r)?.ln())).collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    Ok(fit_slope(&xs, &ys))
}

/// Slope of the oscillation envelope: the maximum of `f` over one period
/// following each sample radius.
fn envelope_slope(window: [f64; 2], period: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    power_slope(window, |r0| {
        let mut best = 0.0f64;
        for j in 0..64 {
            best = best.max(f(r0 + period * j as f64 / 64.0)?);
        }
        Ok(best)
    })
}

fn term_label(term: &SectionTerm<f64>, i: usize) -> String {
    format!("term{i}_ell{}_m{}", term.mode.ell, term.mode.m)
}

fn parseval_and_round_trip(cfg: &SpectralConfig, term: &SectionTerm<f64>, label: &str, report: &mut Report) -> Result<()> {
    let rule = cfg.radial_grid.rule()?;
    let psi = |r: f64| Complex64::new(term.radial(r).expect("radial profile evaluates"), 0.0);
    let r_norm: f64 = rule.iter().map(|(r, w)| w * r * r * psi(r).norm_sqr()).sum();
    let k_norm = term.spectrum.norm_sqr();
    let parseval = (r_norm - k_norm).abs() / k_norm;
    report.real(&format!("{label}_tail_fraction"), truncation_tail(psi, &rule));
    report.check(Check::at_most(format!("{label}_parseval"), parseval, PARSEVAL_TOL));

    let back = fourier_bessel_forward(psi, term.mu, term.spectrum.nodes(), &rule)?;
    let samples = term.spectrum.samples();
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let sup = back.iter().zip(samples).fold(0.0f64, |m, (b, s)| m.max((b - s).norm()));
    report.check(Check::at_most(format!("{label}_round_trip"), sup / peak, ROUND_TRIP_TOL));
    Ok(())
}

fn radial_eigen(cfg: &SpectralConfig, term: &SectionTerm<f64>, label: &str, report: &mut Report) -> Result<()> {
    let mu = term.mu;
    for &k in &cfg.eigen_ks {
        let mut worst = 0.0f64;
        for &r in &cfg.eigen_rs {
            let g = |s: f64| scaled_bessel(mu, k * s).expect("kernel evaluates");
            let lhs = radial_hamiltonian_fd(mu, g, r, 1e-2 * r.min(1.0));
            let rhs = 0.5 * k * k * g(r);
            // envelope scale so nodes of the kernel do not blow up the ratio
            let scale = 0.5 * k * k * g(r).abs().max((k * r).recip());
            worst = worst.max((lhs - rhs).abs() / scale);
        }
        report.check(Check::at_most(format!("{label}_radial_eigen_k{k}"), worst, EIGEN_TOL));
    }
    Ok(())
}

fn angular(cfg: &SpectralConfig, report: &mut Report) -> Result<()> {
    let n = cfg.section.n;
    let u = Point3::from_spherical(1.0, cfg.angular_theta, cfg.angular_phi);
    for &[ell, m] in &cfg.angular_modes {
        let table = HarmonicTable::<f64>::new(AngularMode::new(n, ell, m)?);
        for chart in [ChartId::Plus, ChartId::Minus] {
            let res = angular_momentum_check(&table, chart, &u, cfg.angular_step)?;
            let tag = format!("n{n}_ell{ell}_m{m}_{chart:?}").to_lowercase();
            report.real(&format!("harmonic_modulus_{tag}"), res.modulus);
            report.check(Check::at_most(format!("l3_residual_{tag}"), res.r3, L3_TOL * res.modulus));
            let l2_scale = L2_TOL * (ell * (ell + 1)) as f64 * res.modulus;
            report.check(Check::at_most(format!("l2_residual_{tag}"), res.r2, l2_scale));
        }
    }
    Ok(())
}

fn asymptotics(cfg: &SpectralConfig, section: &SectionInD<f64>, atlas: &ChartAtlas<f64>, report: &mut Report) -> Result<()> {
    let first = &section.terms[0];
    let u = point(cfg.slope_direction)?.normalized();
    let chart = atlas.preferred_chart(&u)?;
    let mu = first.mu;
    let single = SectionInD { charge: section.charge, terms: vec![first.clone()] };
    let modulus = |r: f64| Ok(single.eval_unchecked(chart, &(u * r))?.norm());

    let small = power_slope(cfg.small_r_window, modulus)?;
    report.real("small_r_slope", small);
    report.check(Check::near("small_r_slope", small, mu - 0.5, SLOPE_TOL));

    let grad = power_slope(cfg.small_r_window, |r| {
        let x = u * r;
        let mut acc = 0.0;
        for k in 0..3 {
            acc += single.covariant_derivative_fd(atlas, chart, &x, k, 1e-3 * r)?.norm_sqr();
        }
        Ok(acc.sqrt())
    })?;
    report.real("small_r_gradient_slope", grad);
    report.check(Check::near("small_r_gradient_slope", grad, mu - 1.5, SLOPE_TOL));

    let [lo, hi] = cfg.narrow_band;
    let narrow_spec = SectionSpec {
        n: section.charge,
        terms: vec![TermSpec {
            re: 1.0,
            im: 0.0,
            ell: first.mode.ell,
            m: first.mode.m,
            k_lo: lo,
            k_hi: hi,
            amplitude: 1.0,
        }],
    };
    let narrow = SectionInD::from_spec(&narrow_spec)?;
    let period = std::f64::consts::TAU / (0.5 * (lo + hi));
    let large = envelope_slope(cfg.large_r_window, period, |r| Ok(narrow.eval_unchecked(chart, &(u * r))?.norm()))?;
    report.real("large_r_envelope_slope", large);
    report.check(Check::near("large_r_envelope_slope", large, -1.0, LARGE_R_TOL));

    // a broad band decays faster than 1/r; reported only
    let broad_period = std::f64::consts::TAU / first.spectrum.profile.k_lo;
    let broad = envelope_slope(cfg.large_r_window, broad_period, |r| {
        Ok(single.eval_unchecked(chart, &(u * r))?.norm().max(f64::MIN_POSITIVE))
    })?;
    report.real("large_r_envelope_slope_section", broad);
    Ok(())
}

fn semigroup(cfg: &SpectralConfig, section: &SectionInD<f64>, report: &mut Report) -> Result<()> {
    let [t1, t2] = cfg.semigroup_times;
    let max_diff = |a: &SectionInD<f64>, b: &SectionInD<f64>| {
        a.terms.iter().zip(&b.terms).fold(0.0f64, |m, (x, y)| {
            x.spectrum.samples().iter().zip(y.spectrum.samples()).fold(m, |m, (p, q)| m.max((p - q).abs()))
        })
    };
    let identity = section.semigroup_apply(0.0)?;
    report.check(Check::at_most("semigroup_identity", max_diff(&identity, section), 0.0));
    let composed = section.semigroup_apply(t2)?.semigroup_apply(t1)?;
    let direct = section.semigroup_apply(t1 + t2)?;
    report.check(Check::at_most("semigroup_law", max_diff(&composed, &direct), SEMIGROUP_TOL));
    let norm0 = section.norm();
    let norm_t = section.semigroup_apply(t1.max(t2))?.norm();
    report.real("norm", norm0);
    report.real("norm_evolved", norm_t);
    report.check(Check::at_most("semigroup_contraction", norm_t / norm0, 1.0 - f64::EPSILON));
    Ok(())
}

fn laplacian(cfg: &SpectralConfig, section: &SectionInD<f64>, atlas: &ChartAtlas<f64>, report: &mut Report) -> Result<()> {
    let h_section = section.hamiltonian_apply();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let [r_lo, r_hi] = cfg.laplacian_radii;
    let mut worst = 0.0f64;
    for _ in 0..cfg.laplacian_points {
        let c: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let r: f64 = rng.random_range(r_lo..r_hi);
        let s = (1.0 - c * c).sqrt();
        let x = Point3::new(r * s * phi.cos(), r * s * phi.sin(), r * c);
        let chart = atlas.preferred_chart(&x)?;
        let fd = section.covariant_laplacian_fd(atlas, chart, &x, cfg.laplacian_step)? * -0.5;
        let exact = h_section.eval(atlas, chart, &x)?.value;
        worst = worst.max((fd - exact).norm() / exact.norm());
    }
    report.check(Check::at_most("hamiltonian_fd_vs_spectral", worst, LAPLACIAN_TOL));
    Ok(())
}

fn chart_relation(cfg: &SpectralConfig, section: &SectionInD<f64>, atlas: &ChartAtlas<f64>, report: &mut Report) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let d = atlas.delta;
    let mut worst = 0.0f64;
    for _ in 0..64 {
        let c: f64 = rng.random_range(-d..d);
        let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let r: f64 = rng.random_range(0.2..6.0);
        let s = (1.0 - c * c).sqrt();
        let x = Point3::new(r * s * phi.cos(), r * s * phi.sin(), r * c);
        let plus = section.eval(atlas, ChartId::Plus, &x)?.value;
        let minus = section.eval(atlas, ChartId::Minus, &x)?;
        let moved = FiberValue::in_chart(&minus, atlas, ChartId::Plus, &x)?.value;
        worst = worst.max((plus - moved).norm() / plus.norm().max(1e-300));
    }
    report.check(Check::at_most("chart_relation", worst, CHART_TOL));
    Ok(())
}

pub fn run(cfg: &SpectralConfig) -> Result<Report> {
    cfg.validate()?;
    let atlas = cfg.atlas.build()?;
    let section = SectionInD::<f64>::from_spec(&cfg.section)?;
    let mut report = Report::new("spectral", cfg.seed, serde_json::to_value(cfg)?);

    let mut min_mu = f64::INFINITY;
    for (i, term) in section.terms.iter().enumerate() {
        let label = term_label(term, i);
        report.real(&format!("mu_n{}_ell{}", term.mode.n, term.mode.ell), term.mu);
        min_mu = min_mu.min(term.mu);
        parseval_and_round_trip(cfg, term, &label, &mut report)?;
        radial_eigen(cfg, term, &label, &mut report)?;
    }
    if section.charge != 0 {
        // ell(ell+1) - n^2 >= |n| >= 1
        report.check(Check::at_most("mu_lower_bound", 0.5 * 5f64.sqrt() - min_mu, 1e-12));
    }
    angular(cfg, &mut report)?;
    asymptotics(cfg, &section, &atlas, &mut report)?;
    semigroup(cfg, &section, &mut report)?;
    laplacian(cfg, &section, &atlas, &mut report)?;
    chart_relation(cfg, &section, &atlas, &mut report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = (1..10).map(|i| (i as f64).ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -1.5 * x + 0.3).collect();
        assert!((fit_slope(&xs, &ys) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn envelope_of_decaying_cosine() {
        let s = envelope_slope([100.0, 1000.0], std::f64::consts::TAU, |r| Ok((r.cos() / r).abs())).unwrap();
        assert!((s + 1.0).abs() < 0.01, "{s}");
    }
}
