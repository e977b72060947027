//! Statistical properties of the path sampler, the stochastic integrals and
//! the Feynman-Kac estimator. Tolerances are CLT bands at fixed seeds.

use monofk_core::geometry::{ChartAtlas, ChartId, Point3};
use monofk_core::spectral::{SectionInD, SectionSpec};
use monofk_core::stochastic::{
    fk_estimate, ito_integral, sample_brownian_path, sample_brownian_path_into, stratonovich_integral, BrownianPath,
    FkConfig, PathConfig,
};

const C_BUDGET: f64 = 0.01;

#[test]
fn endpoint_variance_matches_time() {
    let t = 0.7;
    let x0 = Point3::new(1.0, -2.0, 0.5);
    let cfg = PathConfig::new(t, 1, 3, 0).unwrap();
    let mut buf = BrownianPath::default();
    let n = 1_000_000u64;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for i in 0..n {
        sample_brownian_path_into(x0, &cfg.with_index(i), &mut buf).unwrap();
        let d = buf.end().x1 - x0.x1;
        sum += d;
        sum_sq += d * d;
    }
    let mean = sum / n as f64;
    let var = (sum_sq - n as f64 * mean * mean) / (n - 1) as f64;
    assert!((var / t - 1.0).abs() < 0.01, "variance {var} vs {t}");
}

/// Paths from the north axis that stay inside chart Plus.
fn confined_paths(n: usize, steps: usize, seed: u64) -> Vec<BrownianPath<f64>> {
    let atlas = ChartAtlas::<f64>::with_charge(1);
    let x0 = Point3::new(0.1, 0.0, 1.0);
    (0..n as u64)
        .map(|i| sample_brownian_path(x0, &PathConfig::new(0.2, steps, seed, i).unwrap()).unwrap())
        .filter(|p| p.points.iter().all(|x| atlas.chart_contains(ChartId::Plus, x).unwrap()))
        .collect()
}

fn mean_and_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn ito_integral_of_connection_has_zero_mean() {
    let atlas = ChartAtlas::<f64>::with_charge(1);
    let paths = confined_paths(10_000, 200, 5);
    assert!(paths.len() > 9_900);
    let z: Vec<f64> = paths.iter().map(|p| ito_integral(p, |x| atlas.connection_form(ChartId::Plus, x).unwrap())).collect();
    let (m, se) = mean_and_stderr(&z);
    assert!(m.abs() < 4.0 * se, "mean {m} stderr {se}");
}

#[test]
fn ito_isometry() {
    let atlas = ChartAtlas::<f64>::with_charge(1);
    let paths = confined_paths(100_000, 100, 6);
    let a = |x: &Point3<f64>| atlas.connection_form(ChartId::Plus, x).unwrap();
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for p in &paths {
        let z: f64 = ito_integral(p, a);
        lhs += z * z;
        let h = p.times[1] - p.times[0];
        // left-point rule, matching the Ito sum
        rhs += p.points[..p.points.len() - 1].iter().map(|x| a(x).to_array().iter().map(|c| c * c).sum::<f64>() * h).sum::<f64>();
    }
    assert!((lhs / rhs - 1.0).abs() < 0.05, "E|Z|^2 = {} vs {}", lhs / paths.len() as f64, rhs / paths.len() as f64);
}

#[test]
fn stratonovich_and_ito_converge_for_connection() {
    let atlas = ChartAtlas::<f64>::with_charge(1);
    let paths = confined_paths(400, 1024, 8);
    let a = |x: &Point3<f64>| atlas.connection_form(ChartId::Plus, x).unwrap();
    let gap = |stride: usize| {
        let v: Vec<f64> = paths
            .iter()
            .map(|p| {
                let q = p.subsample(stride).unwrap();
                (stratonovich_integral(&q, a) - ito_integral(&q, a)).abs()
            })
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let (coarse, mid, fine) = (gap(16), gap(4), gap(1));
    assert!(coarse > mid && mid > fine);
    for ratio in [coarse / mid, mid / fine] {
        assert!((1.4..2.6).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn gradient_identity_residual_shrinks() {
    let g = |p: &Point3<f64>| p.x3 / p.norm();
    let grad = |p: &Point3<f64>| {
        let r = p.norm();
        let r3 = r * r * r;
        monofk_core::geometry::Covector3::new(-p.x3 * p.x1 / r3, -p.x3 * p.x2 / r3, (r * r - p.x3 * p.x3) / r3)
    };
    let x0 = Point3::new(0.8, 0.3, 0.6);
    let paths: Vec<_> =
        (0..300u64).map(|i| sample_brownian_path(x0, &PathConfig::new(0.1, 1024, 9, i).unwrap()).unwrap()).collect();
    let resid = |stride: usize| {
        paths
            .iter()
            .map(|p| {
                let q = p.subsample(stride).unwrap();
                (stratonovich_integral(&q, grad) - (g(&q.end()) - g(&q.start()))).abs()
            })
            .sum::<f64>()
            / paths.len() as f64
    };
    let (a, b, c) = (resid(16), resid(4), resid(1));
    // at least the sqrt(h) rate; the observed rate is first order
    assert!(a / b > 1.7 && b / c > 1.7, "{a} {b} {c}");
}

fn agreement(spec: SectionSpec, x: Point3<f64>, t: f64, n_paths: usize, n_steps: usize, seed: u64) {
    let atlas = ChartAtlas::<f64>::with_charge(spec.n);
    let section = SectionInD::from_spec(&spec).unwrap();
    let chart = atlas.preferred_chart(&x).unwrap();
    let exact = section.semigroup_apply(t).unwrap().eval(&atlas, chart, &x).unwrap().value;
    let est = fk_estimate(&section, &atlas, x, t, &FkConfig { n_paths, n_steps, seed, threads: None }).unwrap();
    let h = t / n_steps as f64;
    let diff = (est.mean - exact).norm();
    assert!(exact.norm() > 10.0 * est.stderr, "uninformative test point: {exact} vs stderr {}", est.stderr);
    assert!(diff <= 3.0 * est.stderr + C_BUDGET * h.sqrt(), "mc {} exact {exact} stderr {}", est.mean, est.stderr);
}

#[test]
fn fk_agrees_off_axis() {
    agreement(SectionSpec::single(1, 1, 0, 1.0, 3.0), Point3::new(0.8, 0.3, 0.6), 0.5, 20_000, 1_000, 21);
}

#[test]
fn fk_agrees_on_axis_where_harmonic_is_nonzero() {
    agreement(SectionSpec::single(1, 1, -1, 1.0, 3.0), Point3::new(0.0, 0.0, 1.0), 0.5, 20_000, 1_000, 22);
}

#[test]
fn fk_agrees_in_lower_chart_with_higher_charge() {
    agreement(SectionSpec::single(2, 2, 1, 0.5, 2.5), Point3::new(0.5, -0.6, -0.7), 0.4, 20_000, 1_000, 23);
}

#[test]
fn short_time_limit() {
    let spec = SectionSpec::single(1, 1, 0, 1.0, 3.0);
    let atlas = ChartAtlas::<f64>::with_charge(1);
    let section = SectionInD::from_spec(&spec).unwrap();
    let x = Point3::new(0.8, 0.3, 0.6);
    let t = 0.01;
    let psi = section.eval(&atlas, ChartId::Plus, &x).unwrap().value;
    let h_psi = section.hamiltonian_apply().eval(&atlas, ChartId::Plus, &x).unwrap().value;
    let est = fk_estimate(&section, &atlas, x, t, &FkConfig { n_paths: 20_000, n_steps: 100, seed: 4, threads: None }).unwrap();
    // e^{-Ht} Psi = Psi - t H Psi + O(t^2)
    let drift = 2.0 * t * h_psi.norm();
    assert!((est.mean - psi).norm() <= 3.0 * est.stderr + drift, "{} vs {psi}", est.mean);
}
