//! Radial profiles and the Fourier-Bessel transform with kernel
//! `(k r)^(-1/2) J_mu(k r)` and measures `k^2 dk`, `r^2 dr`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{composite_gauss_legendre, gauss_legendre, scaled_bessel, QuadratureRule};

/// Gauss-Legendre nodes used on the support of a spectrum.
pub const SPECTRAL_NODES: usize = 256;

/// Kernel oscillations over the support that the base rule still resolves.
const MAX_BASE_OSCILLATIONS: f64 = 24.0;
/// Nodes and oscillations per panel once the base rule is exceeded.
const PANEL_NODES: usize = 64;
const PANEL_OSCILLATIONS: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    SmoothBump,
}

/// Band-limited radial spectrum `amplitude * exp(-1/(1 - u^2))`, with `u`
/// the position inside `(k_lo, k_hi)` rescaled to `(-1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile<T> {
    pub kind: ProfileKind,
    pub k_lo: T,
    pub k_hi: T,
    pub amplitude: T,
}

impl<T: Real> RadialProfile<T> {
    pub fn bump(k_lo: T, k_hi: T, amplitude: T) -> Result<Self> {
        if !(k_lo > T::zero() && k_lo < k_hi && k_hi.is_finite() && amplitude.is_finite()) {
            return Err(Error::InvalidSection(format!(
                "bump support must satisfy 0 < k_lo < k_hi < inf, got [{k_lo}, {k_hi}]"
            )));
        }
        Ok(Self { kind: ProfileKind::SmoothBump, k_lo, k_hi, amplitude })
    }

    pub fn value(&self, k: T) -> T {
        let u = (T::of(2.0) * k - self.k_lo - self.k_hi) / (self.k_hi - self.k_lo);
        let q = T::one() - u * u;
        if q <= T::zero() {
            return T::zero();
        }
        self.amplitude * (-q.recip()).exp()
    }
}

/// A profile after heat evolution and powers of the radial Hamiltonian,
/// `psi#(k) e^{-k^2 t / 2} (k^2 / 2)^p`, sampled on a Gauss-Legendre rule
/// over its support.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub profile: RadialProfile<T>,
    pub heat_time: T,
    pub energy_power: u32,
    nodes: Vec<T>,
    weights: Vec<T>,
    samples: Vec<T>,
    panel_rule: QuadratureRule<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(profile: RadialProfile<T>) -> Self {
        Self::with_nodes(profile, SPECTRAL_NODES)
    }

    pub fn with_nodes(profile: RadialProfile<T>, npts: usize) -> Self {
        let rule = gauss_legendre(npts.max(1), profile.k_lo, profile.k_hi).expect("validated support");
        let samples = rule.nodes.iter().map(|&k| profile.value(k)).collect();
        Self {
            profile,
            heat_time: T::zero(),
            energy_power: 0,
            nodes: rule.nodes,
            weights: rule.weights,
            samples,
            panel_rule: gauss_legendre(PANEL_NODES, -T::one(), T::one()).expect("valid rule"),
        }
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    /// Closed-form value at any `k`.
    pub fn value(&self, k: T) -> T {
        let half_k2 = T::of(0.5) * k * k;
        self.profile.value(k) * (-half_k2 * self.heat_time).exp() * half_k2.powi(self.energy_power as i32)
    }

    /// Multiplies by `exp(-k^2 t / 2)`.
    pub fn evolve(&self, t: T) -> Result<Self> {
        if !(t >= T::zero()) {
            return Err(Error::NegativeTime(t.to_f64_lossy()));
        }
        let mut out = self.clone();
        out.heat_time = out.heat_time + t;
        for (s, &k) in out.samples.iter_mut().zip(&self.nodes) {
            *s = *s * (-T::of(0.5) * k * k * t).exp();
        }
        Ok(out)
    }

    /// Multiplies by `k^2 / 2`.
    pub fn energy(&self) -> Self {
        let mut out = self.clone();
        out.energy_power += 1;
        for (s, &k) in out.samples.iter_mut().zip(&self.nodes) {
            *s = *s * T::of(0.5) * k * k;
        }
        out
    }

    /// `int psi#(k)^2 k^2 dk`.
    pub fn norm_sqr(&self) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.samples)
            .map(|((&k, &w), &s)| w * k * k * s * s)
            .sum()
    }

    /// `int psi#(k) phi#(k) k^2 dk` over the common support.
    pub fn inner(&self, other: &Self) -> T {
        let lo = self.profile.k_lo.max(other.profile.k_lo);
        let hi = self.profile.k_hi.min(other.profile.k_hi);
        if !(lo < hi) {
            return T::zero();
        }
        let rule = gauss_legendre(SPECTRAL_NODES, lo, hi).expect("nonempty overlap");
        rule.integrate(|k| k * k * self.value(k) * other.value(k))
    }
}

/// `psi(r) = int (k r)^(-1/2) J_mu(k r) psi#(k) k^2 dk`.
///
/// Uses the stored samples while the kernel makes few oscillations across the
/// support; at large `r` switches to composite panels on the closed form.
pub fn fourier_bessel_inverse<T: Real>(spectrum: &Spectrum<T>, mu: T, r: T) -> Result<T> {
    let (lo, hi) = (spectrum.profile.k_lo, spectrum.profile.k_hi);
    let oscillations = (hi - lo) * r / T::TAU();
    if oscillations <= T::of(MAX_BASE_OSCILLATIONS) {
        let mut acc = T::zero();
        for ((&k, &w), &s) in spectrum.nodes.iter().zip(&spectrum.weights).zip(&spectrum.samples) {
            acc = acc + w * k * k * s * scaled_bessel(mu, k * r)?;
        }
        return Ok(acc);
    }
    let panels = (oscillations / T::of(PANEL_OSCILLATIONS)).ceil().to_usize().unwrap_or(1).max(1);
    let width = (hi - lo) / T::of_int(panels as i64);
    let half = T::of(0.5) * width;
    let mut acc = T::zero();
    for p in 0..panels {
        let mid = lo + (T::of_int(p as i64) + T::of(0.5)) * width;
        for (t, w) in spectrum.panel_rule.iter() {
            let k = mid + half * t;
            acc = acc + half * w * k * k * spectrum.value(k) * scaled_bessel(mu, k * r)?;
        }
    }
    Ok(acc)
}

/// Panel layout for the forward transform's `r` integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid<T> {
    pub r_min: T,
    pub r_max: T,
    /// Panels double in width from `r_min` until they reach this width.
    pub max_panel_width: T,
    pub nodes_per_panel: usize,
}

impl<T: Real> Default for RadialGrid<T> {
    fn default() -> Self {
        Self { r_min: T::of(1e-6), r_max: T::of(1e3), max_panel_width: T::one(), nodes_per_panel: 16 }
    }
}

impl<T: Real> RadialGrid<T> {
    pub fn edges(&self) -> Vec<T> {
        let mut edges = vec![self.r_min];
        let mut e = self.r_min;
        while e < self.r_max {
            e = (e + e.min(self.max_panel_width)).min(self.r_max);
            edges.push(e);
        }
        edges
    }

    pub fn rule(&self) -> Result<QuadratureRule<T>> {
        if !(self.r_min > T::zero() && self.r_min < self.r_max && self.max_panel_width > T::zero()) {
            return Err(Error::InvalidArgument("radial grid needs 0 < r_min < r_max and a positive panel width".into()));
        }
        composite_gauss_legendre(self.nodes_per_panel, &self.edges())
    }
}

/// Fraction of `int |f| r^2 dr` carried by the outer tenth of the window,
/// a proxy for the truncation error at `r_max`.
pub fn truncation_tail<T: Real, F: Fn(T) -> Complex<T>>(f: F, r_rule: &QuadratureRule<T>) -> T {
    let cut = T::of(0.9) * r_rule.interval.1;
    let (mut total, mut tail) = (T::zero(), T::zero());
    for (r, w) in r_rule.iter() {
        let v = w * r * r * f(r).norm();
        total = total + v;
        if r > cut {
            tail = tail + v;
        }
    }
    if total > T::zero() {
        tail / total
    } else {
        T::zero()
    }
}

/// Tail fraction above which the forward transform logs a warning.
pub const TAIL_BUDGET: f64 = 1e-10;

/// `psi#(k) = int (k r)^(-1/2) J_mu(k r) psi(r) r^2 dr` at each `k` of `k_grid`.
pub fn fourier_bessel_forward<T: Real, F: Fn(T) -> Complex<T>>(
    f: F,
    mu: T,
    k_grid: &[T],
    r_rule: &QuadratureRule<T>,
) -> Result<Vec<Complex<T>>> {
    let weighted: Vec<(T, Complex<T>)> = r_rule.iter().map(|(r, w)| (r, f(r) * (w * r * r))).collect();
    let tail = truncation_tail(&f, r_rule);
    if tail > T::of(TAIL_BUDGET) {
        log::warn!("Fourier-Bessel forward transform: tail fraction {tail} beyond r_max exceeds {TAIL_BUDGET}");
    }
    k_grid
        .iter()
        .map(|&k| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &(r, v) in &weighted {
                acc = acc + v * scaled_bessel(mu, k * r)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Radial Hamiltonian `-(f'' + 2 f'/r)/2 + (mu^2 - 1/4) f / (2 r^2)` by
/// five-point central differences with step `h`.
pub fn radial_hamiltonian_fd<T: Real, F: Fn(T) -> T>(mu: T, f: F, r: T, h: T) -> T {
    let twelve = T::of(12.0);
    let (fm2, fm1, f0, fp1, fp2) = (f(r - h - h), f(r - h), f(r), f(r + h), f(r + h + h));
    let d1 = (fm2 - T::of(8.0) * fm1 + T::of(8.0) * fp1 - fp2) / (twelve * h);
    let d2 = (-fm2 + T::of(16.0) * fm1 - T::of(30.0) * f0 + T::of(16.0) * fp1 - fp2) / (twelve * h * h);
    let half = T::of(0.5);
    -half * (d2 + T::of(2.0) * d1 / r) + (mu * mu - T::of(0.25)) * f0 * half / (r * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(lo: f64, hi: f64) -> Spectrum<f64> {
        Spectrum::new(RadialProfile::bump(lo, hi, 1.0).unwrap())
    }

    #[test]
    fn bump_support_and_peak() {
        let p = RadialProfile::bump(1.0, 3.0, 2.0).unwrap();
        assert_eq!(p.value(1.0), 0.0);
        assert_eq!(p.value(3.5), 0.0);
        assert!((p.value(2.0) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(RadialProfile::bump(0.0, 1.0, 1.0).is_err());
        assert!(RadialProfile::bump(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn semigroup_law_and_identity() {
        let s = bump(1.0, 3.0);
        assert_eq!(s.evolve(0.0).unwrap().samples(), s.samples());
        let a = s.evolve(0.2).unwrap().evolve(0.3).unwrap();
        let b = s.evolve(0.5).unwrap();
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1e-300));
        }
        assert!(s.evolve(-0.1).is_err());
    }

    #[test]
    fn norm_decreases_under_heat() {
        let s = bump(0.5, 2.0);
        let n0 = s.norm_sqr();
        let n1 = s.evolve(0.1).unwrap().norm_sqr();
        let n2 = s.evolve(1.0).unwrap().norm_sqr();
        assert!(n1 < n0 && n2 < n1);
    }

    #[test]
    fn samples_match_closed_form() {
        let s = bump(1.0, 3.0).evolve(0.4).unwrap().energy().energy();
        for (&k, &v) in s.nodes().iter().zip(s.samples()) {
            assert!((s.value(k) - v).abs() < 1e-14 * v.abs().max(1e-300));
        }
        assert_eq!(s.energy_power, 2);
    }

    #[test]
    fn inner_product_matches_norm() {
        let s = bump(1.0, 3.0);
        assert!((s.inner(&s) - s.norm_sqr()).abs() < 1e-12 * s.norm_sqr());
        assert_eq!(s.inner(&bump(3.5, 4.0)), 0.0);
    }

    #[test]
    fn inverse_scales_linearly() {
        let p = RadialProfile::bump(1.0, 3.0, 1.0).unwrap();
        let q = RadialProfile { amplitude: 2.5, ..p };
        let a = fourier_bessel_inverse(&Spectrum::new(p), 1.25f64.sqrt(), 1.3).unwrap();
        let b = fourier_bessel_inverse(&Spectrum::new(q), 1.25f64.sqrt(), 1.3).unwrap();
        assert!((b - 2.5 * a).abs() < 1e-14);
    }

    #[test]
    fn radial_eigenfunction_identity() {
        let mu = 1.25f64.sqrt();
        for &k in &[1.0f64, 2.0] {
            for &r in &[0.7f64, 1.9, 4.4, 9.1] {
                let g = |s: f64| scaled_bessel(mu, k * s).unwrap();
                let lhs = radial_hamiltonian_fd(mu, g, r, 1e-2 * r.min(1.0));
                let rhs = 0.5 * k * k * g(r);
                let scale = 0.5 * k * k * g(r).abs().max((k * r).recip());
                assert!((lhs - rhs).abs() < 1e-6 * scale, "k={k} r={r} {lhs} {rhs}");
            }
        }
    }

    #[test]
    fn grid_edges() {
        let g = RadialGrid::<f64>::default();
        let e = g.edges();
        assert_eq!(e[0], 1e-6);
        assert_eq!(*e.last().unwrap(), 1e3);
        assert!(e.windows(2).all(|p| p[1] > p[0] && p[1] - p[0] <= 1.0 + 1e-12));
    }
}
