//! Monopole harmonics in Cartesian form.
//!
//! With `a = |n + m|`, `b = |n - m|`, `s = ell - max(|n|, |m|)` and
//! `xi = x3/|x|`, the polar profile is
//! `Theta(xi) = (1 - xi)^(a/2) (1 + xi)^(b/2) P^{a,b}_s(xi)`, and the chart
//! representations are `Theta e^{i(m + n) phi}` on `U+` and
//! `Theta e^{i(m - n) phi}` on `U-`. Both are written through
//! `(x1 +- i x2)/|x|` so they stay smooth on the axis inside their chart.

use num_complex::Complex;

use super::mode::AngularMode;
use crate::error::{Error, Result};
use crate::geometry::{ChartAtlas, ChartId, Point3};
use crate::scalar::Real;
use crate::special::{gauss_legendre, jacobi_polynomial};

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicTable<T> {
    pub mode: AngularMode,
    /// Positive constant making the harmonic unit-norm on the sphere.
    pub normalization: T,
    a: i32,
    b: i32,
    degree: usize,
}

impl<T: Real> HarmonicTable<T> {
    pub fn new(mode: AngularMode) -> Self {
        let (n, m) = (mode.n, mode.m);
        let a = (n + m).abs();
        let b = (n - m).abs();
        let degree = (mode.ell - n.abs().max(m.abs())) as usize;
        let mut table = Self { mode, normalization: T::one(), a, b, degree };
        // Theta^2 is a polynomial of degree 2 ell, so this rule is exact
        let rule = gauss_legendre(mode.ell as usize + 2, -T::one(), T::one())
            .expect("valid Gauss-Legendre parameters");
        let mass = rule.integrate(|xi| {
            let th = table.polar_profile(xi);
            th * th
        });
        table.normalization = (T::one() / (T::of(2.0) * T::PI() * mass)).sqrt();
        table
    }

    fn jacobi(&self, xi: T) -> T {
        jacobi_polynomial(self.degree, T::of_int(self.a as i64), T::of_int(self.b as i64), xi)
    }

    /// Unnormalized `Theta(xi)`.
    pub fn polar_profile(&self, xi: T) -> T {
        let one = T::one();
        let half = T::of(0.5);
        (one - xi).max(T::zero()).powf(half * T::of_int(self.a as i64))
            * (one + xi).max(T::zero()).powf(half * T::of_int(self.b as i64))
            * self.jacobi(xi)
    }

    /// Value in `chart` at `x / |x|`, without checking chart membership.
    pub fn eval_unchecked(&self, chart: ChartId, x: &Point3<T>) -> Complex<T> {
        let r = x.norm();
        let xi = x.x3 / r;
        let (n, m) = (self.mode.n, self.mode.m);
        // base is 1 + xi (Plus) or 1 - xi (Minus), computed without cancellation
        let (winding, power, base, exponent) = match chart {
            ChartId::Plus => {
                let base = if x.x3 >= T::zero() { T::one() + xi } else { x.rho_sqr() / (r * (r - x.x3)) };
                ((m + n).signum(), self.a, base, (self.b - self.a) / 2)
            }
            ChartId::Minus => {
                let base = if x.x3 <= T::zero() { T::one() - xi } else { x.rho_sqr() / (r * (r + x.x3)) };
                ((m - n).signum(), self.b, base, (self.a - self.b) / 2)
            }
        };
        let w = Complex::new(x.x1 / r, T::of_int(winding as i64) * x.x2 / r);
        w.powi(power) * (self.normalization * base.powi(exponent) * self.jacobi(xi))
    }

    /// Value in `chart` at `x / |x|`.
    pub fn eval(&self, atlas: &ChartAtlas<T>, chart: ChartId, x: &Point3<T>) -> Result<Complex<T>> {
        if !atlas.chart_contains(chart, x)? {
            return Err(Error::OutOfChart(chart));
        }
        Ok(self.eval_unchecked(chart, x))
    }

    /// Value at spherical angles `(theta, phi)` in `chart`.
    pub fn eval_angles(&self, chart: ChartId, theta: T, phi: T) -> Complex<T> {
        self.eval_unchecked(chart, &Point3::from_spherical(T::one(), theta, phi))
    }
}

/// Eigen-residuals of the angular momentum operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularResiduals<T> {
    /// `|L^2 Y - ell(ell+1) Y|`
    pub r2: T,
    /// `|L3 Y - m Y|`
    pub r3: T,
    /// `|Y|` at the test point.
    pub modulus: T,
}

type AngleFn<'a, T> = dyn Fn(T, T) -> Complex<T> + 'a;

/// Applies `L_k` (k = 1, 2, 3) of the given chart by central differences in
/// `(theta, phi)`.
fn apply_l<T: Real>(
    k: usize,
    charge: i32,
    chart: ChartId,
    f: &AngleFn<'_, T>,
    theta: T,
    phi: T,
    h: T,
) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let two_h = T::of(2.0) * h;
    let d_phi = (f(theta, phi + h) - f(theta, phi - h)) / two_h;
    let n = T::of_int(charge as i64);
    let sigma = T::of_int(chart.sign() as i64);
    if k == 3 {
        return -i * d_phi - f(theta, phi) * (sigma * n);
    }
    let d_theta = (f(theta + h, phi) - f(theta - h, phi)) / two_h;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cot = ct / st;
    let gauge = n * (T::one() - sigma * ct) / st;
    match k {
        1 => i * (d_theta * sp + d_phi * (cot * cp)) - f(theta, phi) * (gauge * cp),
        _ => i * (-d_theta * cp + d_phi * (cot * sp)) - f(theta, phi) * (gauge * sp),
    }
}

/// Finite-difference check of `L3 Y = m Y` and `L^2 Y = ell(ell+1) Y` at the
/// direction of `u`. `L^2` is composed from nested first-order stencils.
pub fn angular_momentum_check<T: Real>(
    table: &HarmonicTable<T>,
    chart: ChartId,
    u: &Point3<T>,
    h_fd: T,
) -> Result<AngularResiduals<T>> {
    let r = u.norm();
    if r == T::zero() {
        return Err(Error::Origin);
    }
    let theta = (u.x3 / r).max(-T::one()).min(T::one()).acos();
    let phi = crate::geometry::azimuth(u)?;
    let mode = table.mode;
    let y = |th: T, ph: T| table.eval_angles(chart, th, ph);
    let y0 = y(theta, phi);

    let l3 = apply_l(3, mode.n, chart, &y, theta, phi, h_fd);
    let r3 = (l3 - y0 * T::of_int(mode.m as i64)).norm();

    let mut l2 = Complex::new(T::zero(), T::zero());
    for k in 1..=3 {
        let inner = |th: T, ph: T| apply_l(k, mode.n, chart, &y, th, ph, h_fd);
        l2 = l2 + apply_l(k, mode.n, chart, &inner, theta, phi, h_fd);
    }
    let ell = mode.ell as i64;
    let r2 = (l2 - y0 * T::of_int(ell * (ell + 1))).norm();
    Ok(AngularResiduals { r2, r3, modulus: y0.norm() })
}
