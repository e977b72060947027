use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::point::{Covector3, Point3};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// The two trivializations of the monopole bundle: `Plus` covers everything
/// except a cone around the negative x3 axis, `Minus` the mirror image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartId {
    Plus,
    Minus,
}

impl ChartId {
    pub fn other(self) -> Self {
        match self {
            ChartId::Plus => ChartId::Minus,
            ChartId::Minus => ChartId::Plus,
        }
    }

    /// +1 for `Plus`, -1 for `Minus`.
    pub fn sign(self) -> i32 {
        match self {
            ChartId::Plus => 1,
            ChartId::Minus => -1,
        }
    }
}

/// Azimuthal angle in (-pi, pi].
pub fn azimuth<T: Real>(x: &Point3<T>) -> Result<T> {
    if x.x1 == T::zero() && x.x2 == T::zero() {
        return Err(Error::UndefinedAzimuth);
    }
    let phi = x.x2.atan2(x.x1);
    // atan2 returns -pi for (negative, -0.0); fold onto the closed end.
    Ok(if phi == -T::PI() { T::PI() } else { phi })
}

/// Global configuration of the two-chart atlas for a monopole of charge `n`.
///
/// `U+` is `{x3/|x| > -delta}`, `U-` is `{x3/|x| < delta}`. `switch_margin` is
/// the fraction of `delta` at which the stochastic transport changes charts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartAtlas<T> {
    pub charge: i32,
    pub delta: T,
    pub switch_margin: T,
}

impl<T: Real> Default for ChartAtlas<T> {
    fn default() -> Self {
        Self { charge: 1, delta: T::of(0.5), switch_margin: T::of(0.5) }
    }
}

impl<T: Real> ChartAtlas<T> {
    pub fn new(charge: i32, delta: T, switch_margin: T) -> Result<Self> {
        let open_unit = |v: T| v > T::zero() && v < T::one();
        if !open_unit(delta) {
            return Err(Error::InvalidAtlas(format!("delta must lie in (0,1), got {delta}")));
        }
        if !open_unit(switch_margin) {
            return Err(Error::InvalidAtlas(format!(
                "switch_margin must lie in (0,1), got {switch_margin}"
            )));
        }
        Ok(Self { charge, delta, switch_margin })
    }

    pub fn with_charge(charge: i32) -> Self {
        Self { charge, ..Self::default() }
    }

    /// Hysteresis threshold on x3/|x| at which a path leaves `chart`.
    #[inline]
    pub fn switch_threshold(&self, chart: ChartId) -> T {
        let t = self.delta * self.switch_margin;
        match chart {
            ChartId::Plus => -t,
            ChartId::Minus => t,
        }
    }

    #[inline]
    pub(crate) fn contains_cos(&self, chart: ChartId, cos_polar: T) -> bool {
        match chart {
            ChartId::Plus => cos_polar > -self.delta,
            ChartId::Minus => cos_polar < self.delta,
        }
    }

    pub fn chart_contains(&self, chart: ChartId, x: &Point3<T>) -> Result<bool> {
        let r = x.norm();
        if r == T::zero() {
            return Err(Error::Origin);
        }
        Ok(self.contains_cos(chart, x.x3 / r))
    }

    pub fn in_overlap(&self, x: &Point3<T>) -> Result<bool> {
        Ok(self.chart_contains(ChartId::Plus, x)? && self.chart_contains(ChartId::Minus, x)?)
    }

    /// The chart a walker starting at `x` uses: `Plus` in the closed upper
    /// half space, `Minus` otherwise.
    pub fn preferred_chart(&self, x: &Point3<T>) -> Result<ChartId> {
        if x.norm() == T::zero() {
            return Err(Error::Origin);
        }
        Ok(if x.x3 >= T::zero() { ChartId::Plus } else { ChartId::Minus })
    }

    /// `exp(2 i n phi(x))`: the factor taking `Minus` fiber values to `Plus`.
    pub fn transition_phase(&self, x: &Point3<T>) -> Result<Complex<T>> {
        if !self.in_overlap(x)? {
            return Err(Error::OutsideOverlap);
        }
        let phi = azimuth(x)?;
        Ok(Complex::from_polar(T::one(), T::of_int(2 * self.charge as i64) * phi))
    }

    /// Scalar `c` with `A = c * (x2, -x1, 0)` in the given chart. No chart check.
    #[inline]
    pub fn connection_coefficient(&self, chart: ChartId, x: &Point3<T>) -> T {
        let n = T::of_int(self.charge as i64);
        let r = x.norm();
        match chart {
            // x3 + |x|, rewritten for x3 < 0 to avoid cancellation
            ChartId::Plus => {
                let s = if x.x3 >= T::zero() { x.x3 + r } else { x.rho_sqr() / (r - x.x3) };
                -n / (r * s)
            }
            ChartId::Minus => {
                let s = if x.x3 <= T::zero() { r - x.x3 } else { x.rho_sqr() / (r + x.x3) };
                n / (r * s)
            }
        }
    }

    /// Connection one-form `A+-` at `x` in Cartesian components.
    pub fn connection_form(&self, chart: ChartId, x: &Point3<T>) -> Result<Covector3<T>> {
        if !self.chart_contains(chart, x)? {
            return Err(Error::OutOfChart(chart));
        }
        Ok(self.connection_unchecked(chart, x))
    }

    #[inline]
    pub(crate) fn connection_unchecked(&self, chart: ChartId, x: &Point3<T>) -> Covector3<T> {
        if self.charge == 0 {
            return Covector3::new(T::zero(), T::zero(), T::zero());
        }
        let c = self.connection_coefficient(chart, x);
        Covector3::new(c * x.x2, -c * x.x1, T::zero())
    }
}

/// A point of the fiber over some base point, expressed in one chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberValue<T> {
    pub chart: ChartId,
    pub value: Complex<T>,
}

impl<T: Real> FiberValue<T> {
    pub fn new(chart: ChartId, value: Complex<T>) -> Self {
        Self { chart, value }
    }

    /// Re-expresses the value in `target` at base point `x`.
    pub fn in_chart(&self, atlas: &ChartAtlas<T>, target: ChartId, x: &Point3<T>) -> Result<Self> {
        if target == self.chart {
            return Ok(*self);
        }
        let g = atlas.transition_phase(x)?;
        let value = match target {
            ChartId::Plus => self.value * g,
            ChartId::Minus => self.value * g.conj(),
        };
        Ok(Self { chart: target, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn atlas(n: i32) -> ChartAtlas<f64> {
        ChartAtlas::new(n, 0.5, 0.5).unwrap()
    }

    #[test]
    fn chart_membership() {
        let a = atlas(1);
        assert!(a.chart_contains(ChartId::Plus, &Point3::new(0.0, 0.0, 1.0)).unwrap());
        assert!(!a.chart_contains(ChartId::Plus, &Point3::new(0.0, 0.0, -1.0)).unwrap());
        // x3/|x| = -0.371 > -0.5
        let c = -0.371f64;
        let x = Point3::new((1.0 - c * c).sqrt(), 0.0, c) * 3.0;
        assert_abs_diff_eq!(x.cos_polar(), c, epsilon = 1e-15);
        assert!(a.chart_contains(ChartId::Plus, &x).unwrap());
        assert!(a.chart_contains(ChartId::Minus, &x).unwrap());
        assert_eq!(a.chart_contains(ChartId::Plus, &Point3::zero()), Err(Error::Origin));
        // boundary is open
        let edge = Point3::new((1.0f64 - 0.25).sqrt(), 0.0, -0.5);
        assert!(!a.chart_contains(ChartId::Plus, &edge).unwrap());
    }

    #[test]
    fn azimuth_branch() {
        assert_eq!(azimuth(&Point3::new(1.0, 0.0, 0.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(azimuth(&Point3::new(0.0, 1.0, 0.0)).unwrap(), PI / 2.0);
        assert_eq!(azimuth(&Point3::new(-1.0, 0.0, 5.0)).unwrap(), PI);
        assert_eq!(azimuth(&Point3::new(-1.0, -0.0, 5.0)).unwrap(), PI);
        assert_eq!(azimuth(&Point3::new(0.0, 0.0, 5.0)), Err(Error::UndefinedAzimuth));
    }

    #[test]
    fn transition_phase_values() {
        let g = atlas(1).transition_phase(&Point3::new(1.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(g.re, 1.0);
        assert_abs_diff_eq!(g.im, 0.0);
        let g = atlas(1).transition_phase(&Point3::new(0.0, 1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(g.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.im, 0.0, epsilon = 1e-15);
        let g = atlas(2).transition_phase(&Point3::new(0.0, 1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(g.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.im, 0.0, epsilon = 1e-15);
        assert_eq!(
            atlas(1).transition_phase(&Point3::new(0.0, 0.1, 1.0)),
            Err(Error::OutsideOverlap)
        );
    }

    #[test]
    fn connection_values() {
        let a = atlas(1);
        let ap = a.connection_form(ChartId::Plus, &Point3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(ap.to_array(), [0.0, 1.0, 0.0]);
        let on_axis = a.connection_form(ChartId::Plus, &Point3::new(0.0, 0.0, 2.0)).unwrap();
        assert_eq!(on_axis.to_array().map(f64::abs), [0.0, 0.0, 0.0]);
        let am = a.connection_form(ChartId::Minus, &Point3::new(1.0, 0.0, 0.0)).unwrap();
        let diff = ap - am;
        assert_abs_diff_eq!(diff.c1, 0.0);
        assert_abs_diff_eq!(diff.c2, 2.0);
        assert_abs_diff_eq!(diff.c3, 0.0);
        assert_eq!(
            a.connection_form(ChartId::Plus, &Point3::new(0.0, 0.0, -1.0)),
            Err(Error::OutOfChart(ChartId::Plus))
        );
        let zero = atlas(0).connection_form(ChartId::Minus, &Point3::new(0.3, -0.2, 0.1)).unwrap();
        assert_eq!(zero.to_array(), [0.0; 3]);
    }

    #[test]
    fn fiber_reexpression_round_trip() {
        let a = atlas(3);
        let x = Point3::new(0.4, -0.7, 0.1);
        let v = FiberValue::new(ChartId::Minus, Complex::new(0.3, -1.2));
        let plus = v.in_chart(&a, ChartId::Plus, &x).unwrap();
        assert_abs_diff_eq!(plus.value.norm(), v.value.norm(), epsilon = 1e-15);
        let back = plus.in_chart(&a, ChartId::Minus, &x).unwrap();
        assert_abs_diff_eq!(back.value.re, v.value.re, epsilon = 1e-14);
        assert_abs_diff_eq!(back.value.im, v.value.im, epsilon = 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ChartAtlas::new(1, 0.0, 0.5).is_err());
        assert!(ChartAtlas::new(1, 1.0, 0.5).is_err());
        assert!(ChartAtlas::new(1, 0.5, 1.0).is_err());
    }
}
