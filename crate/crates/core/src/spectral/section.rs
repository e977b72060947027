use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::harmonic::HarmonicTable;
use super::mode::AngularMode;
use super::radial::{fourier_bessel_inverse, RadialProfile, Spectrum};
use crate::error::{Error, Result};
use crate::geometry::{ChartAtlas, ChartId, FiberValue, Point3};
use crate::scalar::Real;

/// JSON form of one term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub re: f64,
    pub im: f64,
    pub ell: i32,
    pub m: i32,
    pub k_lo: f64,
    pub k_hi: f64,
    pub amplitude: f64,
}

/// JSON form of a section: `{"n": .., "terms": [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub n: i32,
    pub terms: Vec<TermSpec>,
}

impl SectionSpec {
    /// One bump-profile term with unit coefficient.
    pub fn single(n: i32, ell: i32, m: i32, k_lo: f64, k_hi: f64) -> Self {
        Self { n, terms: vec![TermSpec { re: 1.0, im: 0.0, ell, m, k_lo, k_hi, amplitude: 1.0 }] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionTerm<T> {
    pub coeff: Complex<T>,
    pub mode: AngularMode,
    pub mu: T,
    pub harmonic: HarmonicTable<T>,
    pub spectrum: Spectrum<T>,
}

impl<T: Real> SectionTerm<T> {
    pub fn new(coeff: Complex<T>, mode: AngularMode, profile: RadialProfile<T>) -> Self {
        Self { coeff, mode, mu: mode.mu(), harmonic: HarmonicTable::new(mode), spectrum: Spectrum::new(profile) }
    }

    /// Radial factor `psi(r)`.
    pub fn radial(&self, r: T) -> Result<T> {
        fourier_bessel_inverse(&self.spectrum, self.mu, r)
    }
}

/// Finite sum of `coeff * psi(|x|) * Y_{n,ell,m}(x/|x|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionInD<T> {
    pub charge: i32,
    pub terms: Vec<SectionTerm<T>>,
}

impl<T: Real> SectionInD<T> {
    pub fn zero(charge: i32) -> Self {
        Self { charge, terms: Vec::new() }
    }

    pub fn from_spec(spec: &SectionSpec) -> Result<Self> {
        let terms = spec
            .terms
            .iter()
            .map(|t| {
                let mode = AngularMode::new(spec.n, t.ell, t.m)?;
                let profile = RadialProfile::bump(T::of(t.k_lo), T::of(t.k_hi), T::of(t.amplitude))?;
                if !(t.re.is_finite() && t.im.is_finite()) {
                    return Err(Error::InvalidSection("non-finite coefficient".into()));
                }
                Ok(SectionTerm::new(Complex::new(T::of(t.re), T::of(t.im)), mode, profile))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { charge: spec.n, terms })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SectionSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSection(e.to_string()))?;
        Self::from_spec(&spec)
    }

    fn check_atlas(&self, atlas: &ChartAtlas<T>) -> Result<()> {
        if atlas.charge != self.charge {
            return Err(Error::InvalidSection(format!(
                "section has charge {} but the atlas has charge {}",
                self.charge, atlas.charge
            )));
        }
        Ok(())
    }

    /// Chart representation at `x` without membership checks.
    pub fn eval_unchecked(&self, chart: ChartId, x: &Point3<T>) -> Result<Complex<T>> {
        let r = x.norm();
        if r == T::zero() {
            return Err(Error::Origin);
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for term in &self.terms {
            acc = acc + term.coeff * term.harmonic.eval_unchecked(chart, x) * term.radial(r)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, atlas: &ChartAtlas<T>, chart: ChartId, x: &Point3<T>) -> Result<FiberValue<T>> {
        self.check_atlas(atlas)?;
        if !atlas.chart_contains(chart, x)? {
            return Err(Error::OutOfChart(chart));
        }
        Ok(FiberValue::new(chart, self.eval_unchecked(chart, x)?))
    }

    fn map_spectra<F: Fn(&Spectrum<T>) -> Result<Spectrum<T>>>(&self, f: F) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(SectionTerm { spectrum: f(&t.spectrum)?, ..t.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { charge: self.charge, terms })
    }

    /// `e^{-H t}` applied term by term.
    pub fn semigroup_apply(&self, t: T) -> Result<Self> {
        if !(t >= T::zero()) {
            return Err(Error::NegativeTime(t.to_f64_lossy()));
        }
        self.map_spectra(|s| s.evolve(t))
    }

    /// `H` applied term by term.
    pub fn hamiltonian_apply(&self) -> Self {
        self.map_spectra(|s| Ok(s.energy())).expect("energy multiplication cannot fail")
    }

    /// L2 norm over R^3; terms sharing a mode interfere, distinct modes are orthogonal.
    pub fn norm(&self) -> T {
        let mut acc = T::zero();
        for a in &self.terms {
            for b in self.terms.iter().filter(|b| b.mode == a.mode) {
                acc = acc + (a.coeff.conj() * b.coeff).re * a.spectrum.inner(&b.spectrum);
            }
        }
        acc.max(T::zero()).sqrt()
    }

    /// `(d_k - i A_k) Psi` by central differences of the chart representation.
    pub fn covariant_derivative_fd(
        &self,
        atlas: &ChartAtlas<T>,
        chart: ChartId,
        x: &Point3<T>,
        k: usize,
        h: T,
    ) -> Result<Complex<T>> {
        self.check_atlas(atlas)?;
        let a = atlas.connection_form(chart, x)?;
        let e = Point3::axis(k) * h;
        let d = (self.eval_unchecked(chart, &(*x + e))? - self.eval_unchecked(chart, &(*x - e))?)
            / (T::of(2.0) * h);
        Ok(d - Complex::new(T::zero(), a[k]) * self.eval_unchecked(chart, x)?)
    }

    /// `sum_k nabla_k nabla_k Psi` from nested central differences.
    pub fn covariant_laplacian_fd(
        &self,
        atlas: &ChartAtlas<T>,
        chart: ChartId,
        x: &Point3<T>,
        h: T,
    ) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..3 {
            let e = Point3::axis(k) * h;
            let fwd = self.covariant_derivative_fd(atlas, chart, &(*x + e), k, h)?;
            let bwd = self.covariant_derivative_fd(atlas, chart, &(*x - e), k, h)?;
            let mid = self.covariant_derivative_fd(atlas, chart, x, k, h)?;
            let a = atlas.connection_form(chart, x)?;
            acc = acc + (fwd - bwd) / (T::of(2.0) * h) - Complex::new(T::zero(), a[k]) * mid;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn headline() -> SectionInD<f64> {
        SectionInD::from_spec(&SectionSpec::single(1, 1, 0, 1.0, 3.0)).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n": 1, "terms": [{"re": 1.0, "im": -0.5, "ell": 2, "m": 1, "k_lo": 0.5, "k_hi": 2.0, "amplitude": 3.0}]}"#;
        let s = SectionInD::<f64>::from_json(text).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms[0].mode, AngularMode { n: 1, ell: 2, m: 1 });
        assert!(SectionInD::<f64>::from_json(r#"{"n": 2, "terms": [{"re":1,"im":0,"ell":1,"m":0,"k_lo":1,"k_hi":2,"amplitude":1}]}"#).is_err());
        assert!(SectionInD::<f64>::from_json(r#"{"n": 1, "terms": [], "extra": 3}"#).is_err());
    }

    #[test]
    fn on_axis_value_vanishes_unless_m_is_minus_n() {
        let atlas = ChartAtlas::<f64>::with_charge(1);
        let x = Point3::new(0.0, 0.0, 2.0);
        assert_eq!(headline().eval(&atlas, ChartId::Plus, &x).unwrap().value.norm(), 0.0);
        let s = SectionInD::from_spec(&SectionSpec::single(1, 1, -1, 1.0, 3.0)).unwrap();
        assert!(s.eval(&atlas, ChartId::Plus, &x).unwrap().value.norm() > 1e-3);
    }

    #[test]
    fn chart_relation() {
        let atlas = ChartAtlas::<f64>::with_charge(1);
        let spec = SectionSpec {
            n: 1,
            terms: vec![
                TermSpec { re: 1.0, im: 0.2, ell: 1, m: 0, k_lo: 1.0, k_hi: 3.0, amplitude: 1.0 },
                TermSpec { re: -0.3, im: 0.7, ell: 2, m: 1, k_lo: 0.5, k_hi: 1.5, amplitude: 2.0 },
            ],
        };
        let s = SectionInD::from_spec(&spec).unwrap();
        for &x in &[Point3::new(1.0, 0.3, 0.2), Point3::new(-0.4, -2.0, -0.5)] {
            let p = s.eval(&atlas, ChartId::Plus, &x).unwrap();
            let q = s.eval(&atlas, ChartId::Minus, &x).unwrap();
            let q_in_plus = q.in_chart(&atlas, ChartId::Plus, &x).unwrap();
            assert!((p.value - q_in_plus.value).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_section() {
        let atlas = ChartAtlas::<f64>::with_charge(1);
        let z = SectionInD::<f64>::zero(1);
        let x = Point3::new(0.3, 0.2, 1.0);
        assert_eq!(z.covariant_derivative_fd(&atlas, ChartId::Plus, &x, 0, 1e-3).unwrap().norm(), 0.0);
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn semigroup_contracts_norm() {
        let s = headline();
        let n0 = s.norm();
        let n1 = s.semigroup_apply(0.5).unwrap().norm();
        assert!(n1 < n0);
        assert_eq!(s.semigroup_apply(0.0).unwrap(), s);
        assert!(s.semigroup_apply(-1.0).is_err());
    }

    #[test]
    fn charge_mismatch() {
        let atlas = ChartAtlas::<f64>::with_charge(2);
        assert!(headline().eval(&atlas, ChartId::Plus, &Point3::new(0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn hamiltonian_matches_covariant_laplacian() {
        let atlas = ChartAtlas::<f64>::with_charge(1);
        let s = headline();
        let hs = s.hamiltonian_apply();
        for &x in &[Point3::new(0.6, -0.4, 0.9), Point3::new(-1.5, 2.0, -0.3)] {
            let chart = atlas.preferred_chart(&x).unwrap();
            let lap = s.covariant_laplacian_fd(&atlas, chart, &x, 1e-3).unwrap() * -0.5;
            let want = hs.eval(&atlas, chart, &x).unwrap().value;
            assert!((lap - want).norm() < 1e-3 * want.norm(), "{lap} vs {want}");
        }
    }
}
