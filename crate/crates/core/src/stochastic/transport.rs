//! Stochastic parallel transport with chart switching.
//!
//! The phase is the Stratonovich sum of the current chart's connection.
//! Charts change only at grid points: under [`SwitchPolicy::Hysteresis`] when
//! `x3/|x|` crosses `-delta * switch_margin` (leaving `Plus`) or
//! `+delta * switch_margin` (leaving `Minus`), under [`SwitchPolicy::Manual`]
//! exactly at the listed steps.

use num_complex::Complex;

use super::path::BrownianPath;
use crate::error::{Error, Result};
use crate::geometry::{azimuth, trapezoid_increment, ChartAtlas, ChartId, FiberValue, Point3};
use crate::scalar::Real;
use crate::spectral::SectionInD;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChartSwitch {
    /// Grid index of the switch point.
    pub step: usize,
    pub from: ChartId,
    pub to: ChartId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportState<T> {
    pub start_chart: ChartId,
    pub chart: ChartId,
    /// `Pi = exp(i * phase_angle)`, from the start chart at `X_0` to `chart` at `X_N`.
    pub phase_angle: T,
    pub switches: Vec<ChartSwitch>,
}

impl<T: Real> TransportState<T> {
    pub fn factor(&self) -> Complex<T> {
        Complex::from_polar(T::one(), self.phase_angle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwitchPolicy {
    Hysteresis,
    /// Toggle the chart at each listed grid index (sorted; repeats allowed).
    /// No automatic switching.
    Manual(Vec<usize>),
}

/// Transport along `path` with hysteresis switching.
pub fn stochastic_transport<T: Real>(
    path: &BrownianPath<T>,
    atlas: &ChartAtlas<T>,
    start_chart: ChartId,
) -> Result<TransportState<T>> {
    stochastic_transport_with(path, atlas, start_chart, &SwitchPolicy::Hysteresis)
}

fn switch_phase<T: Real>(atlas: &ChartAtlas<T>, from: ChartId, x: &Point3<T>) -> Result<T> {
    let two_n_phi = T::of_int(2 * atlas.charge as i64) * azimuth(x)?;
    Ok(match from {
        ChartId::Plus => -two_n_phi,
        ChartId::Minus => two_n_phi,
    })
}

fn toggle<T: Real>(state: &mut TransportState<T>, atlas: &ChartAtlas<T>, step: usize, x: &Point3<T>) -> Result<()> {
    let from = state.chart;
    state.phase_angle = state.phase_angle + switch_phase(atlas, from, x)?;
    state.chart = from.other();
    state.switches.push(ChartSwitch { step, from, to: state.chart });
    Ok(())
}

pub fn stochastic_transport_with<T: Real>(
    path: &BrownianPath<T>,
    atlas: &ChartAtlas<T>,
    start_chart: ChartId,
    policy: &SwitchPolicy,
) -> Result<TransportState<T>> {
    let points = &path.points;
    let x0 = *points.first().ok_or_else(|| Error::InvalidArgument("empty path".into()))?;
    if !atlas.chart_contains(start_chart, &x0)? {
        return Err(Error::OutOfChart(start_chart));
    }
    let forced: &[usize] = match policy {
        SwitchPolicy::Hysteresis => &[],
        SwitchPolicy::Manual(steps) => steps,
    };
    let hysteresis = matches!(policy, SwitchPolicy::Hysteresis);
    let mut next_forced = 0usize;

    let mut state = TransportState { start_chart, chart: start_chart, phase_angle: T::zero(), switches: Vec::new() };
    let mut forced_at = |state: &mut TransportState<T>, step: usize, x: &Point3<T>| -> Result<()> {
        while next_forced < forced.len() && forced[next_forced] == step {
            if !atlas.in_overlap(x)? {
                return Err(Error::ForcedSwitchOutsideOverlap(step));
            }
            toggle(state, atlas, step, x)?;
            next_forced += 1;
        }
        Ok(())
    };

    forced_at(&mut state, 0, &x0)?;
    let mut a_prev = atlas.connection_unchecked(state.chart, &x0);
    for j in 0..points.len() - 1 {
        let x1 = points[j + 1];
        let r = x1.norm();
        if r == T::zero() {
            return Err(Error::OriginCollision(j + 1));
        }
        let cos = x1.x3 / r;
        if !atlas.contains_cos(state.chart, cos) {
            return Err(Error::StepStraddle { step: j, chart: state.chart });
        }
        let a_next = atlas.connection_unchecked(state.chart, &x1);
        state.phase_angle = state.phase_angle + trapezoid_increment(&a_prev, &a_next, &(x1 - points[j]));
        let chart_before = state.chart;
        if hysteresis {
            let leave = match state.chart {
                ChartId::Plus => cos < atlas.switch_threshold(ChartId::Plus),
                ChartId::Minus => cos > atlas.switch_threshold(ChartId::Minus),
            };
            if leave {
                toggle(&mut state, atlas, j + 1, &x1)?;
            }
        } else {
            forced_at(&mut state, j + 1, &x1)?;
        }
        a_prev = if state.chart == chart_before { a_next } else { atlas.connection_unchecked(state.chart, &x1) };
    }
    if next_forced < forced.len() {
        return Err(Error::InvalidArgument(format!(
            "forced switch step {} is not a grid index of the path",
            forced[next_forced]
        )));
    }
    Ok(state)
}

/// `Pi_t^{-1} Psi(X_t)`, expressed at `X_0` in `output_chart`.
pub fn transport_inverse_apply<T: Real>(
    state: &TransportState<T>,
    section: &SectionInD<T>,
    path: &BrownianPath<T>,
    atlas: &ChartAtlas<T>,
    output_chart: ChartId,
) -> Result<Complex<T>> {
    let value = section.eval(atlas, state.chart, &path.end())?.value;
    let pulled = FiberValue::new(state.start_chart, value * state.factor().conj());
    Ok(pulled.in_chart(atlas, output_chart, &path.start())?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SectionSpec;
    use crate::stochastic::path::{sample_brownian_path, PathConfig};

    fn atlas(n: i32) -> ChartAtlas<f64> {
        ChartAtlas::new(n, 0.5, 0.5).unwrap()
    }

    fn path(x0: Point3<f64>, t: f64, steps: usize, seed: u64) -> BrownianPath<f64> {
        sample_brownian_path(x0, &PathConfig::new(t, steps, seed, 0).unwrap()).unwrap()
    }

    fn polyline(points: Vec<Point3<f64>>) -> BrownianPath<f64> {
        BrownianPath { times: (0..points.len()).map(|i| i as f64).collect(), points, n_resampled: 0 }
    }

    #[test]
    fn zero_charge_has_zero_phase() {
        for seed in 0..20 {
            let p = path(Point3::new(0.0, 0.0, 1.0), 1.0, 4000, seed);
            let s = stochastic_transport(&p, &atlas(0), ChartId::Plus).unwrap();
            assert_eq!(s.phase_angle, 0.0);
        }
    }

    #[test]
    fn switches_alternate_and_end_chart_contains_endpoint() {
        let a = atlas(1);
        let mut saw_switch = false;
        for seed in 0..30 {
            let p = path(Point3::new(0.2, 0.1, 0.1), 1.0, 4000, seed);
            let s = stochastic_transport(&p, &a, ChartId::Plus).unwrap();
            assert!(a.chart_contains(s.chart, &p.end()).unwrap());
            saw_switch |= !s.switches.is_empty();
            for w in s.switches.windows(2) {
                assert!(w[1].step > w[0].step);
                assert_eq!(w[0].to, w[1].from);
            }
            for sw in &s.switches {
                assert!(a.in_overlap(&p.points[sw.step]).unwrap());
            }
        }
        assert!(saw_switch);
    }

    #[test]
    fn matches_deterministic_transport_without_switches() {
        let a = atlas(1);
        let pts: Vec<_> = (0..=200).map(|j| Point3::from_spherical(1.0, 1.0, 0.01 * j as f64)).collect();
        let s = stochastic_transport(&polyline(pts.clone()), &a, ChartId::Plus).unwrap();
        assert_eq!(s.phase_angle, a.polyline_phase(ChartId::Plus, &pts).unwrap());
    }

    #[test]
    fn switch_applies_transition_phase() {
        let a = atlas(2);
        // two steps: north, then just below the Plus threshold
        let pts = vec![Point3::new(1.0, 0.0, 0.5), Point3::new(0.0, 1.0, -0.4)];
        let s = stochastic_transport(&polyline(pts.clone()), &a, ChartId::Plus).unwrap();
        assert_eq!(s.chart, ChartId::Minus);
        let seg = a.polyline_phase(ChartId::Plus, &pts).unwrap();
        let phi = std::f64::consts::FRAC_PI_2;
        assert!((s.phase_angle - (seg - 4.0 * phi)).abs() < 1e-14);
    }

    #[test]
    fn straddle_is_reported() {
        let a = atlas(1);
        let pts = vec![Point3::new(0.0, 0.1, 1.0), Point3::new(0.0, 0.1, -1.0)];
        let e = stochastic_transport(&polyline(pts), &a, ChartId::Plus).unwrap_err();
        assert_eq!(e, Error::StepStraddle { step: 0, chart: ChartId::Plus });
    }

    #[test]
    fn start_chart_must_contain_start() {
        let pts = vec![Point3::new(0.0, 0.0, -1.0), Point3::new(0.0, 0.1, -1.0)];
        assert_eq!(
            stochastic_transport(&polyline(pts), &atlas(1), ChartId::Plus).unwrap_err(),
            Error::OutOfChart(ChartId::Plus)
        );
    }

    #[test]
    fn no_op_forced_switch_is_exact() {
        let a = atlas(1);
        let pts: Vec<_> = (0..=100).map(|j| Point3::from_spherical(2.0, 1.5 + 0.001 * j as f64, 0.03 * j as f64)).collect();
        let p = polyline(pts);
        let base = stochastic_transport_with(&p, &a, ChartId::Plus, &SwitchPolicy::Manual(vec![])).unwrap();
        let refined = stochastic_transport_with(&p, &a, ChartId::Plus, &SwitchPolicy::Manual(vec![40, 40])).unwrap();
        assert_eq!(refined.chart, ChartId::Plus);
        assert_eq!(refined.switches.len(), 2);
        assert!((base.factor() - refined.factor()).norm() < 1e-12);
        let outside = polyline(vec![Point3::new(0.0, 0.1, 1.0), Point3::new(0.0, 0.2, 1.0)]);
        assert_eq!(
            stochastic_transport_with(&outside, &a, ChartId::Plus, &SwitchPolicy::Manual(vec![1])).unwrap_err(),
            Error::ForcedSwitchOutsideOverlap(1)
        );
    }

    #[test]
    fn inverse_apply_preserves_modulus_and_short_time_limit() {
        let a = atlas(1);
        let section = SectionInD::from_spec(&SectionSpec::single(1, 1, 0, 1.0, 3.0)).unwrap();
        let x0 = Point3::new(0.7, -0.2, 0.4);
        for seed in 0..5 {
            let p = path(x0, 0.3, 300, seed);
            let s = stochastic_transport(&p, &a, ChartId::Plus).unwrap();
            let v = transport_inverse_apply(&s, &section, &p, &a, ChartId::Plus).unwrap();
            let end = section.eval(&a, s.chart, &p.end()).unwrap().value;
            assert!((v.norm() - end.norm()).abs() < 1e-14);
        }
        let p = path(x0, 1e-12, 1, 0);
        let s = stochastic_transport(&p, &a, ChartId::Plus).unwrap();
        let v = transport_inverse_apply(&s, &section, &p, &a, ChartId::Plus).unwrap();
        let want = section.eval(&a, ChartId::Plus, &x0).unwrap().value;
        assert!((v - want).norm() < 1e-5 * want.norm());
        let vm = transport_inverse_apply(&s, &section, &p, &a, ChartId::Minus).unwrap();
        assert!((vm - want * a.transition_phase(&x0).unwrap().conj()).norm() < 1e-5 * want.norm());
    }

    #[test]
    fn zero_charge_inverse_apply_is_plain_evaluation() {
        let a = atlas(0);
        let section = SectionInD::from_spec(&SectionSpec::single(0, 1, 1, 1.0, 2.0)).unwrap();
        let p = path(Point3::new(0.1, 0.3, -0.2), 0.5, 500, 4);
        let s = stochastic_transport(&p, &a, ChartId::Minus).unwrap();
        let v = transport_inverse_apply(&s, &section, &p, &a, ChartId::Minus).unwrap();
        let direct = section.eval(&a, ChartId::Plus, &p.end()).unwrap().value;
        assert!((v - direct).norm() < 1e-14);
    }
}
