//! Deterministic parallel transport along polylines.
//!
//! Transport is accumulated as a real phase angle and exponentiated once at
//! the end, so the result has unit modulus regardless of the segment count.

use num_complex::Complex;

use super::atlas::{ChartAtlas, ChartId};
use super::point::{Covector3, Point3};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Trapezoidal (endpoint-averaged) contribution of one segment to a line
/// integral. The stochastic transport uses the same kernel for Stratonovich
/// sums.
#[inline]
pub fn trapezoid_increment<T: Real>(a0: &Covector3<T>, a1: &Covector3<T>, dx: &Point3<T>) -> T {
    T::of(0.5) * (*a0 + *a1).pair(dx)
}

impl<T: Real> ChartAtlas<T> {
    /// Line integral of the chart's connection along the polyline, as a phase angle.
    pub fn polyline_phase(&self, chart: ChartId, points: &[Point3<T>]) -> Result<T> {
        let mut phase = T::zero();
        let Some(first) = points.first() else {
            return Ok(phase);
        };
        let mut prev = *first;
        let mut a_prev = self.connection_form(chart, &prev)?;
        for p in &points[1..] {
            let a_next = self.connection_form(chart, p)?;
            phase = phase + trapezoid_increment(&a_prev, &a_next, &(*p - prev));
            prev = *p;
            a_prev = a_next;
        }
        Ok(phase)
    }

    /// `exp(i * integral of A along the polyline)` in the given chart.
    pub fn parallel_transport_polyline(&self, chart: ChartId, points: &[Point3<T>]) -> Result<Complex<T>> {
        let phase = self.polyline_phase(chart, points)?;
        Ok(Complex::from_polar(T::one(), phase))
    }

    /// Transport once around the unit-sphere circle at colatitude `theta`,
    /// counter-clockwise seen from the north pole.
    pub fn loop_holonomy(&self, chart: ChartId, theta: T, segments: usize) -> Result<Complex<T>> {
        if segments < 3 {
            return Err(Error::InvalidArgument(format!("a loop needs at least 3 segments, got {segments}")));
        }
        let step = T::TAU() / T::of_int(segments as i64);
        let points: Vec<_> = (0..=segments)
            .map(|j| {
                // close the loop on the exact starting vertex
                let j = if j == segments { 0 } else { j };
                Point3::from_spherical(T::one(), theta, step * T::of_int(j as i64))
            })
            .collect();
        self.parallel_transport_polyline(chart, &points)
    }
}
