//! Gauss-type quadrature rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub interval: (T, T),
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Concatenates rules on adjacent intervals.
    pub fn concat(rules: &[QuadratureRule<T>]) -> Result<Self> {
        let first = rules.first().ok_or_else(|| Error::InvalidArgument("no rules to concatenate".into()))?;
        let mut out = QuadratureRule {
            nodes: Vec::new(),
            weights: Vec::new(),
            interval: (first.interval.0, rules[rules.len() - 1].interval.1),
        };
        let mut end = first.interval.0;
        for r in rules {
            if r.interval.0 != end {
                return Err(Error::InvalidArgument("rules are not on adjacent intervals".into()));
            }
            end = r.interval.1;
            out.nodes.extend_from_slice(&r.nodes);
            out.weights.extend_from_slice(&r.weights);
        }
        Ok(out)
    }
}

/// Legendre nodes and weights on `[-1, 1]`, computed in f64 by Newton iteration.
fn legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n % 2 == 1 && i == m - 1 {
            z = 0.0;
            // recompute derivative at the exact center
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `npts`-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre<T: Real>(npts: usize, a: T, b: T) -> Result<QuadratureRule<T>> {
    if npts == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("empty quadrature interval [{a}, {b}]")));
    }
    let (x, w) = legendre_reference(npts);
    let half = T::of(0.5) * (b - a);
    let mid = T::of(0.5) * (a + b);
    Ok(QuadratureRule {
        nodes: x.iter().map(|&t| mid + half * T::of(t)).collect(),
        weights: w.iter().map(|&v| half * T::of(v)).collect(),
        interval: (a, b),
    })
}

/// Composite Gauss-Legendre rule with `npts` nodes on each panel `[edges[i], edges[i+1]]`.
pub fn composite_gauss_legendre<T: Real>(npts: usize, edges: &[T]) -> Result<QuadratureRule<T>> {
    if edges.len() < 2 {
        return Err(Error::InvalidArgument("composite rule needs at least two edges".into()));
    }
    let panels = edges
        .windows(2)
        .map(|e| gauss_legendre(npts, e[0], e[1]))
        .collect::<Result<Vec<_>>>()?;
    QuadratureRule::concat(&panels)
}

/// Physicists' Gauss-Hermite rule: `int f(x) exp(-x^2) dx`.
pub fn gauss_hermite(npts: usize) -> Result<QuadratureRule<f64>> {
    if npts == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    let n = npts;
    let nf = n as f64;
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    x.reverse();
    w.reverse();
    Ok(QuadratureRule { nodes: x, weights: w, interval: (f64::NEG_INFINITY, f64::INFINITY) })
}

/// Nodes and weights for `E[f(Z)]`, `Z ~ N(0, 1)`.
pub fn standard_normal_rule(npts: usize) -> Result<QuadratureRule<f64>> {
    let mut r = gauss_hermite(npts)?;
    let s2 = std::f64::consts::SQRT_2;
    let rpi = std::f64::consts::PI.sqrt();
    r.nodes.iter_mut().for_each(|x| *x *= s2);
    r.weights.iter_mut().for_each(|w| *w /= rpi);
    Ok(r)
}
