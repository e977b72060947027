//! Ito (left endpoint) and Stratonovich (endpoint average) sums along a
//! sampled path, for real- or complex-valued one-forms.

use std::ops::{Add, Mul};

use num_traits::Zero;

use super::path::BrownianPath;
use crate::geometry::{Covector3, Point3};
use crate::scalar::Real;

/// `sum_j f(X_j) . (X_{j+1} - X_j)`.
pub fn ito_integral<T, V, F>(path: &BrownianPath<T>, mut f: F) -> V
where
    T: Real,
    V: Copy + Zero + Add<Output = V> + Mul<T, Output = V>,
    F: FnMut(&Point3<T>) -> Covector3<V>,
{
    path.points.windows(2).fold(V::zero(), |acc, w| acc + f(&w[0]).pair(&(w[1] - w[0])))
}

/// `sum_j (f(X_j) + f(X_{j+1}))/2 . (X_{j+1} - X_j)`.
pub fn stratonovich_integral<T, V, F>(path: &BrownianPath<T>, mut f: F) -> V
where
    T: Real,
    V: Copy + Zero + Add<Output = V> + Mul<T, Output = V>,
    F: FnMut(&Point3<T>) -> Covector3<V>,
{
    let Some(first) = path.points.first() else {
        return V::zero();
    };
    let mut prev = f(first);
    let mut acc = V::zero();
    for w in path.points.windows(2) {
        let next = f(&w[1]);
        acc = acc + (prev + next).pair(&(w[1] - w[0])) * T::of(0.5);
        prev = next;
    }
    acc
}
