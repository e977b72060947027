//! Jacobi polynomials `P^{alpha,beta}_k`.

use crate::scalar::Real;

/// Degree-`k` Jacobi polynomial in the classical normalization
/// `P_k(1) = binom(k + alpha, k)`.
///
/// Uses the three-term recurrence. When one of its denominators vanishes
/// (possible for negative integer parameters) the explicit finite sum is used
/// instead.
pub fn jacobi_polynomial<T: Real>(k: usize, alpha: T, beta: T, xi: T) -> T {
    if k == 0 {
        return T::one();
    }
    recurrence(k, alpha, beta, xi).unwrap_or_else(|| explicit_sum(k, alpha, beta, xi))
}

fn recurrence<T: Real>(k: usize, a: T, b: T, x: T) -> Option<T> {
    let one = T::one();
    let two = T::of(2.0);
    let ab = a + b;
    let mut p_prev = one;
    let mut p = T::of(0.5) * ((ab + two) * x + (a - b));
    for j in 2..=k {
        let jf = T::of_int(j as i64);
        let c = two * jf + ab;
        let denom = two * jf * (jf + ab) * (c - two);
        if denom == T::zero() {
            return None;
        }
        let lin = (c - one) * (c * (c - two) * x + a * a - b * b);
        let back = two * (jf + a - one) * (jf + b - one) * c;
        let next = (lin * p - back * p_prev) / denom;
        p_prev = p;
        p = next;
    }
    Some(p)
}

/// Generalized binomial coefficient `binom(z, j)` for real `z`.
fn binom<T: Real>(z: T, j: usize) -> T {
    (0..j).fold(T::one(), |acc, i| {
        acc * (z - T::of_int(i as i64)) / T::of_int(i as i64 + 1)
    })
}

fn explicit_sum<T: Real>(k: usize, a: T, b: T, x: T) -> T {
    let kf = T::of_int(k as i64);
    let lo = T::of(0.5) * (x - T::one());
    let hi = T::of(0.5) * (x + T::one());
    (0..=k)
        .map(|s| {
            binom(kf + a, k - s)
                * binom(kf + b, s)
                * lo.powi(s as i32)
                * hi.powi((k - s) as i32)
        })
        .sum()
}
