//! Lanczos approximation (g = 7, nine coefficients), relative error near 1e-15.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(z: T) -> T {
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(T::of(LANCZOS[0]), |acc, (i, &c)| acc + T::of(c) / (z + T::of_int(i as i64 + 1)))
}

/// Gamma function for real arguments (poles at non-positive integers give inf/NaN).
pub fn gamma<T: Real>(x: T) -> T {
    if x < T::of(0.5) {
        // reflection
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    if x > T::of(140.0) {
        return ln_gamma(x).exp();
    }
    let z = x - T::one();
    let t = z + T::of(LANCZOS_G + 0.5);
    (T::TAU()).sqrt() * t.powf(z + T::of(0.5)) * (-t).exp() * lanczos_sum(z)
}

/// Natural log of |Gamma(x)| for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if x < T::of(0.5) {
        return (T::PI() / (T::PI() * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let t = z + T::of(LANCZOS_G + 0.5);
    T::of(0.5) * T::TAU().ln() + (z + T::of(0.5)) * t.ln() - t + lanczos_sum(z).ln()
}
