//! Bessel functions of the first kind for real order `mu >= 0` and real
//! argument `x >= 0`.
//!
//! Three regimes:
//! * `x <= 12`: ascending power series.
//! * `x >= max(30, mu^2)`: Hankel asymptotic expansion.
//! * otherwise: Steed's method (continued fraction for `J'/J`, downward
//!   recurrence, complex continued fraction for `(J' + iY')/(J + iY)`, and the
//!   Wronskian for normalization).

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::gamma::{gamma, ln_gamma};

/// Largest argument handled by the power series.
pub const SERIES_MAX_ARG: f64 = 12.0;

const MAX_ITER: usize = 100_000;

fn hankel_min_arg<T: Real>(mu: T) -> T {
    (mu * mu).max(T::of(30.0))
}

fn check_domain<T: Real>(mu: T, x: T) -> Result<()> {
    if !(mu >= T::zero()) || !mu.is_finite() {
        return Err(Error::Domain(format!("Bessel order must be finite and >= 0, got {mu}")));
    }
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// `J_mu(x)`.
pub fn bessel_j<T: Real>(mu: T, x: T) -> Result<T> {
    check_domain(mu, x)?;
    if x == T::zero() {
        return Ok(if mu == T::zero() { T::one() } else { T::zero() });
    }
    Ok(if x <= T::of(SERIES_MAX_ARG) {
        series(mu, x)
    } else if x >= hankel_min_arg(mu) {
        hankel_asymptotic(mu, x)
    } else {
        steed(mu, x)
    })
}

/// `y^(-1/2) J_mu(y)`, the radial eigenfunction kernel, with its `y -> 0` limit.
pub fn scaled_bessel<T: Real>(mu: T, y: T) -> Result<T> {
    check_domain(mu, y)?;
    if y == T::zero() {
        let half = T::of(0.5);
        return if mu > half {
            Ok(T::zero())
        } else if mu == half {
            Ok((T::of(2.0) / T::PI()).sqrt())
        } else {
            Err(Error::Domain(format!("y^(-1/2) J_mu(y) diverges at 0 for mu = {mu} < 1/2")))
        };
    }
    Ok(bessel_j(mu, y)? / y.sqrt())
}

/// Sum of (-1)^k (x/2)^(mu+2k) / (k! Gamma(mu+k+1)).
pub(crate) fn series<T: Real>(mu: T, x: T) -> T {
    let half_x = T::of(0.5) * x;
    let lead = if mu < T::of(20.0) {
        half_x.powf(mu) / gamma(mu + T::one())
    } else {
        (mu * half_x.ln() - ln_gamma(mu + T::one())).exp()
    };
    let q = -half_x * half_x;
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..MAX_ITER {
        let kf = T::of_int(k as i64);
        term = term * q / (kf * (mu + kf));
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() * T::of(0.25) {
            break;
        }
    }
    lead * sum
}

pub(crate) fn hankel_asymptotic<T: Real>(mu: T, x: T) -> T {
    let four_mu2 = T::of(4.0) * mu * mu;
    let eight_x = T::of(8.0) * x;
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut prev_abs = T::infinity();
    for k in 1..MAX_ITER {
        let odd = T::of_int(2 * k as i64 - 1);
        term = term * (four_mu2 - odd * odd) / (T::of_int(k as i64) * eight_x);
        let a = term.abs();
        if a > prev_abs {
            // asymptotic series has started to diverge
            break;
        }
        prev_abs = a;
        // P takes even k with sign (-1)^(k/2); Q takes odd k with sign (-1)^((k-1)/2)
        match k % 4 {
            0 => p = p + term,
            1 => q = q + term,
            2 => p = p - term,
            _ => q = q - term,
        }
        if a <= T::epsilon() * T::of(0.25) * (p.abs() + q.abs()) {
            break;
        }
    }
    let omega = x - (T::of(0.5) * mu + T::of(0.25)) * T::PI();
    let (s, c) = omega.sin_cos();
    (T::of(2.0) / (T::PI() * x)).sqrt() * (p * c - q * s)
}

/// Steed's method, valid for x >= 2.
pub(crate) fn steed<T: Real>(nu: T, x: T) -> T {
    let eps = T::epsilon();
    let fpmin = T::min_positive_value() / eps;
    let two = T::of(2.0);

    // number of downward recurrence steps so the CF2 order stays below x
    let nl = (nu - x + T::of(1.5)).floor().max(T::zero()).to_usize().unwrap_or(0);
    let xmu = nu - T::of_int(nl as i64);
    let xmu2 = xmu * xmu;
    let xi = x.recip();
    let xi2 = two * xi;
    let w = xi2 / T::PI();

    // CF1: J'_nu / J_nu by modified Lentz
    let mut isign = T::one();
    let mut h = (nu * xi).max(fpmin);
    let mut b = xi2 * nu;
    let mut d = T::zero();
    let mut c = h;
    for _ in 0..MAX_ITER {
        b = b + xi2;
        d = b - d;
        if d.abs() < fpmin {
            d = fpmin;
        }
        c = b - c.recip();
        if c.abs() < fpmin {
            c = fpmin;
        }
        d = d.recip();
        let del = c * d;
        h = del * h;
        if d < T::zero() {
            isign = -isign;
        }
        if (del - T::one()).abs() < eps {
            break;
        }
    }

    // downward recurrence to order xmu (unnormalized)
    let mut rjl = isign * fpmin;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact = fact - xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == T::zero() {
        rjl = eps;
    }
    let f = rjpl / rjl;

    // CF2: p + iq by Steed's algorithm
    let mut a = T::of(0.25) - xmu2;
    let mut p = -T::of(0.5) * xi;
    let mut q = T::one();
    let br = two * x;
    let mut bi = two;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAX_ITER {
        a = a + T::of_int(2 * (i as i64 - 1));
        bi = bi + two;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < fpmin {
            dr = fpmin;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < fpmin {
            cr = fpmin;
        }
        den = dr * dr + di * di;
        dr = dr / den;
        di = -di / den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - T::one()).abs() + dli.abs() < eps {
            break;
        }
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < T::zero() {
        rjmu = -rjmu;
    }
    rjl1 * (rjmu / rjl)
}
