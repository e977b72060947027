use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Quantum numbers `(n, ell, m)` of a monopole harmonic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngularMode {
    pub n: i32,
    pub ell: i32,
    pub m: i32,
}

impl AngularMode {
    pub fn new(n: i32, ell: i32, m: i32) -> Result<Self> {
        if ell < n.abs() || m.abs() > ell {
            return Err(Error::InvalidMode { n, ell, m });
        }
        Ok(Self { n, ell, m })
    }

    /// Order of the radial Bessel kernel.
    pub fn mu<T: Real>(&self) -> T {
        mu_of(self)
    }
}

/// `sqrt(ell (ell + 1) - n^2 + 1/4)`.
pub fn mu_of<T: Real>(mode: &AngularMode) -> T {
    let l = mode.ell as i64;
    let n = mode.n as i64;
    (T::of_int(l * (l + 1) - n * n) + T::of(0.25)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_values() {
        let m = AngularMode::new(1, 1, 0).unwrap();
        assert!((mu_of::<f64>(&m) - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((mu_of::<f64>(&m) - 1.118_034).abs() < 1e-6);
        assert_eq!(mu_of::<f64>(&AngularMode::new(0, 0, 0).unwrap()), 0.5);
        assert_eq!(mu_of::<f64>(&AngularMode::new(2, 2, -1).unwrap()), 1.5);
    }

    #[test]
    fn mu_lower_bound_for_monopole() {
        let floor = 0.5 * 5f64.sqrt();
        for n in 1..5 {
            for ell in n..n + 4 {
                let v: f64 = AngularMode::new(n, ell, 0).unwrap().mu();
                assert!(v >= floor - 1e-15);
                let v: f64 = AngularMode::new(-n, ell, 0).unwrap().mu();
                assert!(v >= floor - 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_modes() {
        assert!(AngularMode::new(2, 1, 0).is_err());
        assert!(AngularMode::new(1, 1, 2).is_err());
        assert!(AngularMode::new(-1, 1, -2).is_err());
    }
}
