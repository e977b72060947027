//! Heat-kernel reference for the trivial bundle: with `n = 0`,
//! `(e^{-Ht} Psi)(x) = E[Psi(x + sqrt(t) Z)]` for a standard normal `Z` in R^3,
//! evaluated here by a tensor Gauss-Hermite rule.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{ChartId, Point3};
use crate::scalar::Real;
use crate::special::standard_normal_rule;
use crate::spectral::SectionInD;

pub fn gaussian_smoothing<T: Real>(section: &SectionInD<T>, x: Point3<T>, t: T, npts: usize) -> Result<Complex<T>> {
    if section.charge != 0 {
        return Err(Error::InvalidSection("the Gaussian heat-kernel reference needs charge 0".into()));
    }
    if !(t >= T::zero()) {
        return Err(Error::NegativeTime(t.to_f64_lossy()));
    }
    let rule = standard_normal_rule(npts)?;
    let s = t.sqrt();
    let mut acc = Complex::new(T::zero(), T::zero());
    for (z1, w1) in rule.iter() {
        for (z2, w2) in rule.iter() {
            for (z3, w3) in rule.iter() {
                let y = x + Point3::new(T::of(z1), T::of(z2), T::of(z3)) * s;
                // both charts agree when n = 0
                acc = acc + section.eval_unchecked(ChartId::Plus, &y)? * T::of(w1 * w2 * w3);
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ChartAtlas;
    use crate::spectral::SectionSpec;

    #[test]
    fn agrees_with_spectral_semigroup() {
        let s = SectionInD::<f64>::from_spec(&SectionSpec::single(0, 1, 1, 0.5, 1.5)).unwrap();
        let x = Point3::new(0.4, -0.9, 0.7);
        let t = 0.3;
        let oracle = gaussian_smoothing(&s, x, t, 24).unwrap();
        let atlas = ChartAtlas::with_charge(0);
        let spectral = s.semigroup_apply(t).unwrap().eval(&atlas, ChartId::Plus, &x).unwrap().value;
        assert!((oracle - spectral).norm() < 1e-6 * spectral.norm(), "{oracle} vs {spectral}");
    }

    #[test]
    fn needs_trivial_bundle() {
        let s = SectionInD::<f64>::from_spec(&SectionSpec::single(1, 1, 0, 1.0, 3.0)).unwrap();
        assert!(gaussian_smoothing(&s, Point3::new(0.0, 0.0, 1.0), 0.1, 4).is_err());
    }
}
