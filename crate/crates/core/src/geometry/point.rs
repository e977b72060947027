use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A point (or displacement) in Euclidean three-space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point3<T> {
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

impl<T: Real> Point3<T> {
    pub const fn new(x1: T, x2: T, x3: T) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Unit vector along coordinate axis `k` (0-based).
    pub fn axis(k: usize) -> Self {
        let mut e = Self::zero();
        e[k] = T::one();
        e
    }

    /// Spherical coordinates (radius, colatitude, azimuth) to Cartesian.
    pub fn from_spherical(r: T, theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(r * st * cp, r * st * sp, r * ct)
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    #[inline]
    pub fn norm_sqr(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Squared distance from the x3 axis.
    #[inline]
    pub fn rho_sqr(&self) -> T {
        self.x1 * self.x1 + self.x2 * self.x2
    }

    /// x3/|x|, the cosine of the colatitude. NaN at the origin.
    #[inline]
    pub fn cos_polar(&self) -> T {
        self.x3 / self.norm()
    }

    pub fn normalized(&self) -> Self {
        *self * self.norm().recip()
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x1, self.x2, self.x3]
    }
}

impl<T> std::ops::Index<usize> for Point3<T> {
    type Output = T;
    fn index(&self, k: usize) -> &T {
        match k {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x3,
            _ => panic!("coordinate index {k} out of range"),
        }
    }
}

impl<T> std::ops::IndexMut<usize> for Point3<T> {
    fn index_mut(&mut self, k: usize) -> &mut T {
        match k {
            0 => &mut self.x1,
            1 => &mut self.x2,
            2 => &mut self.x3,
            _ => panic!("coordinate index {k} out of range"),
        }
    }
}

impl<T: Real> Add for Point3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl<T: Real> Sub for Point3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl<T: Real> Mul<T> for Point3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl<T: Real> Neg for Point3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

/// Components of a one-form at a point. The value type is generic so that
/// complex-valued fields can use the same pairing.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Covector3<V> {
    pub c1: V,
    pub c2: V,
    pub c3: V,
}

impl<V: Copy> Covector3<V> {
    pub const fn new(c1: V, c2: V, c3: V) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn to_array(self) -> [V; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// Pairing with a displacement: the ordinary dot product.
    #[inline]
    pub fn pair<T>(&self, dx: &Point3<T>) -> V
    where
        T: Copy,
        V: Mul<T, Output = V> + Add<Output = V>,
    {
        self.c1 * dx.x1 + self.c2 * dx.x2 + self.c3 * dx.x3
    }
}

impl<V> std::ops::Index<usize> for Covector3<V> {
    type Output = V;
    fn index(&self, k: usize) -> &V {
        match k {
            0 => &self.c1,
            1 => &self.c2,
            2 => &self.c3,
            _ => panic!("component index {k} out of range"),
        }
    }
}

impl<V: Copy + Add<Output = V>> Add for Covector3<V> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)
    }
}

impl<V: Copy + Sub<Output = V>> Sub for Covector3<V> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.c1 - o.c1, self.c2 - o.c2, self.c3 - o.c3)
    }
}
