//! Small fixed-size vector types used by the mesh and the kernels.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::num::{czero, lit, Real, C};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_f64(x: f64, y: f64, z: f64) -> Self {
        Self::new(lit(x), lit(y), lit(z))
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    #[inline]
    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Multiplies by a complex scalar.
    #[inline]
    pub fn scale_c(self, s: C<T>) -> CVec3<T> {
        CVec3 {
            x: s * self.x,
            y: s * self.y,
            z: s * self.z,
        }
    }

    pub fn max_abs(self) -> T {
        self.x.mag().max(self.y.mag()).max(self.z.mag())
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Vec3<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// Complex 3-vector (fields, current moments, kernel gradients).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CVec3<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
    pub z: Complex<T>,
}

impl<T: Real> CVec3<T> {
    pub fn zero() -> Self {
        Self {
            x: czero(),
            y: czero(),
            z: czero(),
        }
    }

    pub fn new(x: C<T>, y: C<T>, z: C<T>) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [C<T>; 3] {
        [self.x, self.y, self.z]
    }

    /// Bilinear (non-conjugating) dot product with a real vector.
    #[inline]
    pub fn dot_real(self, v: Vec3<T>) -> C<T> {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    /// `self x v` for real `v`.
    #[inline]
    pub fn cross_real(self, v: Vec3<T>) -> Self {
        Self {
            x: self.y * v.z - self.z * v.y,
            y: self.z * v.x - self.x * v.z,
            z: self.x * v.y - self.y * v.x,
        }
    }

    /// `v x self` for real `v`.
    #[inline]
    pub fn rcross(v: Vec3<T>, c: Self) -> Self {
        Self {
            x: c.z * v.y - c.y * v.z,
            y: c.x * v.z - c.z * v.x,
            z: c.y * v.x - c.x * v.y,
        }
    }

    pub fn norm_sq(self) -> T {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn scale(self, s: C<T>) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }
}

impl<T: Real> Add for CVec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl<T: Real> AddAssign for CVec3<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for CVec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl<T: Real> Mul<T> for CVec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }
}

/// Axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb<T> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    pub fn size(&self) -> Vec3<T> {
        self.max - self.min
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        p.x >= self.min.x
            && p.y >= self.min.y
            && p.z >= self.min.z
            && p.x <= self.max.x
            && p.y <= self.max.y
            && p.z <= self.max.z
    }

    pub fn inflate(&self, margin: T) -> Self {
        let m = Vec3::new(margin, margin, margin);
        Self {
            min: self.min - m,
            max: self.max + m,
        }
    }
}

/// Rotation about a unit axis (Rodrigues).
pub fn rotate<T: Real>(v: Vec3<T>, axis: Vec3<T>, angle: T) -> Vec3<T> {
    let a = axis.normalized();
    let (s, c) = angle.sin_cos();
    v * c + a.cross(v) * s + a * (a.dot(v) * (T::one() - c))
}
