//! Planar vectors, 2x2 matrices and triangles.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A vector in the plane of a translation chart.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 2]", into = "[T; 2]")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> From<[T; 2]> for Vec2<T> {
    fn from([x, y]: [T; 2]) -> Self {
        Vec2 { x, y }
    }
}

impl<T: Real> From<Vec2<T>> for [T; 2] {
    fn from(v: Vec2<T>) -> Self {
        [v.x, v.y]
    }
}

impl<T: Real> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Vec2::new(T::zero(), T::zero())
    }

    /// Unit vector at angle `theta` from the positive x axis.
    #[inline]
    pub fn from_angle(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product; positive when `o` is
    /// counterclockwise from `self`.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Direction angle in `[0, 2π)`.
    pub fn angle(self) -> T {
        let a = self.y.atan2(self.x);
        if a < T::zero() {
            a + T::TAU()
        } else {
            a
        }
    }

    /// Counterclockwise angle from `self` to `o`, in `(-π, π]`.
    #[inline]
    pub fn angle_to(self, o: Self) -> T {
        self.cross(o).atan2(self.dot(o))
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Vec2::new(self.x * s, self.y * s)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Componentwise comparison within `tol`.
    #[inline]
    pub fn approx_eq(self, o: Self, tol: T) -> bool {
        (self.x - o.x).abs() <= tol && (self.y - o.y).abs() <= tol
    }

    pub fn cast<U: Real>(self) -> Vec2<U> {
        Vec2::new(U::from(self.x).unwrap_or_else(U::nan), U::from(self.y).unwrap_or_else(U::nan))
    }
}

impl<T: Real> Add for Vec2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> AddAssign for Vec2<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Real> SubAssign for Vec2<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Vec2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

impl<T: Real> Mul<T> for Vec2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Real 2x2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Mat2<T> {
    #[inline]
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// Teichmüller geodesic flow `diag(e^t, e^{-t})`.
    pub fn geodesic(t: T) -> Self {
        Mat2::new(t.exp(), T::zero(), T::zero(), (-t).exp())
    }

    /// Horocycle flow `[[1, s], [0, 1]]`.
    pub fn horocycle(s: T) -> Self {
        Mat2::new(T::one(), s, T::zero(), T::one())
    }

    /// Counterclockwise rotation by `theta` radians.
    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    /// Linear part of the reflection across a line with direction `dir`.
    pub fn reflection(dir: Vec2<T>) -> Self {
        let alpha = dir.y.atan2(dir.x);
        let (s, c) = (alpha + alpha).sin_cos();
        Mat2::new(c, s, s, -c)
    }

    #[inline]
    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det))
    }

    #[inline]
    pub fn apply(&self, v: Vec2<T>) -> Vec2<T> {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn approx_eq(&self, o: &Self, tol: T) -> bool {
        (self.a - o.a).abs() <= tol
            && (self.b - o.b).abs() <= tol
            && (self.c - o.c).abs() <= tol
            && (self.d - o.d).abs() <= tol
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl<T: Real> Mul<Vec2<T>> for Mat2<T> {
    type Output = Vec2<T>;
    #[inline]
    fn mul(self, v: Vec2<T>) -> Vec2<T> {
        self.apply(v)
    }
}

/// A Euclidean triangle given by its three side vectors in counterclockwise
/// order. Corner `i` is the start of side `i`; corner 0 sits at the origin
/// of the triangle's local frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Triangle<T> {
    pub edges: [Vec2<T>; 3],
}

impl<T: Real> Triangle<T> {
    pub fn new(e0: Vec2<T>, e1: Vec2<T>, e2: Vec2<T>) -> Self {
        Triangle { edges: [e0, e1, e2] }
    }

    /// Triangle with the given corners (counterclockwise).
    pub fn from_corners(p0: Vec2<T>, p1: Vec2<T>, p2: Vec2<T>) -> Self {
        Triangle::new(p1 - p0, p2 - p1, p0 - p2)
    }

    #[inline]
    pub fn edge(&self, i: usize) -> Vec2<T> {
        self.edges[i % 3]
    }

    /// Position of corner `i` in the local frame.
    #[inline]
    pub fn corner(&self, i: usize) -> Vec2<T> {
        match i % 3 {
            0 => Vec2::zero(),
            1 => self.edges[0],
            _ => self.edges[0] + self.edges[1],
        }
    }

    pub fn signed_area(&self) -> T {
        self.edges[0].cross(self.edges[1]) / T::lit(2.0)
    }

    /// Interior angle at corner `i`.
    pub fn corner_angle(&self, i: usize) -> T {
        let out = self.edge(i);
        let back = -self.edge(i + 2);
        out.angle_to(back)
    }

    pub fn closure_defect(&self) -> Vec2<T> {
        self.edges[0] + self.edges[1] + self.edges[2]
    }

    pub fn map(&self, m: &Mat2<T>) -> Self {
        Triangle::new(m.apply(self.edges[0]), m.apply(self.edges[1]), m.apply(self.edges[2]))
    }

    /// Whether local point `p` lies strictly inside, at distance more than
    /// `margin` from every side.
    pub fn contains_strict(&self, p: Vec2<T>, margin: T) -> bool {
        (0..3).all(|i| {
            let e = self.edge(i);
            e.cross(p - self.corner(i)) / e.norm() > margin
        })
    }
}
