use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> Point<T> {
    pub fn new(re: T, im: T) -> Self {
        Point::Finite(Complex::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        Point::Finite(Complex::new(T::lit(x), T::zero()))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(&self) -> Option<Complex<T>> {
        match self {
            Point::Finite(z) => Some(*z),
            Point::Infinity => None,
        }
    }

    /// Position on the unit sphere, with ∞ at the north pole.
    pub fn to_xyz(&self) -> [T; 3] {
        match self {
            Point::Infinity => [T::zero(), T::zero(), T::one()],
            Point::Finite(z) => {
                let r2 = z.norm_sqr();
                let s = T::one() + r2;
                let two = T::lit(2.0);
                [two * z.re / s, two * z.im / s, (r2 - T::one()) / s]
            }
        }
    }

    pub fn from_xyz(p: [T; 3]) -> Self {
        let [x, y, z] = p;
        let d = T::one() - z;
        if d <= T::epsilon() {
            Point::Infinity
        } else {
            Point::new(x / d, y / d)
        }
    }

    /// Chordal distance; 2 between antipodes.
    pub fn chordal(&self, other: &Self) -> T {
        let two = T::lit(2.0);
        match (self, other) {
            (Point::Infinity, Point::Infinity) => T::zero(),
            (Point::Finite(z), Point::Infinity) | (Point::Infinity, Point::Finite(z)) => {
                two / (T::one() + z.norm_sqr()).sqrt()
            }
            (Point::Finite(z), Point::Finite(w)) => {
                two * (z - w).norm()
                    / ((T::one() + z.norm_sqr()) * (T::one() + w.norm_sqr())).sqrt()
            }
        }
    }

    /// Snap to ∞ or to the real axis when within `tol` (chordal).
    pub fn snapped(&self, tol: T) -> Self {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Finite(z) => {
                if self.chordal(&Point::Infinity) < tol {
                    Point::Infinity
                } else {
                    let r = Point::Finite(Complex::new(z.re, T::zero()));
                    if self.chordal(&r) < tol {
                        r
                    } else {
                        *self
                    }
                }
            }
        }
    }
}

/// Planar chart `ζ = 1/(z - q)` (or `ζ = z` when `q = ∞`) in which every
/// point away from `q` is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chart<T> {
    pub pole: Point<T>,
}

impl<T: Real> Chart<T> {
    pub fn new(pole: Point<T>) -> Self {
        Chart { pole }
    }

    pub fn to_plane(&self, p: &Point<T>) -> Option<Complex<T>> {
        match (self.pole, p) {
            (Point::Infinity, Point::Finite(z)) => Some(*z),
            (Point::Infinity, Point::Infinity) => None,
            (Point::Finite(_), Point::Infinity) => Some(Complex::new(T::zero(), T::zero())),
            (Point::Finite(q), Point::Finite(z)) => {
                let d = z - q;
                if d.norm_sqr() == T::zero() {
                    None
                } else {
                    Some(d.inv())
                }
            }
        }
    }

    pub fn from_plane(&self, w: Complex<T>) -> Point<T> {
        match self.pole {
            Point::Infinity => Point::Finite(w),
            Point::Finite(q) => {
                if w.norm_sqr() == T::zero() {
                    Point::Infinity
                } else {
                    Point::Finite(q + w.inv())
                }
            }
        }
    }
}

/// Roughly uniform points on the sphere (Fibonacci lattice).
pub fn sphere_samples<T: Real>(n: usize) -> Vec<Point<T>> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = 2.0 * std::f64::consts::PI * k as f64 / golden;
            Point::from_xyz([T::lit(r * phi.cos()), T::lit(r * phi.sin()), T::lit(z)])
        })
        .collect()
}

pub(crate) fn dist3<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Distance from `p` to the chord `[a, b]` in R³.
pub(crate) fn dist3_segment<T: Real>(p: &[T; 3], a: &[T; 3], b: &[T; 3]) -> T {
    let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let ap = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
    if len2 <= T::zero() {
        return dist3(p, a);
    }
    let t = ((ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / len2)
        .max(T::zero())
        .min(T::one());
    let q = [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]];
    dist3(p, &q)
}

/// Distance from `p` to the great-circle arc between unit vectors `a`, `b`
/// (the image of normalized linear interpolation).
pub(crate) fn dist3_arc<T: Real>(p: &[T; 3], a: &[T; 3], b: &[T; 3]) -> T {
    let n = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let ends = dist3(p, a).min(dist3(p, b));
    if nn <= T::epsilon() {
        return ends;
    }
    let n = [n[0] / nn, n[1] / nn, n[2] / nn];
    let pn = p[0] * n[0] + p[1] * n[1] + p[2] * n[2];
    let q = [p[0] - pn * n[0], p[1] - pn * n[1], p[2] - pn * n[2]];
    let ql = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    if ql <= T::epsilon() {
        return ends;
    }
    let q = [q[0] / ql, q[1] / ql, q[2] / ql];
    // q lies on the arc when it is on the a-side of b and the b-side of a
    let side = |u: &[T; 3], v: &[T; 3]| {
        let c = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        c[0] * n[0] + c[1] * n[1] + c[2] * n[2]
    };
    if side(a, &q) >= T::zero() && side(&q, b) >= T::zero() {
        dist3(p, &q)
    } else {
        ends
    }
}
