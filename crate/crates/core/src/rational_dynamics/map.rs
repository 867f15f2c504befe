use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::{cluster_roots, Poly};
use super::sphere::Point;
use super::DynamicsError;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint<T> {
    pub point: Point<T>,
    pub multiplicity: usize,
    /// Relative residual of the derivative numerator after polishing.
    pub residual: f64,
    /// Radius of the root cluster that was merged into this point.
    pub spread: f64,
}

/// `f = num / den` on the Riemann sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap<T> {
    num: Poly<T>,
    den: Poly<T>,
    degree: usize,
    critical: Vec<CriticalPoint<T>>,
    critical_values: Vec<Point<T>>,
}

/// Coefficient lists as `[re, im]` pairs, ascending powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub numerator: Vec<[f64; 2]>,
    pub denominator: Vec<[f64; 2]>,
}

const COPRIME_TOL: f64 = 1e-9;
const CLUSTER_TOL: f64 = 1e-5;

impl<T: Real> RationalMap<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self, DynamicsError> {
        if den.is_zero() {
            return Err(DynamicsError::InvalidMap("zero denominator".into()));
        }
        let degree = num.degree().max(den.degree());
        if num.is_zero() || degree < 2 {
            return Err(DynamicsError::InvalidMap(format!("degree {degree} < 2")));
        }
        // common roots would make the representation non-reduced
        let scale = |p: &Poly<T>, z: Complex<T>| {
            p.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * z.norm().powi(k as i32))
                .fold(T::zero(), |a, b| a + b)
        };
        for r in den.roots() {
            if num.eval(r).norm() <= T::lit(COPRIME_TOL) * scale(&num, r).max(T::one()) {
                return Err(DynamicsError::InvalidMap(
                    "numerator and denominator share a root".into(),
                ));
            }
        }
        let mut f = RationalMap {
            num,
            den,
            degree,
            critical: Vec::new(),
            critical_values: Vec::new(),
        };
        f.critical = f.compute_critical_points();
        f.critical_values = f.critical.iter().map(|c| f.eval(&c.point)).collect();
        Ok(f)
    }

    pub fn from_spec(spec: &MapSpec) -> Result<Self, DynamicsError> {
        let conv = |v: &[[f64; 2]]| {
            Poly::new(
                v.iter()
                    .map(|[a, b]| Complex::new(T::lit(*a), T::lit(*b)))
                    .collect(),
            )
        };
        RationalMap::new(conv(&spec.numerator), conv(&spec.denominator))
    }

    pub fn to_spec(&self) -> MapSpec {
        let conv = |p: &Poly<T>| {
            p.coeffs
                .iter()
                .map(|c| [c.re.to_f64().unwrap(), c.im.to_f64().unwrap()])
                .collect()
        };
        MapSpec {
            numerator: conv(&self.num),
            denominator: conv(&self.den),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn numerator(&self) -> &Poly<T> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<T> {
        &self.den
    }

    /// Numerator and denominator in the chart around `z` (`z` or `1/z`).
    fn chart_polys(&self, use_inverse: bool) -> (Poly<T>, Poly<T>) {
        if use_inverse {
            (
                self.num.reversed(self.degree),
                self.den.reversed(self.degree),
            )
        } else {
            (self.num.clone(), self.den.clone())
        }
    }

    pub fn eval(&self, p: &Point<T>) -> Point<T> {
        let (n, d) = match p {
            Point::Finite(z) if z.norm() <= T::one() => (self.num.eval(*z), self.den.eval(*z)),
            Point::Finite(z) => {
                let u = z.inv();
                (
                    self.num.reversed(self.degree).eval(u),
                    self.den.reversed(self.degree).eval(u),
                )
            }
            Point::Infinity => {
                let (n, d) = self.chart_polys(true);
                (n.coeffs[0], d.coeffs[0])
            }
        };
        if d.is_zero() {
            Point::Infinity
        } else {
            Point::Finite(n / d)
        }
    }

    /// Numerator of `f'`: `N'D - ND'`.
    pub fn derivative_numerator(&self) -> Poly<T> {
        self.num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()))
    }

    fn compute_critical_points(&self) -> Vec<CriticalPoint<T>> {
        let w = self.derivative_numerator();
        let roots = w.roots();
        let mut out: Vec<CriticalPoint<T>> = cluster_roots(&roots, T::lit(CLUSTER_TOL))
            .into_iter()
            .map(|(z, m, spread)| {
                let scale = w
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.norm() * z.norm().powi(k as i32))
                    .fold(T::zero(), |a, b| a + b);
                let residual = if scale > T::zero() {
                    w.eval(z).norm() / scale
                } else {
                    T::zero()
                };
                CriticalPoint {
                    point: Point::Finite(z),
                    multiplicity: m,
                    residual: residual.to_f64().unwrap(),
                    spread: spread.to_f64().unwrap(),
                }
            })
            .collect();
        let total = 2 * self.degree - 2;
        if w.is_zero() {
            return out;
        }
        if w.degree() < total {
            out.push(CriticalPoint {
                point: Point::Infinity,
                multiplicity: total - w.degree(),
                residual: 0.0,
                spread: 0.0,
            });
        }
        out
    }

    pub fn critical_points(&self) -> &[CriticalPoint<T>] {
        &self.critical
    }

    pub fn critical_values(&self) -> &[Point<T>] {
        &self.critical_values
    }

    /// All solutions of `f(z) = w` with multiplicity.
    pub fn preimages(&self, w: &Point<T>) -> Vec<Point<T>> {
        let (poly, drop) = match w {
            Point::Finite(w) if w.norm() <= T::one() => {
                let p = self.num.sub(&self.den.scale(*w));
                let dg = p.degree();
                (p, self.degree - dg)
            }
            Point::Finite(w) => {
                let p = self.den.sub(&self.num.scale(w.inv()));
                let dg = p.degree();
                (p, self.degree - dg)
            }
            Point::Infinity => (self.den.clone(), self.degree - self.den.degree()),
        };
        let mut out: Vec<Point<T>> = poly.roots().into_iter().map(Point::Finite).collect();
        out.extend(std::iter::repeat(Point::Infinity).take(drop));
        out
    }

    /// Newton's method for `f(z) = w` from `start`, in sphere charts.
    /// Returns the solution, the first Newton iterate and the iteration
    /// count, or `None` if it does not converge within `max_iter`.
    pub fn solve_near(
        &self,
        start: &Point<T>,
        w: &Point<T>,
        max_iter: usize,
        tol: T,
    ) -> Option<(Point<T>, Point<T>, usize)> {
        let mut z = *start;
        let mut first = None;
        for it in 0..=max_iter {
            if self.eval(&z).chordal(w) < tol {
                return Some((z, first.unwrap_or(z), it));
            }
            if it == max_iter {
                break;
            }
            z = self.newton_step(&z, w)?;
            if first.is_none() {
                first = Some(z);
            }
        }
        None
    }

    fn newton_step(&self, z: &Point<T>, w: &Point<T>) -> Option<Point<T>> {
        let (inv, c) = match z {
            Point::Finite(z) if z.norm() <= T::one() => (false, *z),
            Point::Finite(z) => (true, z.inv()),
            Point::Infinity => (true, Complex::zero()),
        };
        let (p, q) = self.chart_polys(inv);
        let (g, dg) = match w {
            Point::Finite(w) if w.norm() <= T::one() => {
                let (pv, pd) = p.eval_d(c);
                let (qv, qd) = q.eval_d(c);
                (pv - qv * w, pd - qd * w)
            }
            Point::Finite(w) => {
                let v = w.inv();
                let (pv, pd) = p.eval_d(c);
                let (qv, qd) = q.eval_d(c);
                (qv - pv * v, qd - pd * v)
            }
            Point::Infinity => q.eval_d(c),
        };
        if dg.is_zero() {
            return None;
        }
        let next = c - g / dg;
        if !(next.re.is_finite() && next.im.is_finite()) {
            return None;
        }
        Some(if inv {
            if next.is_zero() {
                Point::Infinity
            } else {
                Point::Finite(next.inv())
            }
        } else {
            Point::Finite(next)
        })
    }
}
