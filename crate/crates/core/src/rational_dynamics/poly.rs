use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Complex polynomial, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly<T> {
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> Poly<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::zero());
        }
        Poly { coeffs }
    }

    pub fn real(c: &[f64]) -> Self {
        Poly::new(
            c.iter()
                .map(|&x| Complex::new(T::lit(x), T::zero()))
                .collect(),
        )
    }

    pub fn constant(c: Complex<T>) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex<T> {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Value and first derivative.
    pub fn eval_d(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::constant(Complex::zero());
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize(k).unwrap())
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, k: usize| p.coeffs.get(k).copied().unwrap_or_else(Complex::zero);
        Poly::new((0..n).map(|k| get(self, k) - get(other, k)).collect())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `z^d p(1/z)`, for `d ≥ deg p`.
    pub fn reversed(&self, d: usize) -> Self {
        let mut c = vec![Complex::zero(); d + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            if k <= d {
                c[d - k] = a;
            }
        }
        Poly::new(c)
    }

    /// All roots with multiplicity (Aberth–Ehrlich, then Newton polish).
    pub fn roots(&self) -> Vec<Complex<T>> {
        let mut zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return Vec::new();
        }
        let core = Poly::new(self.coeffs[zeros..].to_vec());
        let mut out: Vec<Complex<T>> = Vec::with_capacity(self.degree());
        while zeros > 0 {
            out.push(Complex::zero());
            zeros -= 1;
        }
        out.extend(aberth(&core));
        out
    }
}

fn aberth<T: Real>(p: &Poly<T>) -> Vec<Complex<T>> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let lead = p.leading();
    let monic = Poly::new(p.coeffs.iter().map(|&c| c / lead).collect());
    if n == 1 {
        return vec![-monic.coeffs[0]];
    }
    let radius = {
        let a0 = monic.coeffs[0].norm();
        if a0 > T::zero() {
            a0.powf(T::one() / T::from_usize(n).unwrap())
        } else {
            T::one()
        }
    };
    let tau = T::lit(std::f64::consts::TAU);
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let th = tau * T::from_usize(k).unwrap() / T::from_usize(n).unwrap() + T::lit(0.4);
            Complex::from_polar(radius, th)
        })
        .collect();
    let eps = T::epsilon() * T::lit(4.0);
    for _ in 0..2000 {
        let mut moved = T::zero();
        for k in 0..n {
            let (v, dv) = monic.eval_d(z[k]);
            if v.is_zero() {
                continue;
            }
            let ratio = v / dv;
            let mut s = Complex::zero();
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if !d.is_zero() {
                        s = s + d.inv();
                    }
                }
            }
            let step = ratio / (Complex::new(T::one(), T::zero()) - ratio * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] = z[k] - step;
                moved = moved.max(step.norm() / (T::one() + z[k].norm()));
            }
        }
        if moved < eps {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = monic.eval_d(*r);
            if dv.is_zero() {
                break;
            }
            let next = *r - v / dv;
            if monic.eval(next).norm() < v.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    z
}

/// Roots merged into clusters with multiplicity: `(centre, multiplicity,
/// spread)`, where the spread is the cluster's radius before merging.
pub fn cluster_roots<T: Real>(roots: &[Complex<T>], tol: T) -> Vec<(Complex<T>, usize, T)> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        used[i] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..roots.len() {
                if !used[j]
                    && members.iter().any(|&m| {
                        (roots[m] - roots[j]).norm() <= tol * (T::one() + roots[m].norm())
                    })
                {
                    used[j] = true;
                    members.push(j);
                    grew = true;
                }
            }
        }
        let k = T::from_usize(members.len()).unwrap();
        let centre = members
            .iter()
            .fold(Complex::zero(), |acc: Complex<T>, &m| acc + roots[m])
            / k;
        let spread = members
            .iter()
            .map(|&m| (roots[m] - centre).norm())
            .fold(T::zero(), T::max);
        out.push((centre, members.len(), spread));
    }
    out
}
