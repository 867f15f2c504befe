//! Piecewise-affine interval maps shadowing annular systems.

mod io;
mod semiconj;

use serde::Serialize;
use thiserror::Error;

use crate::annulus_engine::AnnularSystemSpec;
use crate::coding::{BranchGraph, Code, Orientation};
use crate::scalar::Scalar;

pub use io::{parse_scalar, to_csv, IntervalSystemSpec, SubIntervalSpec};
pub use semiconj::{semiconjugacy_check, SemiconjugacyReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("system has no intervals")]
    Empty,
    #[error("interval {0} does not have unit length")]
    NotUnit(usize),
    #[error("intervals {0} and {1} overlap")]
    IntervalsOverlap(usize, usize),
    #[error("subinterval {0} refers to a missing interval")]
    BadIndex(usize),
    #[error("subinterval {0} is empty or reversed")]
    EmptySub(usize),
    #[error("subinterval {0} is not contained in its parent")]
    SubOutsideParent(usize),
    #[error("subintervals {0} and {1} overlap")]
    SubsOverlap(usize, usize),
    #[error("an endpoint of interval {0} is not an endpoint of a subinterval")]
    BoundaryCondition(usize),
    #[error("annular system is not exact; the boundary condition cannot be realized")]
    NotExact,
    #[error("annular spec rejected: {0}")]
    Spec(String),
    #[error("system never disconnects every interval")]
    NotDisconnecting,
    #[error("no expanding iterate up to depth {cap}")]
    NotExpandingWithinHorizon { cap: usize },
    #[error("point escapes at step {0}")]
    Escaped(usize),
    #[error("invalid code {0:?}")]
    InvalidCode(Vec<usize>),
    #[error("cannot parse number {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubInterval<T> {
    pub parent: usize,
    pub target: usize,
    pub left: T,
    pub right: T,
    pub orientation: Orientation,
}

impl<T: Scalar> SubInterval<T> {
    pub fn length(&self) -> T {
        self.right.clone() - self.left.clone()
    }

    /// Signed slope of the affine branch.
    pub fn slope(&self) -> T {
        let s = T::one() / self.length();
        match self.orientation {
            Orientation::Preserving => s,
            Orientation::Reversing => -s,
        }
    }
}

/// Unit intervals `[l_j, l_j + 1]` with affine branches from closed
/// subintervals onto whole intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSystem<T> {
    lefts: Vec<T>,
    subs: Vec<SubInterval<T>>,
    degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthInterval<T> {
    pub code: Vec<usize>,
    pub left: T,
    pub right: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion<T> {
    pub n: usize,
    /// `min |(σ^N)'|` over the depth-`N` intervals.
    pub min_derivative: T,
    pub lambda: f64,
    pub c: f64,
}

pub const EXPANSION_CAP: usize = 64;

fn le_tol<T: Scalar>(a: &T, b: &T) -> bool {
    *a <= b.clone() + T::containment_tol()
}

fn approx_eq<T: Scalar>(a: &T, b: &T) -> bool {
    (a.clone() - b.clone()).abs() <= T::containment_tol()
}

impl<T: Scalar> IntervalSystem<T> {
    pub fn new(lefts: Vec<T>, subs: Vec<SubInterval<T>>) -> Result<Self, IntervalError> {
        if lefts.is_empty() {
            return Err(IntervalError::Empty);
        }
        let n = lefts.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| lefts[a].partial_cmp(&lefts[b]).unwrap());
        for w in order.windows(2) {
            if lefts[w[1]] <= lefts[w[0]].clone() + T::one() {
                return Err(IntervalError::IntervalsOverlap(w[0], w[1]));
            }
        }
        for (i, s) in subs.iter().enumerate() {
            if s.parent >= n || s.target >= n {
                return Err(IntervalError::BadIndex(i));
            }
            if s.right <= s.left {
                return Err(IntervalError::EmptySub(i));
            }
            let l = &lefts[s.parent];
            if !le_tol(l, &s.left) || !le_tol(&s.right, &(l.clone() + T::one())) {
                return Err(IntervalError::SubOutsideParent(i));
            }
        }
        for j in 0..n {
            let mut inside: Vec<usize> = (0..subs.len()).filter(|&i| subs[i].parent == j).collect();
            inside.sort_by(|&a, &b| subs[a].left.partial_cmp(&subs[b].left).unwrap());
            for w in inside.windows(2) {
                if !le_tol(&subs[w[0]].right, &subs[w[1]].left) {
                    return Err(IntervalError::SubsOverlap(w[0], w[1]));
                }
            }
            let l = &lefts[j];
            let r = l.clone() + T::one();
            let left_ok = inside.first().is_some_and(|&i| approx_eq(&subs[i].left, l));
            let right_ok = inside
                .last()
                .is_some_and(|&i| approx_eq(&subs[i].right, &r));
            if !left_ok || !right_ok {
                return Err(IntervalError::BoundaryCondition(j));
            }
        }
        let mut sys = IntervalSystem {
            lefts,
            subs,
            degenerate: false,
        };
        sys.degenerate = sys.branch_graph().disconnection_depths().1.is_none();
        Ok(sys)
    }

    /// Canonical shadow of an exact annular system: component `j` becomes
    /// `[2j, 2j+1]`; its branches get equal length `min(1/count, 1/d_i)`
    /// and are spread evenly, the inner-sharing one at the left end and
    /// the outer-sharing one at the right end.
    pub fn from_annular_spec(spec: &AnnularSystemSpec) -> Result<Self, IntervalError> {
        spec.check_syntax()
            .map_err(|e| IntervalError::Spec(e.to_string()))?;
        if !spec.is_exact() {
            return Err(IntervalError::NotExact);
        }
        let n = spec.components.len();
        let lefts: Vec<T> = (0..n)
            .map(|j| T::from_usize(2 * j).expect("small integer"))
            .collect();
        let mut placed: Vec<Option<SubInterval<T>>> = vec![None; spec.subannuli.len()];
        for (j, base) in lefts.iter().enumerate() {
            let mut order: Vec<usize> = spec.subs_of(j).map(|(i, _)| i).collect();
            // inner-sharing first, outer-sharing last, others in listed order
            order.sort_by_key(|&i| {
                let s = &spec.subannuli[i];
                match (s.shares_inner, s.shares_outer) {
                    (true, _) => 0,
                    (false, true) => 2,
                    _ => 1,
                }
            });
            let count = order.len() as i64;
            let max_deg = order
                .iter()
                .map(|&i| spec.subannuli[i].degree as i64)
                .max()
                .unwrap_or(1);
            let len = if count == 1 {
                T::one()
            } else {
                T::from_ratio(1, count.max(max_deg))
            };
            let gap = if count > 1 {
                (T::one() - len.clone()) / T::from_i64(count - 1).unwrap()
            } else {
                T::zero()
            };
            for (k, &i) in order.iter().enumerate() {
                let s = &spec.subannuli[i];
                let left = base.clone() + gap.clone() * T::from_usize(k).unwrap();
                placed[i] = Some(SubInterval {
                    parent: j,
                    target: s.target,
                    right: left.clone() + len.clone(),
                    left,
                    orientation: s.orientation,
                });
            }
        }
        let subs = placed
            .into_iter()
            .map(|s| s.expect("every branch placed"))
            .collect();
        IntervalSystem::new(lefts, subs)
    }

    pub fn len(&self) -> usize {
        self.lefts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lefts.is_empty()
    }

    pub fn subs(&self) -> &[SubInterval<T>] {
        &self.subs
    }

    /// Set when no depth disconnects every interval.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn interval(&self, j: usize) -> (T, T) {
        (self.lefts[j].clone(), self.lefts[j].clone() + T::one())
    }

    pub fn branch_graph(&self) -> BranchGraph {
        BranchGraph {
            components: self.lefts.len(),
            parents: self.subs.iter().map(|s| s.parent).collect(),
            targets: self.subs.iter().map(|s| s.target).collect(),
        }
    }

    /// The affine branch `i` evaluated at `x`.
    pub fn apply(&self, i: usize, x: &T) -> T {
        let s = &self.subs[i];
        let base = self.lefts[s.target].clone();
        match s.orientation {
            Orientation::Preserving => base + (x.clone() - s.left.clone()) / s.length(),
            Orientation::Reversing => base + (s.right.clone() - x.clone()) / s.length(),
        }
    }

    /// Inverse of branch `i` on its target interval.
    pub fn inverse(&self, i: usize, y: &T) -> T {
        let s = &self.subs[i];
        let u = y.clone() - self.lefts[s.target].clone();
        match s.orientation {
            Orientation::Preserving => s.left.clone() + u * s.length(),
            Orientation::Reversing => s.right.clone() - u * s.length(),
        }
    }

    fn pull(&self, i: usize, a: &T, b: &T) -> (T, T) {
        let (x, y) = (self.inverse(i, a), self.inverse(i, b));
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Image of `[a, b] ⊂ I¹_i` under branch `i`.
    pub fn push(&self, i: usize, a: &T, b: &T) -> (T, T) {
        let (x, y) = (self.apply(i, a), self.apply(i, b));
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Lowest-index subinterval containing `x`.
    pub fn locate(&self, x: &T) -> Option<usize> {
        self.subs
            .iter()
            .position(|s| le_tol(&s.left, x) && le_tol(x, &s.right))
    }

    /// Components of `σ^{-n}(𝕀)` with their codes, sorted by left endpoint.
    pub fn preimage_depth(&self, n: usize) -> Vec<DepthInterval<T>> {
        let mut level: Vec<Vec<DepthInterval<T>>> = (0..self.len())
            .map(|j| {
                let (l, r) = self.interval(j);
                vec![DepthInterval {
                    code: Vec::new(),
                    left: l,
                    right: r,
                }]
            })
            .collect();
        for _ in 0..n {
            let mut next: Vec<Vec<DepthInterval<T>>> = vec![Vec::new(); self.len()];
            for (i, s) in self.subs.iter().enumerate() {
                for d in &level[s.target] {
                    let (left, right) = self.pull(i, &d.left, &d.right);
                    let mut code = Vec::with_capacity(d.code.len() + 1);
                    code.push(i);
                    code.extend_from_slice(&d.code);
                    next[s.parent].push(DepthInterval { code, left, right });
                }
            }
            level = next;
        }
        let mut all: Vec<DepthInterval<T>> = level.into_iter().flatten().collect();
        all.sort_by(|a, b| {
            a.left
                .partial_cmp(&b.left)
                .unwrap()
                .then(a.code.cmp(&b.code))
        });
        all
    }

    /// Interval of points whose itinerary begins with `code`.
    pub fn point_of_code(&self, code: &[usize]) -> Result<(T, T), IntervalError> {
        if !self.branch_graph().is_valid_code(code) {
            return Err(IntervalError::InvalidCode(code.to_vec()));
        }
        let Some(&last) = code.last() else {
            return Err(IntervalError::InvalidCode(Vec::new()));
        };
        let (mut a, mut b) = self.interval(self.subs[last].target);
        for &i in code.iter().rev() {
            (a, b) = self.pull(i, &a, &b);
        }
        Ok((a, b))
    }

    /// First `n` symbols of the orbit of `x`.
    pub fn itinerary(&self, x: &T, n: usize) -> Result<Vec<usize>, IntervalError> {
        let mut code = Vec::with_capacity(n);
        let mut y = x.clone();
        for step in 0..n {
            let Some(i) = self.locate(&y) else {
                return Err(IntervalError::Escaped(step + 1));
            };
            code.push(i);
            y = self.apply(i, &y);
        }
        Ok(code)
    }

    /// Itinerary of `x` as an eventually periodic code when the orbit
    /// returns to an earlier point within `max_steps`, otherwise the
    /// finite prefix.
    pub fn orbit_code(&self, x: &T, max_steps: usize) -> Result<Code, IntervalError> {
        let mut orbit: Vec<T> = vec![x.clone()];
        let mut code = Vec::new();
        for step in 0..max_steps {
            let y = orbit.last().unwrap().clone();
            let Some(i) = self.locate(&y) else {
                return Err(IntervalError::Escaped(step + 1));
            };
            code.push(i);
            let z = self.apply(i, &y);
            if let Some(k) = orbit.iter().position(|p| approx_eq(p, &z)) {
                return Ok(Code::EventuallyPeriodic {
                    prefix: code[..k].to_vec(),
                    cycle: code[k..].to_vec(),
                }
                .normalized());
            }
            orbit.push(z);
        }
        Ok(Code::Finite(code))
    }

    /// Smallest `N ≤ cap` with `min |(σ^N)'| > 1` on `𝕀^N`.
    pub fn expansion(&self, cap: usize) -> Result<Expansion<T>, IntervalError> {
        if self.degenerate {
            return Err(IntervalError::NotDisconnecting);
        }
        let abs_slopes: Vec<T> = self.subs.iter().map(|s| s.slope().abs()).collect();
        // best[j]: min derivative of σ^n over depth-n pieces inside I_j
        let mut best: Vec<Option<T>> = vec![Some(T::one()); self.len()];
        for n in 1..=cap {
            let next: Vec<Option<T>> = (0..self.len())
                .map(|j| {
                    let mut m: Option<T> = None;
                    for (i, s) in self.subs.iter().enumerate().filter(|(_, s)| s.parent == j) {
                        if let Some(b) = &best[s.target] {
                            let v = abs_slopes[i].clone() * b.clone();
                            if m.as_ref().map_or(true, |cur| v < *cur) {
                                m = Some(v);
                            }
                        }
                    }
                    m
                })
                .collect();
            best = next;
            let min = best.iter().flatten().fold(None::<T>, |acc, v| match acc {
                Some(a) if a <= *v => Some(a),
                _ => Some(v.clone()),
            });
            if let Some(min) = min {
                if min > T::one() {
                    let m = min.to_f64_lossy();
                    let lambda = m.powf(1.0 / n as f64);
                    return Ok(Expansion {
                        n,
                        min_derivative: min,
                        lambda,
                        c: 1.0 / m,
                    });
                }
            }
        }
        Err(IntervalError::NotExpandingWithinHorizon { cap })
    }

    /// `|(σ^k)'|` on the depth-`k` piece with the given code.
    pub fn derivative_along(&self, code: &[usize]) -> T {
        code.iter()
            .fold(T::one(), |acc, &i| acc * self.subs[i].slope().abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus_engine::{AnnulusComponent, Subannulus};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::from_ratio(a, b)
    }

    pub(crate) fn z3_spec() -> AnnularSystemSpec {
        AnnularSystemSpec {
            components: vec![AnnulusComponent {
                name: "A".into(),
                boundaries: None,
                modulus: Some(1.0),
            }],
            subannuli: vec![
                Subannulus {
                    parent: 0,
                    essential: true,
                    shares_inner: true,
                    shares_outer: false,
                    target: 0,
                    degree: 3,
                    orientation: Orientation::Preserving,
                },
                Subannulus {
                    parent: 0,
                    essential: true,
                    shares_inner: false,
                    shares_outer: true,
                    target: 0,
                    degree: 3,
                    orientation: Orientation::Reversing,
                },
            ],
        }
    }

    #[test]
    fn z3_shadow_is_middle_thirds() {
        let sys = IntervalSystem::<Q>::from_annular_spec(&z3_spec()).unwrap();
        assert_eq!(sys.subs()[0].left, q(0, 1));
        assert_eq!(sys.subs()[0].right, q(1, 3));
        assert_eq!(sys.subs()[1].left, q(2, 3));
        assert_eq!(sys.subs()[1].right, q(1, 1));
        assert_eq!(sys.subs()[0].slope(), q(3, 1));
        assert_eq!(sys.subs()[1].slope(), q(-3, 1));
        assert!(!sys.is_degenerate());
    }

    #[test]
    fn depth_two_intervals() {
        let sys = IntervalSystem::<Q>::from_annular_spec(&z3_spec()).unwrap();
        let d: Vec<(Q, Q)> = sys
            .preimage_depth(2)
            .into_iter()
            .map(|d| (d.left, d.right))
            .collect();
        assert_eq!(
            d,
            vec![
                (q(0, 1), q(1, 9)),
                (q(2, 9), q(1, 3)),
                (q(2, 3), q(7, 9)),
                (q(8, 9), q(1, 1))
            ]
        );
        assert_eq!(sys.preimage_depth(0).len(), 1);
    }

    #[test]
    fn itineraries() {
        let sys = IntervalSystem::<Q>::from_annular_spec(&z3_spec()).unwrap();
        assert_eq!(sys.itinerary(&q(3, 4), 5).unwrap(), vec![1; 5]);
        assert_eq!(sys.itinerary(&q(1, 4), 3).unwrap(), vec![0, 1, 1]);
        assert_eq!(sys.itinerary(&q(1, 2), 3), Err(IntervalError::Escaped(1)));
        assert_eq!(
            sys.orbit_code(&q(3, 4), 10).unwrap(),
            Code::periodic(vec![1])
        );
        assert_eq!(
            sys.orbit_code(&q(1, 4), 10).unwrap(),
            Code::EventuallyPeriodic {
                prefix: vec![0],
                cycle: vec![1]
            }
        );
        let (a, b) = sys.point_of_code(&[0, 1, 1]).unwrap();
        assert!(a <= q(1, 4) && q(1, 4) <= b);
    }

    #[test]
    fn middle_thirds_expansion() {
        let sys = IntervalSystem::<Q>::from_annular_spec(&z3_spec()).unwrap();
        let e = sys.expansion(EXPANSION_CAP).unwrap();
        assert_eq!(e.n, 1);
        assert_eq!(e.min_derivative, q(3, 1));
        assert!((e.lambda - 3.0).abs() < 1e-12);
        assert!((e.c - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_full_subinterval_is_degenerate() {
        let mut spec = z3_spec();
        spec.subannuli = vec![Subannulus {
            parent: 0,
            essential: true,
            shares_inner: true,
            shares_outer: true,
            target: 0,
            degree: 1,
            orientation: Orientation::Reversing,
        }];
        let sys = IntervalSystem::<Q>::from_annular_spec(&spec).unwrap();
        assert!(sys.is_degenerate());
        assert_eq!(sys.subs()[0].slope(), q(-1, 1));
        assert_eq!(sys.expansion(8), Err(IntervalError::NotDisconnecting));
    }

    #[test]
    fn slow_start_needs_two_steps() {
        // I_0 is carried isometrically onto I_1, which has two half-length
        // branches back onto I_0
        let sys = IntervalSystem::<Q>::new(
            vec![q(0, 1), q(2, 1)],
            vec![
                SubInterval {
                    parent: 0,
                    target: 1,
                    left: q(0, 1),
                    right: q(1, 1),
                    orientation: Orientation::Preserving,
                },
                SubInterval {
                    parent: 1,
                    target: 0,
                    left: q(2, 1),
                    right: q(5, 2),
                    orientation: Orientation::Preserving,
                },
                SubInterval {
                    parent: 1,
                    target: 0,
                    left: q(5, 2),
                    right: q(3, 1),
                    orientation: Orientation::Reversing,
                },
            ],
        )
        .unwrap();
        let e = sys.expansion(8).unwrap();
        assert_eq!(e.n, 2);
        assert_eq!(e.min_derivative, q(2, 1));
    }

    #[test]
    fn float_and_exact_agree() {
        let a = IntervalSystem::<Q>::from_annular_spec(&z3_spec()).unwrap();
        let b = IntervalSystem::<f64>::from_annular_spec(&z3_spec()).unwrap();
        for (x, y) in a.preimage_depth(5).iter().zip(b.preimage_depth(5).iter()) {
            assert_eq!(x.code, y.code);
            assert!((x.left.to_f64_lossy() - y.left).abs() < 1e-12);
        }
    }

    #[test]
    fn malformed_systems_rejected() {
        let sub = |l: Q, r: Q| SubInterval {
            parent: 0,
            target: 0,
            left: l,
            right: r,
            orientation: Orientation::Preserving,
        };
        assert_eq!(
            IntervalSystem::new(vec![q(0, 1)], vec![sub(q(0, 1), q(1, 2))]).unwrap_err(),
            IntervalError::BoundaryCondition(0)
        );
        assert_eq!(
            IntervalSystem::new(
                vec![q(0, 1)],
                vec![sub(q(0, 1), q(2, 3)), sub(q(1, 3), q(1, 1))]
            )
            .unwrap_err(),
            IntervalError::SubsOverlap(0, 1)
        );
        assert_eq!(
            IntervalSystem::new(vec![q(0, 1), q(1, 2)], vec![]).unwrap_err(),
            IntervalError::IntervalsOverlap(0, 1)
        );
    }
}
