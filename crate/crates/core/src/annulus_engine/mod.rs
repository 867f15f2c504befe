//! Annular systems described combinatorially: validation, degree growth,
//! the fate of nested annuli along a code, and log-coordinate hulls.

pub(crate) mod fate;
mod growth;
mod hull;
mod spec;

use thiserror::Error;

pub use fate::{
    compactly_contained, component_class, nested_fate, ComponentClass, NestedFate, DEFAULT_HORIZON,
};
pub use growth::degree_growth_n;
pub use hull::{hull_annulus, hulls_to_csv, realize_log, Hull, LogBranch, LogRealization};
pub use spec::{AnnularSystemSpec, AnnulusComponent, Side, Subannulus, Validation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnulusError {
    #[error("system has no components")]
    Empty,
    #[error("subannulus {0} refers to a missing component")]
    DanglingIndex(usize),
    #[error("subannulus {0} is not essential in its parent")]
    NotEssential(usize),
    #[error("subannulus {0} has degree 0")]
    ZeroDegree(usize),
    #[error("a boundary circle of component {0} is claimed more than once")]
    BoundaryShared(usize),
    #[error("not an annular system")]
    NotAnnular,
    #[error("invalid code {0:?}")]
    InvalidCode(Vec<usize>),
    #[error("boundary persists from depth {0}: the nested intersection is empty")]
    EmptyChain(usize),
    #[error("no log realization: {0}")]
    Realization(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{champernowne, Code, Orientation};
    use num_rational::BigRational;

    type Q = BigRational;

    fn comp(name: &str) -> AnnulusComponent {
        AnnulusComponent {
            name: name.into(),
            boundaries: None,
            modulus: None,
        }
    }

    fn sub(
        parent: usize,
        inner: bool,
        outer: bool,
        target: usize,
        degree: u32,
        o: i8,
    ) -> Subannulus {
        Subannulus {
            parent,
            essential: true,
            shares_inner: inner,
            shares_outer: outer,
            target,
            degree,
            orientation: Orientation::try_from(o).unwrap(),
        }
    }

    fn z3() -> AnnularSystemSpec {
        AnnularSystemSpec {
            components: vec![comp("A")],
            subannuli: vec![sub(0, true, false, 0, 3, 1), sub(0, false, true, 0, 3, -1)],
        }
    }

    #[test]
    fn validate_examples() {
        let v = z3().validate().unwrap();
        assert!(v.is_annular_system && v.is_exact && !v.is_proper);
        assert_eq!(v.witness_n, Some(1));

        let whole = AnnularSystemSpec {
            components: vec![comp("A")],
            subannuli: vec![sub(0, true, true, 0, 1, 1)],
        };
        let v = whole.validate().unwrap();
        assert!(!v.is_annular_system);
        assert!(v.degree_one_cycle.is_some());

        // a single proper branch is never disconnected, whatever its degree
        let single = AnnularSystemSpec {
            components: vec![comp("A")],
            subannuli: vec![sub(0, false, false, 0, 2, 1)],
        };
        let v = single.validate().unwrap();
        assert!(v.is_proper && !v.is_annular_system);

        let two_proper = AnnularSystemSpec {
            components: vec![comp("A")],
            subannuli: vec![
                sub(0, false, false, 0, 2, 1),
                sub(0, false, false, 0, 2, -1),
            ],
        };
        let v = two_proper.validate().unwrap();
        assert!(v.is_proper && v.is_annular_system && !v.is_exact);
    }

    #[test]
    fn syntax_errors() {
        let mut s = z3();
        s.subannuli[0].target = 3;
        assert_eq!(s.validate(), Err(AnnulusError::DanglingIndex(0)));
        let mut s = z3();
        s.subannuli[1].essential = false;
        assert_eq!(s.validate(), Err(AnnulusError::NotEssential(1)));
        let mut s = z3();
        s.subannuli[1].shares_inner = true;
        assert_eq!(s.validate(), Err(AnnulusError::BoundaryShared(0)));
    }

    #[test]
    fn degree_growth_examples() {
        assert_eq!(degree_growth_n(&z3()).unwrap(), 1);
        let feed = AnnularSystemSpec {
            components: vec![comp("A"), comp("B")],
            subannuli: vec![
                sub(0, true, false, 1, 1, 1),
                sub(0, false, true, 1, 2, 1),
                sub(1, true, false, 0, 2, 1),
                sub(1, false, true, 0, 2, -1),
            ],
        };
        assert_eq!(degree_growth_n(&feed).unwrap(), 2);
    }

    #[test]
    fn fates() {
        let s = z3();
        match nested_fate(&s, &Code::periodic(vec![0]), DEFAULT_HORIZON).unwrap() {
            NestedFate::SharesBoundaryForever {
                from_depth,
                sides,
                exact,
            } => {
                assert_eq!(from_depth, 0);
                assert_eq!(sides, vec![Side::Inner]);
                assert!(exact);
            }
            other => panic!("{other:?}"),
        }
        let alt = nested_fate(&s, &Code::periodic(vec![0, 1]), 12).unwrap();
        assert_eq!(
            alt,
            NestedFate::CompactlyNestedAt {
                depths: vec![2, 4, 6, 8, 10, 12]
            }
        );
        let proper = AnnularSystemSpec {
            components: vec![comp("A")],
            subannuli: vec![
                sub(0, false, false, 0, 2, 1),
                sub(0, false, false, 0, 2, -1),
            ],
        };
        let f = nested_fate(&proper, &Code::Finite(vec![0, 1, 1, 0, 1]), 64).unwrap();
        assert_eq!(
            f,
            NestedFate::CompactlyNestedAt {
                depths: vec![1, 2, 3, 4, 5]
            }
        );
    }

    #[test]
    fn classes() {
        let s = z3();
        assert_eq!(
            component_class(&s, &Code::periodic(vec![1]), 64).unwrap(),
            ComponentClass::Periodic {
                period: 1,
                quasicircle_expected: true
            }
        );
        assert_eq!(
            component_class(
                &s,
                &Code::EventuallyPeriodic {
                    prefix: vec![0],
                    cycle: vec![1]
                },
                64
            )
            .unwrap(),
            ComponentClass::Preperiodic {
                preperiod: 1,
                period: 1
            }
        );
        let ch = Code::Finite(champernowne(2).take(256).collect());
        assert_eq!(
            component_class(&s, &ch, 256).unwrap(),
            ComponentClass::Wandering { horizon: 256 }
        );
        assert_eq!(
            component_class(&s, &Code::periodic(vec![0]), 64),
            Err(AnnulusError::EmptyChain(0))
        );
    }

    #[test]
    fn log_realization_and_hulls() {
        let r = realize_log::<Q>(&z3()).unwrap();
        let q = |a: i64, b: i64| Q::new(a.into(), b.into());
        assert_eq!(r.branches[0].slope, q(3, 1));
        assert_eq!(r.branches[0].offset, q(0, 1));
        assert_eq!(r.branches[1].slope, q(-3, 1));
        assert_eq!(r.branches[1].offset, q(3, 1));
        assert!(r.branches.iter().all(|b| b.conformal));

        let h0 = hull_annulus(&r, &[q(1, 2)], 0).unwrap();
        assert_eq!(h0, vec![Hull::Curve { at: q(1, 2) }]);
        let h1 = hull_annulus(&r, &[q(1, 2)], 1).unwrap();
        assert_eq!(
            h1,
            vec![Hull::Annulus {
                inner: q(1, 6),
                outer: q(5, 6)
            }]
        );
        for n in 2..=10 {
            let h = hull_annulus(&r, &[q(1, 2)], n).unwrap();
            assert!(h[0].contains(&q(3, 10), &q(7, 10)));
        }
        let csv = hulls_to_csv(&[(1, h1)]);
        assert!(csv.contains("1,0,annulus,1/6,5/6"));
    }
}
