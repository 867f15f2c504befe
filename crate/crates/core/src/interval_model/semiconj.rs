use serde::Serialize;

use super::IntervalSystem;
use crate::annulus_engine::AnnularSystemSpec;
use crate::coding::Code;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiconjugacyReport {
    pub holds: bool,
    pub codes_checked: usize,
    pub witness: Option<Vec<usize>>,
    pub reason: Option<String>,
}

fn close<T: Scalar>(a: &(T, T), b: &(T, T)) -> bool {
    let tol = T::containment_tol();
    (a.0.clone() - b.0.clone()).abs() <= tol && (a.1.clone() - b.1.clone()).abs() <= tol
}

/// Code-level check of `σ ∘ π = π ∘ g` over every valid annular code of
/// length `1..=n`, where `pi[i]` is the subinterval shadowing subannulus
/// `i`. Besides the shift identity, the boundary circles shared by each
/// nested annulus must match the endpoints its interval shares with the
/// parent interval.
pub fn semiconjugacy_check<T: Scalar>(
    sys: &IntervalSystem<T>,
    spec: &AnnularSystemSpec,
    n: usize,
    pi: &[usize],
) -> SemiconjugacyReport {
    let graph = spec.branch_graph();
    let sys_graph = sys.branch_graph();
    let mut checked = 0usize;
    let fail = |code: &[usize], why: String, checked: usize| SemiconjugacyReport {
        holds: false,
        codes_checked: checked,
        witness: Some(code.to_vec()),
        reason: Some(why),
    };
    if pi.len() != spec.subannuli.len() || pi.iter().any(|&k| k >= sys.subs().len()) {
        return fail(&[], "index map does not cover the branches".into(), 0);
    }
    for len in 1..=n {
        for c in graph.codes(len) {
            checked += 1;
            let image: Vec<usize> = c.iter().map(|&i| pi[i]).collect();
            if !sys_graph.is_valid_code(&image) {
                return fail(&c, "image code is not admissible".into(), checked);
            }
            let s0 = &sys.subs()[image[0]];
            if s0.target != spec.subannuli[c[0]].target || s0.parent != spec.subannuli[c[0]].parent
            {
                return fail(&c, "branch components disagree".into(), checked);
            }
            let j = sys.point_of_code(&image).expect("admissible");
            let pushed = sys.push(image[0], &j.0, &j.1);
            let shifted = if len == 1 {
                sys.interval(s0.target)
            } else {
                sys.point_of_code(&image[1..]).expect("admissible")
            };
            if !close(&pushed, &shifted) {
                return fail(&c, "shift identity fails".into(), checked);
            }
            // boundary sharing: inner ↔ left endpoint, outer ↔ right endpoint
            let (inner, outer) = shared_sides(spec, &c);
            let (l, r) = sys.interval(s0.parent);
            let tol = T::containment_tol();
            let left = (j.0.clone() - l).abs() <= tol;
            let right = (j.1.clone() - r).abs() <= tol;
            if (inner, outer) != (left, right) {
                return fail(
                    &c,
                    "boundary sharing disagrees with endpoints".into(),
                    checked,
                );
            }
        }
    }
    SemiconjugacyReport {
        holds: true,
        codes_checked: checked,
        witness: None,
        reason: None,
    }
}

/// Which boundary circles of the root component the nested annulus of a
/// finite code still shares.
fn shared_sides(spec: &AnnularSystemSpec, code: &[usize]) -> (bool, bool) {
    match crate::annulus_engine::fate::break_depth(
        spec,
        &Code::Finite(code.to_vec()),
        0,
        code.len(),
    ) {
        Ok(_) => (false, false),
        Err(flags) => flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus_engine::{AnnulusComponent, Subannulus};
    use crate::coding::Orientation;
    use num_rational::BigRational;
    use num_traits::Signed;

    fn swap_spec() -> AnnularSystemSpec {
        let comp = |n: &str| AnnulusComponent {
            name: n.into(),
            boundaries: None,
            modulus: None,
        };
        let sub = |parent, inner, outer, target, o| Subannulus {
            parent,
            essential: true,
            shares_inner: inner,
            shares_outer: outer,
            target,
            degree: 2,
            orientation: o,
        };
        AnnularSystemSpec {
            components: vec![comp("A"), comp("B")],
            subannuli: vec![
                sub(0, true, false, 1, Orientation::Preserving),
                sub(0, false, true, 1, Orientation::Reversing),
                sub(1, true, false, 0, Orientation::Reversing),
                sub(1, false, true, 0, Orientation::Preserving),
            ],
        }
    }

    #[test]
    fn swap_system_commutes() {
        let spec = swap_spec();
        let sys = IntervalSystem::<BigRational>::from_annular_spec(&spec).unwrap();
        for s in sys.subs() {
            assert_eq!(s.slope().abs(), BigRational::from_ratio(2, 1));
        }
        let r = semiconjugacy_check(&sys, &spec, 6, &[0, 1, 2, 3]);
        assert!(r.holds, "{r:?}");
        assert_eq!(r.codes_checked, 4 + 8 + 16 + 32 + 64 + 128);
    }

    #[test]
    fn corrupted_target_detected() {
        let spec = swap_spec();
        let sys = IntervalSystem::<BigRational>::from_annular_spec(&spec).unwrap();
        let mut bad = spec.clone();
        bad.subannuli[0].target = 0;
        let r = semiconjugacy_check(&sys, &bad, 3, &[0, 1, 2, 3]);
        assert!(!r.holds);
        assert!(r.witness.is_some());
    }

    #[test]
    fn corrupted_orientation_detected() {
        let mut spec = swap_spec();
        let sys = IntervalSystem::<BigRational>::from_annular_spec(&spec).unwrap();
        spec.subannuli[1].orientation = Orientation::Preserving;
        let r = semiconjugacy_check(&sys, &spec, 3, &[0, 1, 2, 3]);
        assert!(!r.holds);
    }
}
