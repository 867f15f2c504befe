//! Seeded generators for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::annulus_engine::{AnnularSystemSpec, AnnulusComponent, Subannulus};
use crate::coding::Orientation;
use crate::curve_complex::PullbackGraph;

fn degree_for(matrix: &[Vec<u32>]) -> u32 {
    let n = matrix.len();
    (0..n)
        .map(|b| matrix.iter().map(|r| r[b]).sum::<u32>())
        .max()
        .unwrap_or(0)
        .max(2)
}

/// Random pullback graph with `1..=max_classes` classes and entries
/// `0..=max_mult`; the degree is the smallest admissible one.
pub fn random_graph<R: Rng>(rng: &mut R, max_classes: usize, max_mult: u32) -> PullbackGraph {
    let n = rng.gen_range(1..=max_classes);
    let matrix: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        rng.gen_range(0..=max_mult)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let d = degree_for(&matrix);
    PullbackGraph::from_matrix(matrix, None, d).expect("valid by construction")
}

/// Irreducible and pre-stable: a random cyclic order of the classes is
/// forced into the support.
pub fn random_irreducible_graph<R: Rng>(
    rng: &mut R,
    max_classes: usize,
    max_mult: u32,
) -> PullbackGraph {
    let n = rng.gen_range(1..=max_classes);
    let mut matrix: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        rng.gen_range(0..=max_mult)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 0..n {
        let (a, b) = (order[k], order[(k + 1) % n]);
        if matrix[a][b] == 0 {
            matrix[a][b] = rng.gen_range(1..=max_mult);
        }
    }
    let d = degree_for(&matrix);
    PullbackGraph::from_matrix(matrix, None, d).expect("valid by construction")
}

/// Syntactically valid spec: `1..=max_components` components and at most
/// `max_subs` subannuli, at least one per component. Not necessarily an
/// annular system.
pub fn random_spec<R: Rng>(
    rng: &mut R,
    max_components: usize,
    max_subs: usize,
) -> AnnularSystemSpec {
    let k = rng.gen_range(1..=max_components.min(max_subs));
    let total = rng.gen_range(k..=max_subs);
    let mut per = vec![1usize; k];
    for _ in k..total {
        per[rng.gen_range(0..k)] += 1;
    }
    let mut subannuli = Vec::new();
    for (parent, &count) in per.iter().enumerate() {
        for i in 0..count {
            let (shares_inner, shares_outer) = if count == 1 {
                (rng.gen_bool(0.3), rng.gen_bool(0.3))
            } else {
                (
                    i == 0 && rng.gen_bool(0.5),
                    i + 1 == count && rng.gen_bool(0.5),
                )
            };
            subannuli.push(Subannulus {
                parent,
                essential: true,
                shares_inner,
                shares_outer,
                target: rng.gen_range(0..k),
                degree: rng.gen_range(1..=3),
                orientation: if rng.gen_bool(0.5) {
                    Orientation::Preserving
                } else {
                    Orientation::Reversing
                },
            });
        }
    }
    AnnularSystemSpec {
        components: (0..k)
            .map(|j| AnnulusComponent {
                name: format!("A{j}"),
                boundaries: None,
                modulus: None,
            })
            .collect(),
        subannuli,
    }
}

/// Rejection-samples [`random_spec`] until it is an annular system.
pub fn random_annular_spec<R: Rng>(
    rng: &mut R,
    max_components: usize,
    max_subs: usize,
) -> AnnularSystemSpec {
    loop {
        let s = random_spec(rng, max_components, max_subs);
        if s.validate().is_ok_and(|v| v.is_annular_system) {
            return s;
        }
    }
}

/// Random self-map of `0..n`.
pub fn random_tau<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}
