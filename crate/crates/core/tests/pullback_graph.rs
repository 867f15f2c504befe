use proptest::prelude::*;
use wandering_core::curve_complex::{
    build_graph, is_cantor, kappa, kappa_table, lemma_cm_report, predicates, CurveComplexError,
    GraphSpec, PullbackGraph,
};

/// Counts depth-`n` curves per class by walking labelled preimage trees.
/// A node stands for `weight` identical labelled subtrees, so a class
/// with multiplicity 3 below a class with multiplicity 2 is one node of
/// weight 6 rather than six nodes.
fn tree_oracle(m: &[Vec<u32>], depth: usize) -> Vec<u128> {
    fn descend(m: &[Vec<u32>], class: usize, weight: u128, left: usize, out: &mut [u128]) {
        if left == 0 {
            out[class] += weight;
            return;
        }
        for (child, row) in m.iter().enumerate() {
            if row[class] > 0 {
                descend(m, child, weight * row[class] as u128, left - 1, out);
            }
        }
    }
    let mut out = vec![0; m.len()];
    for root in 0..m.len() {
        descend(m, root, 1, depth, &mut out);
    }
    out
}

fn degree_for(m: &[Vec<u32>]) -> u32 {
    (0..m.len())
        .map(|b| m.iter().map(|r| r[b]).sum::<u32>())
        .max()
        .unwrap_or(0)
        .max(2)
}

fn matrix(max_classes: usize, max_mult: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1..=max_classes)
        .prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..=max_mult, n), n))
}

fn irreducible(max_classes: usize, max_mult: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1..=max_classes)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(prop::collection::vec(0..=max_mult, n), n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec(1..=max_mult, n),
            )
        })
        .prop_map(|(mut m, order, fill)| {
            // force a cyclic order of all classes into the support
            let n = m.len();
            for k in 0..n {
                let (a, b) = (order[k], order[(k + 1) % n]);
                if m[a][b] == 0 {
                    m[a][b] = fill[k];
                }
            }
            m
        })
}

fn graph(m: Vec<Vec<u32>>) -> PullbackGraph {
    let d = degree_for(&m);
    PullbackGraph::from_matrix(m, None, d).unwrap()
}

#[test]
fn recurrence_matches_tree_on_hand_graphs() {
    let cases = [
        vec![vec![2]],
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![1, 1], vec![0, 1]],
        vec![vec![3, 0, 1], vec![1, 0, 2], vec![0, 2, 0]],
    ];
    for m in cases {
        let g = graph(m.clone());
        let table = kappa_table(&g, 8).unwrap();
        for (n, k) in table.iter().enumerate() {
            assert_eq!(k.values, tree_oracle(&m, n), "{m:?} depth {n}");
        }
    }
}

#[test]
fn polynomial_growth_needs_every_class() {
    // κ_n = (n + 1, 1): unbounded with only unit cycles, but class 1 stays at 1
    let g = graph(vec![vec![1, 1], vec![0, 1]]);
    assert_eq!(kappa(&g, 7).unwrap().values, vec![8, 1]);
    assert!(!is_cantor(&g).unwrap().verdict);
    let g = graph(vec![vec![1, 1], vec![1, 1]]);
    assert!(is_cantor(&g).unwrap().verdict);
}

#[test]
fn json_round_trip_and_errors() {
    let spec: GraphSpec = serde_json::from_str(
        r#"{"classes": ["a", "b"], "degree": 4,
            "edges": [{"from": "a", "to": "b", "mult": 1}, {"from": "b", "to": "a", "mult": 2},
                      {"from": "a", "to": "b", "mult": 1}]}"#,
    )
    .unwrap();
    let g = build_graph(spec).unwrap();
    assert_eq!(g.matrix(), &[vec![0, 2], vec![2, 0]]);
    assert_eq!(build_graph(g.to_spec()).unwrap(), g);

    let over: GraphSpec = serde_json::from_str(
        r#"{"classes": ["a"], "degree": 2, "edges": [{"from": "a", "to": "a", "mult": 3}]}"#,
    )
    .unwrap();
    assert!(matches!(
        build_graph(over),
        Err(CurveComplexError::DegreeBound { used: 3, .. })
    ));
    let dup: GraphSpec = serde_json::from_str(r#"{"classes": ["a", "a"], "degree": 2}"#).unwrap();
    assert_eq!(
        build_graph(dup),
        Err(CurveComplexError::DuplicateClass("a".into()))
    );
    let empty: GraphSpec = serde_json::from_str(r#"{"classes": [], "degree": 2}"#).unwrap();
    assert_eq!(build_graph(empty), Err(CurveComplexError::EmptyClassSet));
}

proptest! {
    #[test]
    fn recurrence_matches_tree(m in matrix(5, 3)) {
        let g = graph(m.clone());
        let table = kappa_table(&g, 8);
        prop_assume!(table.is_ok());
        for (n, k) in table.unwrap().iter().enumerate() {
            prop_assert_eq!(&k.values, &tree_oracle(&m, n));
        }
    }

    #[test]
    fn kappa_zero_is_one(m in matrix(6, 3)) {
        let g = graph(m);
        if g.is_pre_stable() {
            prop_assert!(kappa(&g, 0).unwrap().values.iter().all(|&k| k == 1));
        } else {
            prop_assert!(matches!(kappa(&g, 0), Err(CurveComplexError::NotPreStable(_))));
        }
    }

    #[test]
    fn total_count_grows_when_columns_cover(m in matrix(6, 3)) {
        let g = graph(m);
        prop_assume!(g.is_pre_stable());
        let cover = (0..g.len()).all(|b| g.column_sum(b) >= 1);
        let table = kappa_table(&g, 10).unwrap();
        for w in table.windows(2) {
            if cover {
                prop_assert!(w[1].values.iter().sum::<u128>() >= w[0].values.iter().sum::<u128>());
            }
            prop_assert!(w[1].values.iter().all(|&k| k >= 1));
        }
    }

    #[test]
    fn five_conditions_agree(m in irreducible(6, 3)) {
        let g = graph(m);
        prop_assert!(predicates(&g).irreducible);
        let r = lemma_cm_report(&g).unwrap();
        let a = r.as_array();
        prop_assert!(a.iter().all(|&x| x == a[0]), "{:?}", a);
        prop_assert!(r.all_agree);
    }

    #[test]
    fn structural_and_empirical_agree(m in matrix(6, 3)) {
        let g = graph(m);
        if let Ok(v) = is_cantor(&g) {
            prop_assert!(v.agree, "{:?}", g.matrix());
            prop_assert_eq!(v.verdict, v.classes.iter().all(|c| c.unbounded));
        }
    }

    #[test]
    fn cantor_matches_long_horizon_growth(m in matrix(4, 2)) {
        // κ_n(γ) bounded ⟺ it stays below its value at a long horizon's
        // first half; with ≤ 4 classes depth 40 is far past any transient
        let g = graph(m);
        prop_assume!(g.is_pre_stable());
        let v = is_cantor(&g).unwrap();
        let t = kappa_table(&g, 40).unwrap();
        for (c, growth) in v.classes.iter().enumerate() {
            let early = t[..=20].iter().map(|k| k.values[c]).max().unwrap();
            prop_assert_eq!(growth.unbounded, t[40].values[c] > early, "class {}", c);
        }
    }
}
