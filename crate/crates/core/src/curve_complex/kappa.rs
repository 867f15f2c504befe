use serde::Serialize;

use super::{CurveComplexError, PullbackGraph};

/// Homotopic-preimage counts at a given depth; `values[g]` is `κ_depth(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaVector {
    pub depth: usize,
    pub values: Vec<u128>,
}

/// `κ_n` by the recurrence `κ_{n+1} = M κ_n`, `κ_0 = 1`.
pub fn kappa(graph: &PullbackGraph, n: i64) -> Result<KappaVector, CurveComplexError> {
    if n < 0 {
        return Err(CurveComplexError::NegativeDepth(n));
    }
    Ok(kappa_table(graph, n as usize)?
        .pop()
        .expect("table includes depth 0"))
}

/// `κ_0 ..= κ_n`.
pub fn kappa_table(graph: &PullbackGraph, n: usize) -> Result<Vec<KappaVector>, CurveComplexError> {
    if let Some(g) = graph.first_empty_row() {
        return Err(CurveComplexError::NotPreStable(
            graph.classes()[g].id.clone(),
        ));
    }
    let mut table = Vec::with_capacity(n + 1);
    let mut current = vec![1u128; graph.len()];
    table.push(KappaVector {
        depth: 0,
        values: current.clone(),
    });
    for depth in 1..=n {
        current = step(graph, &current).ok_or(CurveComplexError::Overflow(depth))?;
        table.push(KappaVector {
            depth,
            values: current.clone(),
        });
    }
    Ok(table)
}

fn step(graph: &PullbackGraph, prev: &[u128]) -> Option<Vec<u128>> {
    graph
        .matrix()
        .iter()
        .map(|row| {
            row.iter().zip(prev).try_fold(0u128, |acc, (&m, &k)| {
                acc.checked_add((m as u128).checked_mul(k)?)
            })
        })
        .collect()
}

/// Same recurrence, saturating instead of failing; used by growth heuristics.
pub(crate) fn kappa_saturating(graph: &PullbackGraph, n: usize) -> Vec<Vec<u128>> {
    let mut out = vec![vec![1u128; graph.len()]];
    for _ in 0..n {
        let prev = out.last().unwrap();
        let next = graph
            .matrix()
            .iter()
            .map(|row| {
                row.iter().zip(prev).fold(0u128, |acc, (&m, &k)| {
                    acc.saturating_add((m as u128).saturating_mul(k))
                })
            })
            .collect();
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit preimage-tree expansion: every node is a curve of some class,
    /// its children are its homotopic preimages.
    fn tree_leaves(matrix: &[Vec<u32>], root: usize, depth: usize, out: &mut [u128]) {
        if depth == 0 {
            out[root] += 1;
            return;
        }
        for (g, row) in matrix.iter().enumerate() {
            for _ in 0..row[root] {
                tree_leaves(matrix, g, depth - 1, out);
            }
        }
    }

    fn oracle(matrix: &[Vec<u32>], depth: usize) -> Vec<u128> {
        // κ_n(γ) counts depth-n curves of class γ over all roots.
        let mut out = vec![0u128; matrix.len()];
        for root in 0..matrix.len() {
            tree_leaves(matrix, root, depth, &mut out);
        }
        out
    }

    #[test]
    fn permutation_constant_one() {
        let g = PullbackGraph::from_matrix(vec![vec![0, 1], vec![1, 0]], None, 2).unwrap();
        for n in 0..10 {
            assert_eq!(kappa(&g, n).unwrap().values, vec![1, 1]);
        }
    }

    #[test]
    fn doubling_matches_tree() {
        let m = vec![vec![2]];
        let g = PullbackGraph::from_matrix(m.clone(), None, 4).unwrap();
        assert_eq!(oracle(&m, 3), vec![8]);
        assert_eq!(kappa(&g, 3).unwrap().values, vec![8]);
    }

    #[test]
    fn fibonacci_matches_tree() {
        let m = vec![vec![1, 1], vec![1, 0]];
        let g = PullbackGraph::from_matrix(m.clone(), None, 3).unwrap();
        let expected = [vec![2, 1], vec![3, 2], vec![5, 3]];
        for (n, e) in (1..=3).zip(expected.iter()) {
            assert_eq!(&oracle(&m, n), e);
            assert_eq!(&kappa(&g, n as i64).unwrap().values, e);
        }
    }

    #[test]
    fn negative_depth_and_not_pre_stable() {
        let g = PullbackGraph::from_matrix(vec![vec![2]], None, 4).unwrap();
        assert_eq!(
            kappa(&g, -1).unwrap_err(),
            CurveComplexError::NegativeDepth(-1)
        );
        let z = PullbackGraph::from_matrix(vec![vec![0]], None, 2).unwrap();
        assert!(matches!(
            kappa(&z, 1),
            Err(CurveComplexError::NotPreStable(_))
        ));
    }

    #[test]
    fn overflow_reported() {
        let g = PullbackGraph::from_matrix(vec![vec![3]], None, 3).unwrap();
        assert!(matches!(
            kappa(&g, 200),
            Err(CurveComplexError::Overflow(_))
        ));
    }
}
