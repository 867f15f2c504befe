use super::spec::AnnularSystemSpec;
use super::AnnulusError;

/// Least `N` such that every valid length-`N` code has degree product ≥ 2.
///
/// A code has product 1 exactly when all of its branches have degree 1, so
/// `N` is one more than the longest walk through degree-1 branches.
pub fn degree_growth_n(spec: &AnnularSystemSpec) -> Result<usize, AnnulusError> {
    spec.require_annular()?;
    let m = spec.subannuli.len();
    let ones: Vec<bool> = spec.subannuli.iter().map(|s| s.degree == 1).collect();
    // longest[i]: longest degree-1 walk starting with branch i (acyclic here)
    let mut longest: Vec<Option<usize>> = vec![None; m];
    fn walk(
        i: usize,
        spec: &AnnularSystemSpec,
        ones: &[bool],
        memo: &mut Vec<Option<usize>>,
    ) -> usize {
        if let Some(v) = memo[i] {
            return v;
        }
        let t = spec.subannuli[i].target;
        let best = (0..spec.subannuli.len())
            .filter(|&j| ones[j] && spec.subannuli[j].parent == t)
            .map(|j| walk(j, spec, ones, memo))
            .max()
            .unwrap_or(0);
        memo[i] = Some(best + 1);
        best + 1
    }
    let l = (0..m)
        .filter(|&i| ones[i])
        .map(|i| walk(i, spec, &ones, &mut longest))
        .max()
        .unwrap_or(0);
    let n = l + 1;
    assert!(n <= m + 2, "degree growth {n} exceeds m + 2 = {}", m + 2);
    Ok(n)
}
