use serde::Serialize;

use super::kappa::kappa_saturating;
use super::scc::strongly_connected_components;
use super::{CurveComplexError, PullbackGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub pre_stable: bool,
    /// `None` when the graph carries no extra-preimage data.
    pub stable: Option<bool>,
    pub irreducible: bool,
}

pub fn predicates(graph: &PullbackGraph) -> Predicates {
    Predicates {
        pre_stable: graph.is_pre_stable(),
        stable: graph.extra_preimages().map(|e| e.iter().all(|&k| k == 0)),
        irreducible: is_irreducible(graph),
    }
}

/// Every ordered pair of classes (including `(γ, γ)`) is joined by a walk of
/// positive length.
fn is_irreducible(graph: &PullbackGraph) -> bool {
    let comps = strongly_connected_components(&graph.adjacency());
    comps.len() == 1 && (graph.len() > 1 || graph.matrix()[0][0] > 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthWitness {
    /// A reachable strongly connected component carrying more edge
    /// multiplicity than it has vertices.
    ExpandingComponent { classes: Vec<String> },
    /// Two distinct cyclic components chained by a walk; counts grow polynomially.
    ChainedCycles {
        first: Vec<String>,
        second: Vec<String>,
    },
    /// No growth mechanism is reachable; `tail` lists the last few κ values.
    Stagnant { tail: Vec<u128> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGrowth {
    pub class: String,
    pub unbounded: bool,
    pub empirical_unbounded: bool,
    pub witness: GrowthWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CantorVerdict {
    /// Structural verdict (authoritative).
    pub verdict: bool,
    pub empirical_verdict: bool,
    pub agree: bool,
    pub horizon: usize,
    pub classes: Vec<ClassGrowth>,
}

/// Horizon for the empirical κ-growth check.
pub fn empirical_horizon(classes: usize) -> usize {
    4 * classes + 4
}

/// Decides whether `κ_n(γ) → ∞` for every class.
///
/// Structural route: `κ_n(γ)` is unbounded exactly when `γ` reaches either an
/// expanding component (internal multiplicity above its vertex count) or two
/// distinct cyclic components along one walk. Empirical route: the κ value
/// at the horizon exceeds every value in the first half of the horizon.
pub fn is_cantor(graph: &PullbackGraph) -> Result<CantorVerdict, CurveComplexError> {
    if let Some(g) = graph.first_empty_row() {
        return Err(CurveComplexError::NotPreStable(
            graph.classes()[g].id.clone(),
        ));
    }
    let n = graph.len();
    let adj = graph.adjacency();
    let comps = strongly_connected_components(&adj);
    let mut comp_of = vec![0usize; n];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    let cyclic: Vec<bool> = comps
        .iter()
        .map(|m| m.len() > 1 || graph.matrix()[m[0]][m[0]] > 0)
        .collect();
    let expanding: Vec<bool> = comps
        .iter()
        .map(|m| {
            let internal: u64 = m
                .iter()
                .flat_map(|&a| m.iter().map(move |&b| (a, b)))
                .map(|(a, b)| graph.matrix()[a][b] as u64)
                .sum();
            internal > m.len() as u64
        })
        .collect();
    // condensation successors
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (a, targets) in adj.iter().enumerate() {
        for &b in targets {
            let (ca, cb) = (comp_of[a], comp_of[b]);
            if ca != cb && !succ[ca].contains(&cb) {
                succ[ca].push(cb);
            }
        }
    }
    // Tarjan emits sinks first, so successors are already resolved.
    let mut reach_expanding: Vec<Option<usize>> = vec![None; comps.len()];
    let mut cycle_chain: Vec<Option<(usize, usize)>> = vec![None; comps.len()];
    let mut first_cycle: Vec<Option<usize>> = vec![None; comps.len()];
    for c in 0..comps.len() {
        reach_expanding[c] = if expanding[c] {
            Some(c)
        } else {
            succ[c].iter().find_map(|&s| reach_expanding[s])
        };
        let downstream_cycle = succ[c].iter().find_map(|&s| first_cycle[s]);
        first_cycle[c] = if cyclic[c] { Some(c) } else { downstream_cycle };
        cycle_chain[c] =
            succ[c]
                .iter()
                .find_map(|&s| cycle_chain[s])
                .or(match (cyclic[c], downstream_cycle) {
                    (true, Some(d)) => Some((c, d)),
                    _ => None,
                });
    }

    let horizon = empirical_horizon(n);
    let table = kappa_saturating(graph, horizon);
    let names = |c: usize| -> Vec<String> {
        comps[c]
            .iter()
            .map(|&v| graph.classes()[v].id.clone())
            .collect()
    };
    let classes: Vec<ClassGrowth> = (0..n)
        .map(|g| {
            let c = comp_of[g];
            let witness = if let Some(e) = reach_expanding[c] {
                GrowthWitness::ExpandingComponent { classes: names(e) }
            } else if let Some((a, b)) = cycle_chain[c] {
                GrowthWitness::ChainedCycles {
                    first: names(a),
                    second: names(b),
                }
            } else {
                GrowthWitness::Stagnant {
                    tail: table[horizon.saturating_sub(3)..]
                        .iter()
                        .map(|row| row[g])
                        .collect(),
                }
            };
            let early_max = table[..=horizon / 2]
                .iter()
                .map(|row| row[g])
                .max()
                .unwrap();
            let empirical = table[horizon][g] > early_max || table[horizon - 1][g] > early_max;
            ClassGrowth {
                class: graph.classes()[g].id.clone(),
                unbounded: !matches!(witness, GrowthWitness::Stagnant { .. }),
                empirical_unbounded: empirical,
                witness,
            }
        })
        .collect();
    let verdict = classes.iter().all(|c| c.unbounded);
    let empirical_verdict = classes.iter().all(|c| c.empirical_unbounded);
    let agree = classes.iter().all(|c| c.unbounded == c.empirical_unbounded);
    Ok(CantorVerdict {
        verdict,
        empirical_verdict,
        agree,
        horizon,
        classes,
    })
}

/// The five equivalent conditions for an irreducible multicurve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// `#Γ(1,Γ) > #Γ`
    pub more_first_preimages: bool,
    /// `κ_1(γ) ≥ 2` for some `γ`
    pub some_kappa1_at_least_two: bool,
    /// `κ_n(γ) → ∞` for some `γ`
    pub some_unbounded: bool,
    /// `κ_n(γ) → ∞` for all `γ`
    pub all_unbounded: bool,
    /// some column of `M` sums to at least 2
    pub some_column_at_least_two: bool,
    pub all_agree: bool,
}

impl LemmaReport {
    pub fn as_array(&self) -> [bool; 5] {
        [
            self.more_first_preimages,
            self.some_kappa1_at_least_two,
            self.some_unbounded,
            self.all_unbounded,
            self.some_column_at_least_two,
        ]
    }
}

pub fn lemma_cm_report(graph: &PullbackGraph) -> Result<LemmaReport, CurveComplexError> {
    if let Some(g) = graph.first_empty_row() {
        return Err(CurveComplexError::NotPreStable(
            graph.classes()[g].id.clone(),
        ));
    }
    if !is_irreducible(graph) {
        return Err(CurveComplexError::NotIrreducible);
    }
    let n = graph.len();
    let total: u64 = (0..n).map(|g| graph.row_sum(g)).sum();
    let cantor = is_cantor(graph)?;
    let mut report = LemmaReport {
        more_first_preimages: total > n as u64,
        some_kappa1_at_least_two: (0..n).any(|g| graph.row_sum(g) >= 2),
        some_unbounded: cantor.classes.iter().any(|c| c.unbounded),
        all_unbounded: cantor.verdict,
        some_column_at_least_two: (0..n).any(|b| graph.column_sum(b) >= 2),
        all_agree: false,
    };
    let a = report.as_array();
    report.all_agree = a.iter().all(|&x| x == a[0]);
    Ok(report)
}
