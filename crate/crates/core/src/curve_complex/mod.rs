//! Combinatorics of multicurves under pullback.
//!
//! Homotopy classes are opaque string ids. A [`PullbackGraph`] records, for
//! every pair of classes `(γ, β)`, how many components of the preimage of `β`
//! are homotopic to `γ` relative to the post-critical set. Everything in this
//! module is exact integer arithmetic.

mod cantor;
mod kappa;
mod scc;
mod stabilize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cantor::{
    is_cantor, lemma_cm_report, predicates, CantorVerdict, ClassGrowth, GrowthWitness, LemmaReport,
    Predicates,
};
pub use kappa::{kappa, kappa_table, KappaVector};
pub use scc::strongly_connected_components;
pub use stabilize::{induce_stable, ClassPullback, StabilizedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveComplexError {
    #[error("class set is empty")]
    EmptyClassSet,
    #[error("duplicate class id `{0}`")]
    DuplicateClass(String),
    #[error("edge references unknown class `{0}`")]
    UnknownClass(String),
    #[error("map degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("class `{class}` has {used} counted preimage components, exceeding degree {degree}")]
    DegreeBound {
        class: String,
        used: u64,
        degree: u32,
    },
    #[error("transition matrix must be square with one row per class")]
    MalformedMatrix,
    #[error("graph is not pre-stable (class `{0}` has no homotopic preimage)")]
    NotPreStable(String),
    #[error("graph is not irreducible")]
    NotIrreducible,
    #[error("graph is not a Cantor multicurve")]
    NotCantor,
    #[error("depth must be non-negative, got {0}")]
    NegativeDepth(i64),
    #[error("kappa overflowed at depth {0}")]
    Overflow(usize),
    #[error("pullback oracle produced {found} classes, more than the bound {bound} = #P - 3")]
    OracleExceedsBound { found: usize, bound: usize },
}

/// A homotopy class of non-peripheral curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassEntry {
    Id(String),
    Full(CurveClass),
}

impl ClassEntry {
    fn into_class(self) -> CurveClass {
        match self {
            ClassEntry::Id(id) => CurveClass { id, label: None },
            ClassEntry::Full(c) => c,
        }
    }
}

/// One pullback edge: `mult` components of the preimage of `to` are homotopic to `from`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: String,
    pub to: String,
    pub mult: u32,
}

/// Raw (unvalidated) description of a pullback graph, as read from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSpec {
    pub classes: Vec<ClassEntry>,
    pub degree: u32,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_preimages: Option<BTreeMap<String, u32>>,
}

/// Validated pullback graph.
///
/// `matrix[g][b]` is the number of components of the preimage of class `b`
/// homotopic to class `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackGraph {
    classes: Vec<CurveClass>,
    matrix: Vec<Vec<u32>>,
    extra_preimages: Option<Vec<u32>>,
    degree: u32,
}

/// Validates a raw spec. Duplicate `(from, to)` edges are summed.
pub fn build_graph(spec: GraphSpec) -> Result<PullbackGraph, CurveComplexError> {
    let classes: Vec<CurveClass> = spec
        .classes
        .into_iter()
        .map(ClassEntry::into_class)
        .collect();
    if classes.is_empty() {
        return Err(CurveComplexError::EmptyClassSet);
    }
    let mut index = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        if index.insert(c.id.clone(), i).is_some() {
            return Err(CurveComplexError::DuplicateClass(c.id.clone()));
        }
    }
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| CurveComplexError::UnknownClass(id.to_string()))
    };
    let n = classes.len();
    let mut matrix = vec![vec![0u32; n]; n];
    for e in &spec.edges {
        let g = lookup(&e.from)?;
        let b = lookup(&e.to)?;
        matrix[g][b] += e.mult;
    }
    let extra = match spec.extra_preimages {
        None => None,
        Some(map) => {
            let mut v = vec![0u32; n];
            for (id, k) in map {
                v[lookup(&id)?] = k;
            }
            Some(v)
        }
    };
    PullbackGraph::new(classes, matrix, extra, spec.degree)
}

impl PullbackGraph {
    pub fn new(
        classes: Vec<CurveClass>,
        matrix: Vec<Vec<u32>>,
        extra_preimages: Option<Vec<u32>>,
        degree: u32,
    ) -> Result<Self, CurveComplexError> {
        let n = classes.len();
        if n == 0 {
            return Err(CurveComplexError::EmptyClassSet);
        }
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(CurveComplexError::MalformedMatrix);
        }
        if extra_preimages.as_ref().is_some_and(|e| e.len() != n) {
            return Err(CurveComplexError::MalformedMatrix);
        }
        if degree < 2 {
            return Err(CurveComplexError::DegreeTooSmall(degree));
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &classes {
            if !seen.insert(c.id.as_str()) {
                return Err(CurveComplexError::DuplicateClass(c.id.clone()));
            }
        }
        for b in 0..n {
            let used: u64 = (0..n).map(|g| matrix[g][b] as u64).sum::<u64>()
                + extra_preimages.as_ref().map_or(0, |e| e[b] as u64);
            if used > degree as u64 {
                return Err(CurveComplexError::DegreeBound {
                    class: classes[b].id.clone(),
                    used,
                    degree,
                });
            }
        }
        Ok(Self {
            classes,
            matrix,
            extra_preimages,
            degree,
        })
    }

    /// Convenience constructor with generated ids `c0, c1, ...`.
    pub fn from_matrix(
        matrix: Vec<Vec<u32>>,
        extra_preimages: Option<Vec<u32>>,
        degree: u32,
    ) -> Result<Self, CurveComplexError> {
        let classes = (0..matrix.len())
            .map(|i| CurveClass {
                id: format!("c{i}"),
                label: None,
            })
            .collect();
        Self::new(classes, matrix, extra_preimages, degree)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[CurveClass] {
        &self.classes
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn extra_preimages(&self) -> Option<&[u32]> {
        self.extra_preimages.as_deref()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.id == id)
    }

    pub fn row_sum(&self, g: usize) -> u64 {
        self.matrix[g].iter().map(|&m| m as u64).sum()
    }

    pub fn column_sum(&self, b: usize) -> u64 {
        self.matrix.iter().map(|row| row[b] as u64).sum()
    }

    pub fn is_pre_stable(&self) -> bool {
        (0..self.len()).all(|g| self.row_sum(g) > 0)
    }

    pub(crate) fn first_empty_row(&self) -> Option<usize> {
        (0..self.len()).find(|&g| self.row_sum(g) == 0)
    }

    /// Adjacency lists of the relation `γ → β` whenever `M[γ][β] ≥ 1`.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .map(|(b, _)| b)
                    .collect()
            })
            .collect()
    }

    /// Inverse of [`build_graph`]: the JSON-facing description of this graph.
    pub fn to_spec(&self) -> GraphSpec {
        let mut edges = Vec::new();
        for (g, row) in self.matrix.iter().enumerate() {
            for (b, &m) in row.iter().enumerate() {
                if m > 0 {
                    edges.push(EdgeEntry {
                        from: self.classes[g].id.clone(),
                        to: self.classes[b].id.clone(),
                        mult: m,
                    });
                }
            }
        }
        GraphSpec {
            classes: self.classes.iter().cloned().map(ClassEntry::Full).collect(),
            degree: self.degree,
            edges,
            extra_preimages: self.extra_preimages.as_ref().map(|e| {
                self.classes
                    .iter()
                    .zip(e)
                    .map(|(c, &k)| (c.id.clone(), k))
                    .collect()
            }),
        }
    }
}
