use serde::{Deserialize, Serialize};

use super::AnnulusError;
use crate::coding::{BranchGraph, Orientation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusComponent {
    pub name: String,
    /// Names of the inner and outer boundary circles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundaries: Option<[String; 2]>,
    /// Log-width of the annulus, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<f64>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subannulus {
    pub parent: usize,
    #[serde(default = "yes")]
    pub essential: bool,
    #[serde(default)]
    pub shares_inner: bool,
    #[serde(default)]
    pub shares_outer: bool,
    pub target: usize,
    pub degree: u32,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnularSystemSpec {
    pub components: Vec<AnnulusComponent>,
    pub subannuli: Vec<Subannulus>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub is_annular_system: bool,
    pub is_exact: bool,
    pub is_proper: bool,
    /// Least n at which every component is disconnected by the depth-n pieces.
    pub witness_n: Option<usize>,
    /// Same, component by component.
    pub per_component_n: Vec<Option<usize>>,
    /// A cycle of degree-1 branches, if any: such a cycle would be a
    /// conformal self-embedding of an annulus onto a proper subannulus.
    pub degree_one_cycle: Option<Vec<usize>>,
}

impl AnnularSystemSpec {
    pub fn branch_graph(&self) -> BranchGraph {
        BranchGraph {
            components: self.components.len(),
            parents: self.subannuli.iter().map(|s| s.parent).collect(),
            targets: self.subannuli.iter().map(|s| s.target).collect(),
        }
    }

    pub fn subs_of(&self, component: usize) -> impl Iterator<Item = (usize, &Subannulus)> {
        self.subannuli
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.parent == component)
    }

    /// Structural checks that do not involve the dynamics.
    pub fn check_syntax(&self) -> Result<(), AnnulusError> {
        let n = self.components.len();
        if n == 0 {
            return Err(AnnulusError::Empty);
        }
        for (i, s) in self.subannuli.iter().enumerate() {
            if s.parent >= n || s.target >= n {
                return Err(AnnulusError::DanglingIndex(i));
            }
            if !s.essential {
                return Err(AnnulusError::NotEssential(i));
            }
            if s.degree == 0 {
                return Err(AnnulusError::ZeroDegree(i));
            }
        }
        for c in 0..n {
            let subs: Vec<&Subannulus> = self.subs_of(c).map(|(_, s)| s).collect();
            if subs.iter().filter(|s| s.shares_inner).count() > 1
                || subs.iter().filter(|s| s.shares_outer).count() > 1
            {
                return Err(AnnulusError::BoundaryShared(c));
            }
            if subs.len() > 1 && subs.iter().any(|s| s.shares_inner && s.shares_outer) {
                return Err(AnnulusError::BoundaryShared(c));
            }
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        (0..self.components.len()).all(|c| {
            self.subs_of(c).any(|(_, s)| s.shares_inner)
                && self.subs_of(c).any(|(_, s)| s.shares_outer)
        })
    }

    pub fn is_proper(&self) -> bool {
        self.subannuli
            .iter()
            .all(|s| !s.shares_inner && !s.shares_outer)
    }

    /// Side of the target that each shared parent circle is carried to.
    pub fn boundary_images(&self) -> Vec<[Option<Side>; 2]> {
        self.subannuli
            .iter()
            .map(|s| {
                let img = |side: Side| match s.orientation {
                    Orientation::Preserving => side,
                    Orientation::Reversing => side.flip(),
                };
                [
                    s.shares_inner.then(|| img(Side::Inner)),
                    s.shares_outer.then(|| img(Side::Outer)),
                ]
            })
            .collect()
    }

    /// Cycle of degree-1 branches `s_0, .., s_{k-1}` with each `s_{j+1}` in
    /// the target of `s_j` and `s_0` in the target of `s_{k-1}`.
    pub fn degree_one_cycle(&self) -> Option<Vec<usize>> {
        let ones: Vec<usize> = (0..self.subannuli.len())
            .filter(|&i| self.subannuli[i].degree == 1)
            .collect();
        let succ = |i: usize| {
            ones.iter()
                .copied()
                .filter(move |&j| self.subannuli[j].parent == self.subannuli[i].target)
        };
        // iterative DFS with colouring
        let m = self.subannuli.len();
        let mut colour = vec![0u8; m];
        for &start in &ones {
            if colour[start] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, succ(start).collect())];
            colour[start] = 1;
            while let Some((v, rest)) = stack.last_mut() {
                let v = *v;
                if let Some(w) = rest.pop() {
                    match colour[w] {
                        0 => {
                            colour[w] = 1;
                            stack.push((w, succ(w).collect()));
                        }
                        1 => {
                            let pos = stack.iter().position(|(u, _)| *u == w).unwrap();
                            return Some(stack[pos..].iter().map(|(u, _)| *u).collect());
                        }
                        _ => {}
                    }
                } else {
                    colour[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn validate(&self) -> Result<Validation, AnnulusError> {
        self.check_syntax()?;
        let (per_component_n, witness_n) = self.branch_graph().disconnection_depths();
        let degree_one_cycle = self.degree_one_cycle();
        Ok(Validation {
            is_annular_system: witness_n.is_some() && degree_one_cycle.is_none(),
            is_exact: self.is_exact(),
            is_proper: self.is_proper(),
            witness_n,
            per_component_n,
            degree_one_cycle,
        })
    }

    pub fn require_annular(&self) -> Result<Validation, AnnulusError> {
        let v = self.validate()?;
        if v.is_annular_system {
            Ok(v)
        } else {
            Err(AnnulusError::NotAnnular)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Inner,
    Outer,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Inner => Side::Outer,
            Side::Outer => Side::Inner,
        }
    }
}
