//! Combinatorics of renormalization: pieces of the complement of an annular
//! system, the induced index map on them and degree bookkeeping for the
//! periodic pieces.

mod report;
mod tau;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annulus_engine::{AnnularSystemSpec, Side};

pub use report::{renorm_report, CycleReport, RenormReport, Stabilization};
pub use tau::{tau_from_samples, tau_from_spec, tau_map, TauMap};

pub const LATTES_BUNDLE_JSON: &str = include_str!("../../data/lattes_bundle.json");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenormError {
    #[error("invalid annular system: {0}")]
    Spec(String),
    #[error("the multicurve is not flagged stable")]
    NotStable,
    #[error("duplicate piece id `{0}`")]
    DuplicatePiece(String),
    #[error("piece `{0}` touches no annulus")]
    IsolatedPiece(String),
    #[error("boundary circle ({component}, {side:?}) is touched by {count} pieces, expected 1")]
    BoundaryCover {
        component: usize,
        side: Side,
        count: usize,
    },
    #[error("{found} complement pieces, but {components} disjoint annuli leave {expected}")]
    PieceCount {
        found: usize,
        components: usize,
        expected: usize,
    },
    #[error("pieces hold {sum} marked points, the post-critical set has {total}")]
    MarkedCount { sum: usize, total: usize },
    #[error("index map has {found} entries for {expected} pieces")]
    TauLength { found: usize, expected: usize },
    #[error("index map sends {index} to {value}, outside 0..{len}")]
    NotAFunction {
        index: usize,
        value: usize,
        len: usize,
    },
    #[error("sample image of piece {0} lies on no piece")]
    UnlocatedImage(usize),
    #[error("piece {0}: sample points map to different pieces")]
    SplitImage(usize),
    #[error("no degree data for piece `{0}`")]
    DegreeDataIncomplete(String),
    #[error("piece `{0}`: boundary circles give different degrees or images")]
    InconsistentDegrees(String),
    #[error("map degree must be at least 2")]
    MapDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRef {
    pub component: usize,
    pub side: Side,
}

/// A complementary component of the union of the annuli.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementPiece {
    pub id: String,
    /// Post-critical points inside the piece.
    pub marked: usize,
    /// Annulus boundary circles on the boundary of the piece.
    pub touches: Vec<BoundaryRef>,
}

/// Everything the report needs, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormBundle {
    pub spec: AnnularSystemSpec,
    pub post_critical_count: usize,
    pub map_degree: u32,
    #[serde(default)]
    pub stable_multicurve: bool,
    pub pieces: Vec<ComplementPiece>,
    /// Image piece index of each piece's distinguished preimage.
    pub tau: Vec<usize>,
    /// Degree of `f` from each distinguished preimage onto its image piece;
    /// derived from the shared boundary circles when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece_degrees: Option<Vec<u32>>,
}

impl RenormBundle {
    pub fn lattes() -> Self {
        serde_json::from_str(LATTES_BUNDLE_JSON).expect("bundled data")
    }
}

/// Validates the marked assignment against the spec and returns the pieces.
pub fn complement_pieces(bundle: &RenormBundle) -> Result<Vec<ComplementPiece>, RenormError> {
    let spec = &bundle.spec;
    let v = spec
        .validate()
        .map_err(|e| RenormError::Spec(e.to_string()))?;
    if !v.is_exact {
        return Err(RenormError::Spec("system is not exact".into()));
    }
    if !bundle.stable_multicurve {
        return Err(RenormError::NotStable);
    }
    let k = spec.components.len();
    let mut ids = BTreeMap::new();
    let mut cover: BTreeMap<(usize, Side), usize> = BTreeMap::new();
    for p in &bundle.pieces {
        if ids.insert(p.id.as_str(), ()).is_some() {
            return Err(RenormError::DuplicatePiece(p.id.clone()));
        }
        if p.touches.is_empty() {
            return Err(RenormError::IsolatedPiece(p.id.clone()));
        }
        for t in &p.touches {
            if t.component >= k {
                return Err(RenormError::Spec(format!(
                    "piece `{}` touches missing component {}",
                    p.id, t.component
                )));
            }
            *cover.entry((t.component, t.side)).or_default() += 1;
        }
    }
    for c in 0..k {
        for side in [Side::Inner, Side::Outer] {
            let count = cover.get(&(c, side)).copied().unwrap_or(0);
            if count != 1 {
                return Err(RenormError::BoundaryCover {
                    component: c,
                    side,
                    count,
                });
            }
        }
    }
    // each of the k disjoint essential annuli separates the sphere once more
    if bundle.pieces.len() != k + 1 {
        return Err(RenormError::PieceCount {
            found: bundle.pieces.len(),
            components: k,
            expected: k + 1,
        });
    }
    let sum: usize = bundle.pieces.iter().map(|p| p.marked).sum();
    if sum != bundle.post_critical_count {
        return Err(RenormError::MarkedCount {
            sum,
            total: bundle.post_critical_count,
        });
    }
    Ok(bundle.pieces.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattes_pieces() {
        let b = RenormBundle::lattes();
        let pieces = complement_pieces(&b).unwrap();
        assert_eq!(pieces.len(), 2);
        assert!(pieces.iter().all(|p| p.marked == 2));
        assert_eq!(pieces[0].touches[0].side, Side::Inner);
        assert_eq!(pieces[1].touches[0].side, Side::Outer);
    }

    #[test]
    fn marked_counts_must_add_up() {
        let mut b = RenormBundle::lattes();
        b.pieces[0].marked = 3;
        assert_eq!(
            complement_pieces(&b),
            Err(RenormError::MarkedCount { sum: 5, total: 4 })
        );
    }

    #[test]
    fn every_circle_touched_once() {
        let mut b = RenormBundle::lattes();
        b.pieces[1].touches[0].side = Side::Inner;
        assert!(matches!(
            complement_pieces(&b),
            Err(RenormError::BoundaryCover { .. })
        ));
        let mut b = RenormBundle::lattes();
        b.stable_multicurve = false;
        assert_eq!(complement_pieces(&b), Err(RenormError::NotStable));
    }
}
