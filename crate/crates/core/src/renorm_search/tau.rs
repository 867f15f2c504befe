use serde::Serialize;

use super::{ComplementPiece, RenormBundle, RenormError};
use crate::annulus_engine::Side;
use crate::rational_dynamics::{CurvePolyline, Point, RationalMap};
use crate::scalar::Real;

/// Index dynamics on complement pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauMap {
    pub tau: Vec<usize>,
    /// Each cycle starts at its smallest index.
    pub cycles: Vec<Vec<usize>>,
    /// Steps until the orbit of each index enters a cycle.
    pub preperiod: Vec<usize>,
    /// Period of the cycle each index falls into.
    pub period: Vec<usize>,
}

impl TauMap {
    pub fn is_periodic(&self, i: usize) -> bool {
        self.preperiod[i] == 0
    }
}

pub fn tau_map(tau: &[usize], pieces: usize) -> Result<TauMap, RenormError> {
    if tau.len() != pieces {
        return Err(RenormError::TauLength {
            found: tau.len(),
            expected: pieces,
        });
    }
    if let Some((index, &value)) = tau.iter().enumerate().find(|(_, &v)| v >= pieces) {
        return Err(RenormError::NotAFunction {
            index,
            value,
            len: pieces,
        });
    }
    // after #pieces steps every orbit sits on its cycle
    let n = pieces;
    let mut on_cycle = vec![false; n];
    for i in 0..n {
        let mut x = i;
        for _ in 0..n {
            x = tau[x];
        }
        on_cycle[x] = true;
    }
    let mut cycles = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if !on_cycle[i] || seen[i] {
            continue;
        }
        let mut cyc = vec![i];
        seen[i] = true;
        let mut x = tau[i];
        while x != i {
            seen[x] = true;
            on_cycle[x] = true;
            cyc.push(x);
            x = tau[x];
        }
        cycles.push(cyc);
    }
    let cycle_len = |x: usize| {
        cycles
            .iter()
            .find(|c| c.contains(&x))
            .map_or(0, |c| c.len())
    };
    let mut preperiod = vec![0; n];
    let mut period = vec![0; n];
    for i in 0..n {
        let mut x = i;
        let mut k = 0;
        while !on_cycle[x] {
            x = tau[x];
            k += 1;
        }
        preperiod[i] = k;
        period[i] = cycle_len(x);
    }
    Ok(TauMap {
        tau: tau.to_vec(),
        cycles,
        preperiod,
        period,
    })
}

fn piece_at(pieces: &[ComplementPiece], component: usize, side: Side) -> Option<usize> {
    pieces.iter().position(|p| {
        p.touches
            .iter()
            .any(|t| t.component == component && t.side == side)
    })
}

/// Images and degrees read off the spec: a piece's distinguished preimage
/// contains a boundary circle shared by some subannulus, which carries it
/// with that subannulus' degree onto the piece beyond the image circle.
/// `None` where a touching circle is not shared.
pub fn tau_from_spec(bundle: &RenormBundle) -> Result<Vec<Option<(usize, u32)>>, RenormError> {
    let spec = &bundle.spec;
    let images = spec.boundary_images();
    bundle
        .pieces
        .iter()
        .map(|p| {
            let mut found: Option<(usize, u32)> = None;
            for t in &p.touches {
                let shared = spec.subs_of(t.component).find(|(_, s)| match t.side {
                    Side::Inner => s.shares_inner,
                    Side::Outer => s.shares_outer,
                });
                let Some((i, s)) = shared else {
                    return Ok(None);
                };
                let side = images[i][t.side as usize].expect("shared side has an image");
                let img = piece_at(&bundle.pieces, s.target, side)
                    .ok_or_else(|| RenormError::InconsistentDegrees(p.id.clone()))?;
                match found {
                    Some(prev) if prev != (img, s.degree) => {
                        return Err(RenormError::InconsistentDegrees(p.id.clone()))
                    }
                    _ => found = Some((img, s.degree)),
                }
            }
            Ok(found)
        })
        .collect()
}

/// `τ` from the map itself: every sample of piece `i` is pushed forward and
/// located on one of `regions` within `tol`.
pub fn tau_from_samples<T: Real>(
    f: &RationalMap<T>,
    samples: &[Vec<Point<T>>],
    regions: &[CurvePolyline<T>],
    tol: T,
) -> Result<Vec<usize>, RenormError> {
    samples
        .iter()
        .enumerate()
        .map(|(i, pts)| {
            let mut image = None;
            for p in pts {
                let w = f.eval(p);
                let j = regions
                    .iter()
                    .position(|r| r.arc_distance_to(&w) < tol)
                    .ok_or(RenormError::UnlocatedImage(i))?;
                if image.is_some_and(|k| k != j) {
                    return Err(RenormError::SplitImage(i));
                }
                image = Some(j);
            }
            image.ok_or(RenormError::UnlocatedImage(i))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational_dynamics::builtin::{lattes, LattesData};

    #[test]
    fn cycles_and_tails() {
        let t = tau_map(&[1, 1], 2).unwrap();
        assert_eq!(t.cycles, vec![vec![1]]);
        assert_eq!(t.preperiod, vec![1, 0]);
        let t = tau_map(&[0, 1, 2], 3).unwrap();
        assert_eq!(t.cycles.len(), 3);
        assert!(t.period.iter().all(|&p| p == 1));
        let t = tau_map(&[1, 2, 0], 3).unwrap();
        assert_eq!(t.cycles, vec![vec![0, 1, 2]]);
        assert_eq!(t.period, vec![3, 3, 3]);
        assert!(matches!(
            tau_map(&[0, 3, 1], 3),
            Err(RenormError::NotAFunction { index: 1, .. })
        ));
        assert!(matches!(
            tau_map(&[0], 2),
            Err(RenormError::TauLength { .. })
        ));
    }

    #[test]
    fn lattes_tau_three_ways() {
        let b = RenormBundle::lattes();
        let spec_tau = tau_from_spec(&b).unwrap();
        assert_eq!(spec_tau, vec![Some((1, 2)), Some((1, 2))]);
        let f = lattes::<f64>();
        assert!((f.eval(&Point::real(-0.5)).finite().unwrap().re - 25.0 / 24.0).abs() < 1e-14);
        let data = LattesData::<f64>::new(64);
        let samples: Vec<Vec<Point<f64>>> = vec![
            (1..10).map(|k| Point::real(-k as f64 / 10.0)).collect(),
            (1..10).map(|k| Point::real(1.0 + k as f64)).collect(),
        ];
        let num = tau_from_samples(&f, &samples, &data.arcs, 1e-9).unwrap();
        assert_eq!(num, b.tau);
    }
}
