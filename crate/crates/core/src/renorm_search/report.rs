use std::fmt::Write;

use serde::Serialize;

use super::tau::{tau_from_spec, tau_map, TauMap};
use super::{complement_pieces, RenormBundle, RenormError};

/// The stabilization depth is not computed; only the marked-point counts it
/// depends on are reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub symbolic: bool,
    pub marked_along_cycle: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub periodic_index: usize,
    pub piece: String,
    pub period: usize,
    pub cycle: Vec<usize>,
    pub stabilization: Stabilization,
    /// Degree of `f^p` from the domain over the periodic piece onto its image.
    pub candidate_degree: u64,
    /// `deg f^p`
    pub iterate_degree: u64,
    pub degree_at_least_two: bool,
    pub degree_below_iterate: bool,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenormReport {
    pub tau: TauMap,
    /// Whether `τ` agrees with the images read off the shared circles, where
    /// those are determined.
    pub tau_matches_spec: bool,
    pub piece_degrees: Vec<u32>,
    pub cycles: Vec<CycleReport>,
    /// First cycle with a positive verdict, else the first cycle.
    pub selected: usize,
}

impl RenormReport {
    pub fn best(&self) -> &CycleReport {
        &self.cycles[self.selected]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tau: {:?}", self.tau.tau).unwrap();
        writeln!(out, "tau matches shared circles: {}", self.tau_matches_spec).unwrap();
        writeln!(out, "piece degrees: {:?}", self.piece_degrees).unwrap();
        for (k, c) in self.cycles.iter().enumerate() {
            let mark = if k == self.selected { "*" } else { " " };
            writeln!(
                out,
                "{mark} piece {} (index {}), period {}, cycle {:?}",
                c.piece, c.periodic_index, c.period, c.cycle
            )
            .unwrap();
            writeln!(
                out,
                "    deg g = {}, deg f^p = {}: {} 2, {} deg f^p -> {}",
                c.candidate_degree,
                c.iterate_degree,
                if c.degree_at_least_two { ">=" } else { "<" },
                if c.degree_below_iterate { "<" } else { ">=" },
                if c.verdict {
                    "renormalization"
                } else {
                    "no renormalization"
                }
            )
            .unwrap();
            writeln!(
                out,
                "    N symbolic; marked points along cycle {:?}",
                c.stabilization.marked_along_cycle
            )
            .unwrap();
        }
        out
    }
}

pub fn renorm_report(bundle: &RenormBundle) -> Result<RenormReport, RenormError> {
    let pieces = complement_pieces(bundle)?;
    if bundle.map_degree < 2 {
        return Err(RenormError::MapDegree);
    }
    let tau = tau_map(&bundle.tau, pieces.len())?;
    let derived = tau_from_spec(bundle)?;
    let tau_matches_spec = derived
        .iter()
        .zip(&bundle.tau)
        .all(|(d, &t)| d.map_or(true, |(img, _)| img == t));
    let piece_degrees: Vec<u32> = match &bundle.piece_degrees {
        Some(d) if d.len() == pieces.len() => d.clone(),
        Some(_) => {
            return Err(RenormError::TauLength {
                found: bundle.piece_degrees.as_ref().unwrap().len(),
                expected: pieces.len(),
            })
        }
        None => derived
            .iter()
            .zip(&pieces)
            .map(|(d, p)| {
                d.map(|(_, deg)| deg)
                    .ok_or_else(|| RenormError::DegreeDataIncomplete(p.id.clone()))
            })
            .collect::<Result<_, _>>()?,
    };
    if tau.cycles.is_empty() {
        unreachable!("a self-map of a finite set has a cycle");
    }
    let cycles: Vec<CycleReport> = tau
        .cycles
        .iter()
        .map(|cyc| {
            let p = cyc.len();
            let candidate_degree: u64 = cyc.iter().map(|&i| piece_degrees[i] as u64).product();
            let iterate_degree = (bundle.map_degree as u64).saturating_pow(p as u32);
            let degree_at_least_two = candidate_degree >= 2;
            let degree_below_iterate = candidate_degree < iterate_degree;
            CycleReport {
                periodic_index: cyc[0],
                piece: pieces[cyc[0]].id.clone(),
                period: p,
                cycle: cyc.clone(),
                stabilization: Stabilization {
                    symbolic: true,
                    marked_along_cycle: cyc.iter().map(|&i| pieces[i].marked).collect(),
                },
                candidate_degree,
                iterate_degree,
                degree_at_least_two,
                degree_below_iterate,
                verdict: degree_at_least_two && degree_below_iterate,
            }
        })
        .collect();
    let selected = cycles.iter().position(|c| c.verdict).unwrap_or(0);
    Ok(RenormReport {
        tau,
        tau_matches_spec,
        piece_degrees,
        cycles,
        selected,
    })
}
