use serde::Serialize;

use super::spec::AnnularSystemSpec;
use super::AnnulusError;
use crate::interval_model::IntervalSystem;
use crate::scalar::Scalar;

/// Branch `i` in log-radius coordinates: `t ↦ slope·t + offset` on its
/// subinterval, times a degree-`circle_degree` covering of the circle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogBranch<T> {
    pub slope: T,
    pub offset: T,
    pub circle_degree: u32,
    /// Whether the product map is holomorphic (`|slope| = degree`).
    pub conformal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogRealization<T> {
    pub system: IntervalSystem<T>,
    pub branches: Vec<LogBranch<T>>,
}

pub fn realize_log<T: Scalar>(spec: &AnnularSystemSpec) -> Result<LogRealization<T>, AnnulusError> {
    let system = IntervalSystem::<T>::from_annular_spec(spec)
        .map_err(|e| AnnulusError::Realization(e.to_string()))?;
    let branches = system
        .subs()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let slope = s.slope();
            let offset = system.apply(i, &T::zero());
            let d = spec.subannuli[i].degree;
            LogBranch {
                conformal: slope.abs() == T::from_u32(d).unwrap(),
                slope,
                offset,
                circle_degree: d,
            }
        })
        .collect();
    Ok(LogRealization { system, branches })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hull<T> {
    Empty,
    Curve { at: T },
    Annulus { inner: T, outer: T },
}

impl<T: Scalar> Hull<T> {
    /// Whether `[a, b]` lies in the closed hull.
    pub fn contains(&self, a: &T, b: &T) -> bool {
        match self {
            Hull::Empty => false,
            Hull::Curve { at } => a == at && b == at,
            Hull::Annulus { inner, outer } => inner <= a && b <= outer,
        }
    }
}

/// Per component, the hull of the depth-`n` preimages of the core curves
/// `core[j]` (given in the realization's coordinates).
pub fn hull_annulus<T: Scalar>(
    real: &LogRealization<T>,
    core: &[T],
    n: usize,
) -> Result<Vec<Hull<T>>, AnnulusError> {
    let sys = &real.system;
    if core.len() != sys.len() {
        return Err(AnnulusError::Realization(format!(
            "expected {} core curves, got {}",
            sys.len(),
            core.len()
        )));
    }
    let mut level: Vec<Vec<T>> = core.iter().map(|e| vec![e.clone()]).collect();
    for _ in 0..n {
        let mut next: Vec<Vec<T>> = vec![Vec::new(); sys.len()];
        for (i, s) in sys.subs().iter().enumerate() {
            for y in &level[s.target] {
                next[s.parent].push(sys.inverse(i, y));
            }
        }
        // only the extremes matter for the hull
        for pts in next.iter_mut() {
            if pts.len() > 2 {
                let lo = pts
                    .iter()
                    .fold(pts[0].clone(), |m, x| if *x < m { x.clone() } else { m });
                let hi = pts
                    .iter()
                    .fold(pts[0].clone(), |m, x| if *x > m { x.clone() } else { m });
                *pts = vec![lo, hi];
            }
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|pts| match pts.len() {
            0 => Hull::Empty,
            _ => {
                let lo = pts
                    .iter()
                    .fold(pts[0].clone(), |m, x| if *x < m { x.clone() } else { m });
                let hi = pts
                    .iter()
                    .fold(pts[0].clone(), |m, x| if *x > m { x.clone() } else { m });
                if lo == hi {
                    Hull::Curve { at: lo }
                } else {
                    Hull::Annulus {
                        inner: lo,
                        outer: hi,
                    }
                }
            }
        })
        .collect())
}

/// `depth,component,kind,inner,outer`.
pub fn hulls_to_csv<T: Scalar>(rows: &[(usize, Vec<Hull<T>>)]) -> String {
    let mut out = String::from("depth,component,kind,inner,outer\n");
    for (n, hulls) in rows {
        for (j, h) in hulls.iter().enumerate() {
            let line = match h {
                Hull::Empty => format!("{n},{j},empty,,\n"),
                Hull::Curve { at } => format!("{n},{j},curve,{at},{at}\n"),
                Hull::Annulus { inner, outer } => format!("{n},{j},annulus,{inner},{outer}\n"),
            };
            out.push_str(&line);
        }
    }
    out
}
