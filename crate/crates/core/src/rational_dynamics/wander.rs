use std::collections::HashMap;

use num_complex::Complex;
use serde::Serialize;

use super::curve::CurvePolyline;
use super::exact::{midpoint, nesting_ranks, ExactSystemInput, ExactSystemReport};
use super::lift::{lift_curve_components, LiftOptions};
use super::map::RationalMap;
use super::sphere::Point;
use super::tag::{classify_curve, CurveKind, TagMatch};
use super::DynamicsError;
use crate::annulus_engine::AnnularSystemSpec;
use crate::coding::Code;
use crate::interval_model::IntervalSystem;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WanderingOptions {
    pub iterations: usize,
    /// Node budget per curve.
    pub nodes: usize,
    /// Stop once `d_n` drops below this.
    pub tol: f64,
    pub lift: LiftOptions,
}

impl Default for WanderingOptions {
    fn default() -> Self {
        WanderingOptions {
            iterations: 20,
            nodes: 2048,
            tol: 1e-12,
            lift: LiftOptions::default(),
        }
    }
}

/// Hausdorff distances from the lifted inner/outer boundary proxies to the
/// final curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryDiagnostic {
    pub depth: usize,
    pub inner: f64,
    pub outer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WanderingRun<T> {
    pub depth: usize,
    /// `d_n = dist_H(α_n, α_{n+1})`, chordal.
    pub distances: Vec<f64>,
    pub stopped_by_tol: bool,
    pub self_intersections: usize,
    /// `max |f(p) − α'|` over nodes `p` of the final curve, where `α'` is the
    /// previous curve lifted along the shifted code.
    pub functoriality: f64,
    pub boundary: Option<BoundaryDiagnostic>,
    /// `α_0, …, α_depth`.
    #[serde(skip)]
    pub curves: Vec<CurvePolyline<T>>,
}

impl<T> WanderingRun<T> {
    /// `d_{n+1} / d_n`.
    pub fn ratios(&self) -> Vec<f64> {
        self.distances.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// `d_{n+lag} < d_n` for every `n ≥ from`.
    pub fn telescopes(&self, from: usize, lag: usize) -> bool {
        (from..self.distances.len().saturating_sub(lag))
            .all(|n| self.distances[n + lag] < self.distances[n])
    }
}

/// Nested lifts along a code: `α_m(j)` is the branch `c_j` lift of
/// `α_{m-1}(j+1)`, starting from `base[component]`.
struct Nest<'a, T> {
    f: &'a RationalMap<T>,
    spec: &'a AnnularSystemSpec,
    input: &'a ExactSystemInput<T>,
    report: &'a ExactSystemReport<T>,
    code: &'a Code,
    opts: &'a WanderingOptions,
    base: Vec<CurvePolyline<T>>,
    memo: HashMap<(usize, usize), CurvePolyline<T>>,
}

impl<'a, T: Real> Nest<'a, T> {
    fn key(&self, j: usize) -> usize {
        match self.code {
            Code::EventuallyPeriodic { prefix, cycle } if j >= prefix.len() => {
                prefix.len() + (j - prefix.len()) % cycle.len()
            }
            _ => j,
        }
    }

    fn with_base(&self, base: Vec<CurvePolyline<T>>) -> Self {
        Nest {
            base,
            memo: HashMap::new(),
            ..*self
        }
    }

    fn symbol(&self, j: usize) -> usize {
        self.code.symbol(j).expect("code checked")
    }

    fn alpha(&mut self, m: usize, j: usize) -> Result<CurvePolyline<T>, DynamicsError> {
        let s = self.symbol(j);
        if m == 0 {
            return Ok(self.base[self.spec.subannuli[s].parent].clone());
        }
        let key = (m, self.key(j));
        if let Some(c) = self.memo.get(&key) {
            return Ok(c.clone());
        }
        let image = self.alpha(m - 1, j + 1)?;
        let lifted = self.select(s, &image).map_err(|e| DynamicsError::Lift {
            depth: m,
            position: j,
            cause: Box::new(e),
        })?;
        self.memo.insert(key, lifted.clone());
        Ok(lifted)
    }

    /// The component of `f⁻¹(image)` in subannulus `s`.
    fn select(
        &self,
        s: usize,
        image: &CurvePolyline<T>,
    ) -> Result<CurvePolyline<T>, DynamicsError> {
        let sub = &self.spec.subannuli[s];
        let parent = sub.parent;
        let want = &self.report.core_tags[parent];
        let tol = T::lit(self.opts.lift.delta);
        let arcs = self.input.arcs.as_deref();
        let mut kept = Vec::new();
        for comp in lift_curve_components(self.f, image, &self.opts.lift)? {
            let tag = classify_curve(&self.input.marked, &comp.curve, arcs, tol)?;
            if tag.kind != CurveKind::NonPeripheral {
                continue;
            }
            match tag.compare(want) {
                TagMatch::Matches => kept.push(comp),
                TagMatch::Differs => {}
                TagMatch::Inconclusive => {
                    return Err(DynamicsError::Ambiguous(
                        "lifted component could not be compared with the core class".into(),
                    ))
                }
            }
        }
        // lifts of a curve in the target component are in the subannuli with
        // that target, ordered like the subannuli themselves
        let siblings: Vec<usize> = self
            .spec
            .subs_of(parent)
            .filter(|(_, x)| x.target == sub.target)
            .map(|(i, _)| i)
            .collect();
        if kept.len() != siblings.len() {
            return Err(DynamicsError::Selection(format!(
                "{} homotopic lifts, {} subannuli expected",
                kept.len(),
                siblings.len()
            )));
        }
        let inner = midpoint(&self.input.boundaries[parent][0]);
        let curves: Vec<&CurvePolyline<T>> = kept.iter().map(|c| &c.curve).collect();
        let ranks = nesting_ranks(&curves, &inner);
        let want_rank = siblings.iter().position(|&i| i == s).unwrap();
        let pick = ranks
            .iter()
            .position(|&r| r == want_rank)
            .ok_or_else(|| DynamicsError::Selection("lifts are not nested".into()))?;
        if kept[pick].degree != sub.degree as usize {
            return Err(DynamicsError::Selection(format!(
                "selected lift has degree {}, subannulus degree {}",
                kept[pick].degree, sub.degree
            )));
        }
        Ok(kept[pick].curve.decimate(self.opts.nodes))
    }
}

fn check_code(spec: &AnnularSystemSpec, code: &Code, len: usize) -> Result<(), DynamicsError> {
    let prefix = code.prefix(len);
    if prefix.len() < len {
        return Err(DynamicsError::Selection(format!(
            "code has {} symbols, {len} needed",
            prefix.len()
        )));
    }
    if let Some(&b) = prefix.iter().find(|&&b| b >= spec.subannuli.len()) {
        return Err(DynamicsError::Selection(format!(
            "branch {b} does not exist"
        )));
    }
    if !spec.branch_graph().is_valid_code(&prefix) {
        return Err(DynamicsError::Selection("code is not admissible".into()));
    }
    Ok(())
}

fn to64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Iterated lifting of the core curve along `code`.
///
/// With `proxies` (one inner/outer pair per component) the proxies are lifted
/// along the same code and compared with the final curve.
pub fn wandering_curve<T: Real>(
    f: &RationalMap<T>,
    input: &ExactSystemInput<T>,
    report: &ExactSystemReport<T>,
    code: &Code,
    proxies: Option<&[[CurvePolyline<T>; 2]]>,
    opts: &WanderingOptions,
) -> Result<WanderingRun<T>, DynamicsError> {
    let spec = &report.spec;
    if !report.validation.is_annular_system {
        return Err(DynamicsError::Precondition(
            "system is not a verified annular system".into(),
        ));
    }
    if opts.iterations == 0 {
        return Err(DynamicsError::Precondition(
            "at least one iteration needed".into(),
        ));
    }
    check_code(spec, code, opts.iterations + 1)?;
    let mut nest = Nest {
        f,
        spec,
        input,
        report,
        code,
        opts,
        base: input.cores.iter().map(|c| c.decimate(opts.nodes)).collect(),
        memo: HashMap::new(),
    };
    let mut curves = vec![nest.alpha(0, 0)?];
    let mut distances = Vec::new();
    let mut stopped_by_tol = false;
    for m in 1..=opts.iterations {
        let next = nest.alpha(m, 0)?;
        let d = to64(curves[m - 1].hausdorff(&next));
        curves.push(next);
        distances.push(d);
        if d < opts.tol {
            stopped_by_tol = true;
            break;
        }
    }
    let depth = curves.len() - 1;
    let last = &curves[depth];
    let parent = nest.alpha(depth - 1, 1)?;
    let functoriality = last
        .points
        .iter()
        .map(|p| to64(parent.arc_distance_to(&f.eval(p))))
        .fold(0.0, f64::max);
    let self_intersections = last.self_intersections();

    let boundary = match proxies {
        None => None,
        Some(px) => {
            let mut dist = [0.0; 2];
            for (side, d) in dist.iter_mut().enumerate() {
                let mut b =
                    nest.with_base(px.iter().map(|p| p[side].decimate(opts.nodes)).collect());
                *d = to64(b.alpha(depth, 0)?.hausdorff(last));
            }
            Some(BoundaryDiagnostic {
                depth,
                inner: dist[0],
                outer: dist[1],
            })
        }
    };
    Ok(WanderingRun {
        depth,
        distances,
        stopped_by_tol,
        self_intersections,
        functoriality,
        boundary,
        curves,
    })
}

/// Wandering iteration in a log-radius realization of an annular system:
/// each component is the round annulus `{e^{a} ≤ |z| ≤ e^{b}}` over its
/// interval, and lifts of round circles stay round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRun {
    /// Log-radius of `α_n`.
    pub radii: Vec<f64>,
    pub distances: Vec<f64>,
    /// Log-radii of the depth-`n` annulus around the code.
    pub hull: (f64, f64),
    pub boundary: BoundaryDiagnostic,
}

impl ModelRun {
    pub fn curve<T: Real>(&self, n: usize, nodes: usize) -> CurvePolyline<T> {
        let r = T::lit(self.radii[n].exp());
        CurvePolyline::ellipse(nodes, Complex::new(T::zero(), T::zero()), r, r)
    }
}

fn circle_distance(a: f64, b: f64) -> f64 {
    Point::<f64>::real(a.exp()).chordal(&Point::real(b.exp()))
}

pub fn log_model_wandering(
    spec: &AnnularSystemSpec,
    code: &Code,
    iterations: usize,
) -> Result<ModelRun, DynamicsError> {
    spec.require_annular()
        .map_err(|e| DynamicsError::Precondition(e.to_string()))?;
    if iterations == 0 {
        return Err(DynamicsError::Precondition(
            "at least one iteration needed".into(),
        ));
    }
    check_code(spec, code, iterations)?;
    let sys = IntervalSystem::<f64>::from_annular_spec(spec)
        .map_err(|e| DynamicsError::Precondition(e.to_string()))?;
    let prefix = code.prefix(iterations);
    // realization coordinates: component j sits over [2j, 2j+1]
    let core = |j: usize| sys.interval(j).0 + 0.5;
    let log_radius = |n: usize| {
        if n == 0 {
            return core(sys.subs()[prefix[0]].parent);
        }
        let mut t = core(sys.subs()[prefix[n - 1]].target);
        for &i in prefix[..n].iter().rev() {
            t = sys.inverse(i, &t);
        }
        t
    };
    let shift = sys.interval(sys.subs()[prefix[0]].parent).0;
    let radii: Vec<f64> = (0..=iterations).map(|n| log_radius(n) - shift).collect();
    let distances = radii
        .windows(2)
        .map(|w| circle_distance(w[0], w[1]))
        .collect();
    let (a, b) = sys
        .point_of_code(&prefix)
        .map_err(|e| DynamicsError::Precondition(e.to_string()))?;
    let (a, b) = (a - shift, b - shift);
    let last = radii[iterations];
    Ok(ModelRun {
        boundary: BoundaryDiagnostic {
            depth: iterations,
            inner: circle_distance(a, last),
            outer: circle_distance(b, last),
        },
        radii,
        distances,
        hull: (a, b),
    })
}
