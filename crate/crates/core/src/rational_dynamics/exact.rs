use num_complex::Complex;
use serde::Serialize;

use super::curve::{winding_number, CurvePolyline};
use super::lift::{lift_curve_components, LiftOptions};
use super::map::RationalMap;
use super::pcf::MarkedSphere;
use super::sphere::{Chart, Point};
use super::tag::{classify_curve, CurveKind, HomotopyTag, TagMatch};
use super::DynamicsError;
use crate::annulus_engine::{AnnularSystemSpec, AnnulusComponent, Subannulus, Validation};
use crate::coding::Orientation;
use crate::curve_complex::{is_cantor, kappa_table, CantorVerdict, PullbackGraph};
use crate::scalar::Real;

/// Intended annuli, each given by a core curve and its two boundary
/// continua (closed curves or arcs), inner first.
#[derive(Debug, Clone)]
pub struct ExactSystemInput<T> {
    pub marked: MarkedSphere<T>,
    pub cores: Vec<CurvePolyline<T>>,
    pub boundaries: Vec<[CurvePolyline<T>; 2]>,
    /// Reference arcs for homotopy tags (needed with four marked points).
    pub arcs: Option<Vec<CurvePolyline<T>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubannulusWitness<T> {
    pub parent: usize,
    pub target: usize,
    pub degree: usize,
    /// Position among the parent's subannuli, counted from the inner side.
    pub rank: usize,
    pub orientation: Orientation,
    pub tag: HomotopyTag,
    #[serde(skip)]
    pub curve: CurvePolyline<T>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactSystemReport<T> {
    pub spec: AnnularSystemSpec,
    pub validation: Validation,
    pub core_tags: Vec<HomotopyTag>,
    pub subannuli: Vec<SubannulusWitness<T>>,
    pub peripheral_lifts: usize,
    /// Non-peripheral lifts homotopic to no core curve.
    pub stray_lifts: usize,
    /// Per component: whether the inner/outer boundary lies in `f⁻¹(∂𝒜)`.
    pub boundary_in_preimage: Vec<[bool; 2]>,
    /// Shared boundary circles go to the target side predicted by the
    /// orientation.
    pub flags_consistent: bool,
    pub matrix: Vec<Vec<u32>>,
    pub kappa: Vec<Vec<u128>>,
    pub cantor: CantorVerdict,
}

const BOUNDARY_TOL: f64 = 1e-6;

/// Sides of closed curves relative to the inner boundary of a component.
pub(crate) struct SideTest<T> {
    chart: Chart<T>,
    poly: Vec<Complex<T>>,
    inner_inside: bool,
}

impl<T: Real> SideTest<T> {
    pub(crate) fn new(curve: &CurvePolyline<T>, inner_rep: &Point<T>) -> Self {
        let chart = CurvePolyline::far_chart(&[curve]);
        let poly = curve.in_chart(&chart);
        let rep = chart.to_plane(inner_rep).expect("pole away");
        let inner_inside = winding_number(&poly, rep) != 0;
        SideTest {
            chart,
            poly,
            inner_inside,
        }
    }

    pub(crate) fn is_inner(&self, p: &Point<T>) -> bool {
        match self.chart.to_plane(p) {
            Some(z) => (winding_number(&self.poly, z) != 0) == self.inner_inside,
            None => !self.inner_inside,
        }
    }
}

pub(crate) fn midpoint<T: Real>(c: &CurvePolyline<T>) -> Point<T> {
    c.points[c.len() / 2]
}

/// Order curves from the inner boundary outwards: rank = number of other
/// curves lying on the inner side of it.
pub(crate) fn nesting_ranks<T: Real>(
    curves: &[&CurvePolyline<T>],
    inner_rep: &Point<T>,
) -> Vec<usize> {
    let tests: Vec<SideTest<T>> = curves.iter().map(|c| SideTest::new(c, inner_rep)).collect();
    (0..curves.len())
        .map(|a| {
            (0..curves.len())
                .filter(|&b| b != a && tests[a].is_inner(&curves[b].points[0]))
                .count()
        })
        .collect()
}

/// Whether the lift `lift` of `image` preserves the inner/outer sides.
fn orientation_of<T: Real>(
    f: &RationalMap<T>,
    lift: &CurvePolyline<T>,
    parent_inner: &Point<T>,
    image: &CurvePolyline<T>,
    target_inner: &Point<T>,
) -> Orientation {
    let chart = CurvePolyline::far_chart(&[lift]);
    let z = lift.in_chart(&chart);
    let n = z.len();
    let t = z[1] - z[n - 1];
    let normal = Complex::new(-t.im, t.re) * T::lit(0.25);
    let probe = chart.from_plane(z[0] + normal);
    let src = SideTest::new(lift, parent_inner).is_inner(&probe);
    let dst = SideTest::new(image, target_inner).is_inner(&f.eval(&probe));
    if src == dst {
        Orientation::Preserving
    } else {
        Orientation::Reversing
    }
}

pub fn verify_exact_system<T: Real>(
    f: &RationalMap<T>,
    input: &ExactSystemInput<T>,
    opts: &LiftOptions,
) -> Result<ExactSystemReport<T>, DynamicsError> {
    let k = input.cores.len();
    if k == 0 || input.boundaries.len() != k {
        return Err(DynamicsError::Precondition(
            "one core curve and one boundary pair per annulus".into(),
        ));
    }
    let tol = T::lit(opts.delta);
    let arcs = input.arcs.as_deref();
    let core_tags: Vec<HomotopyTag> = input
        .cores
        .iter()
        .map(|c| classify_curve(&input.marked, c, arcs, tol))
        .collect::<Result<_, _>>()?;
    for (i, t) in core_tags.iter().enumerate() {
        if t.kind != CurveKind::NonPeripheral {
            return Err(DynamicsError::Precondition(format!(
                "core curve {i} is not non-peripheral"
            )));
        }
        for (j, u) in core_tags.iter().enumerate().skip(i + 1) {
            if t.compare(u) != TagMatch::Differs {
                return Err(DynamicsError::Precondition(format!(
                    "core curves {i} and {j} are not known to be non-homotopic"
                )));
            }
        }
    }
    let inner_reps: Vec<Point<T>> = input.boundaries.iter().map(|b| midpoint(&b[0])).collect();

    // lifts of every core curve, kept when homotopic to a core curve
    let mut found: Vec<(usize, usize, usize, CurvePolyline<T>, HomotopyTag)> = Vec::new();
    let mut peripheral = 0;
    let mut stray = 0;
    for (i, core) in input.cores.iter().enumerate() {
        for comp in lift_curve_components(f, core, opts)? {
            let tag = classify_curve(&input.marked, &comp.curve, arcs, tol)?;
            if tag.kind != CurveKind::NonPeripheral {
                peripheral += 1;
                continue;
            }
            let verdicts: Vec<TagMatch> = core_tags.iter().map(|c| tag.compare(c)).collect();
            match verdicts.iter().position(|v| *v == TagMatch::Matches) {
                Some(j) => found.push((j, i, comp.degree, comp.curve, tag)),
                None if verdicts.contains(&TagMatch::Inconclusive) => {
                    return Err(DynamicsError::Ambiguous(format!(
                        "a lift of core curve {i} could not be compared"
                    )))
                }
                None => stray += 1,
            }
        }
    }

    // boundaries lying in the preimage of the boundary
    let all_bd: Vec<&CurvePolyline<T>> = input.boundaries.iter().flatten().collect();
    let in_preimage = |b: &CurvePolyline<T>| {
        b.points[1..b.len() - 1].iter().all(|p| {
            let w = f.eval(p);
            all_bd
                .iter()
                .any(|c| c.arc_distance_to(&w) < T::lit(BOUNDARY_TOL))
        })
    };
    let boundary_in_preimage: Vec<[bool; 2]> = input
        .boundaries
        .iter()
        .map(|[a, b]| [in_preimage(a), in_preimage(b)])
        .collect();

    let mut witnesses: Vec<SubannulusWitness<T>> = Vec::new();
    for j in 0..k {
        let mine: Vec<usize> = (0..found.len()).filter(|&x| found[x].0 == j).collect();
        let curves: Vec<&CurvePolyline<T>> = mine.iter().map(|&x| &found[x].3).collect();
        let ranks = nesting_ranks(&curves, &inner_reps[j]);
        let mut order: Vec<(usize, usize)> = ranks.into_iter().zip(mine).collect();
        order.sort();
        for (rank, x) in order {
            let (parent, target, degree, curve, tag) = found[x].clone();
            let orientation = orientation_of(
                f,
                &curve,
                &inner_reps[parent],
                &input.cores[target],
                &inner_reps[target],
            );
            witnesses.push(SubannulusWitness {
                parent,
                target,
                degree,
                rank,
                orientation,
                tag,
                curve,
            });
        }
    }

    let mut subannuli = Vec::new();
    let mut flags_consistent = true;
    for j in 0..k {
        let subs: Vec<usize> = (0..witnesses.len())
            .filter(|&x| witnesses[x].parent == j)
            .collect();
        for (pos, &x) in subs.iter().enumerate() {
            let w = &witnesses[x];
            let shares_inner = pos == 0 && boundary_in_preimage[j][0];
            let shares_outer = pos + 1 == subs.len() && boundary_in_preimage[j][1];
            for (side, shared) in [(0usize, shares_inner), (1, shares_outer)] {
                if !shared {
                    continue;
                }
                let img = f.eval(&midpoint(&input.boundaries[j][side]));
                let d = |s: usize| input.boundaries[w.target][s].distance_to(&img);
                let img_side = if d(0) <= d(1) { 0 } else { 1 };
                let expect = match w.orientation {
                    Orientation::Preserving => side,
                    Orientation::Reversing => 1 - side,
                };
                flags_consistent &= img_side == expect;
            }
            subannuli.push(Subannulus {
                parent: j,
                essential: true,
                shares_inner,
                shares_outer,
                target: w.target,
                degree: w.degree as u32,
                orientation: w.orientation,
            });
        }
    }
    let spec = AnnularSystemSpec {
        components: (0..k)
            .map(|j| AnnulusComponent {
                name: format!("A{j}"),
                boundaries: None,
                modulus: None,
            })
            .collect(),
        subannuli,
    };
    let validation = spec
        .validate()
        .map_err(|e| DynamicsError::Precondition(e.to_string()))?;

    let mut matrix = vec![vec![0u32; k]; k];
    for w in &witnesses {
        matrix[w.parent][w.target] += 1;
    }
    let graph = PullbackGraph::from_matrix(matrix.clone(), None, f.degree() as u32)
        .map_err(|e| DynamicsError::Precondition(e.to_string()))?;
    let kappa = kappa_table(&graph, 10)
        .map_err(|e| DynamicsError::Precondition(e.to_string()))?
        .into_iter()
        .map(|v| v.values)
        .collect();
    let cantor = is_cantor(&graph).map_err(|e| DynamicsError::Precondition(e.to_string()))?;
    Ok(ExactSystemReport {
        spec,
        validation,
        core_tags,
        subannuli: witnesses,
        peripheral_lifts: peripheral,
        stray_lifts: stray,
        boundary_in_preimage,
        flags_consistent,
        matrix,
        kappa,
        cantor,
    })
}
