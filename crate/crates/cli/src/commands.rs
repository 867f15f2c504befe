use std::path::Path;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};
use wandering_core::annulus_engine::{
    component_class, degree_growth_n, hull_annulus, hulls_to_csv, nested_fate, realize_log,
    AnnularSystemSpec, NestedFate, DEFAULT_HORIZON,
};
use wandering_core::coding::{champernowne, classify_code, classify_stream, Code};
use wandering_core::curve_complex::{
    build_graph, is_cantor, kappa_table, lemma_cm_report, predicates, GraphSpec,
};
use wandering_core::interval_model::{parse_scalar, to_csv, IntervalSystemSpec, EXPANSION_CAP};
use wandering_core::rational_dynamics::builtin::{
    cubic_annulus, lattes, lattes_annular, LattesData,
};
use wandering_core::rational_dynamics::{
    curve_to_csv, log_model_wandering, post_critical, render_svg, verify_exact_system,
    wandering_curve, Chart, CurvePolyline, ExactSystemInput, LiftOptions, MapSpec, MarkedSphere,
    Point, RationalMap, Scene, WanderingOptions,
};
use wandering_core::renorm_search::{renorm_report, RenormBundle};
use wandering_core::verify::{run_verify, VerifyOptions};
use wandering_core::ExactIntervalSystem;

use crate::io::{compute, emit, input, parse_json, pretty, read_json, CliError, CliResult};
use crate::{
    AnnulusArgs, Format, IntervalArgs, MulticurveArgs, RenormArgs, VerifyArgs, WanderingArgs,
};

const MIDDLE_THIRDS_JSON: &str = include_str!("../../core/data/middle_thirds.json");

/// The value, or `{"error": ...}`.
fn outcome<T: serde::Serialize, E: std::fmt::Display>(r: &Result<T, E>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("serializable"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

pub fn multicurve(a: &MulticurveArgs) -> CliResult<()> {
    let spec: GraphSpec = read_json(&a.input)?;
    let graph = build_graph(spec).map_err(input)?;
    let preds = predicates(&graph);
    let kappa = kappa_table(&graph, a.depth);
    let cantor = is_cantor(&graph);
    let lemma = lemma_cm_report(&graph);
    let report = json!({
        "classes": graph.classes().iter().map(|c| &c.id).collect::<Vec<_>>(),
        "matrix": graph.matrix(),
        "degree": graph.degree(),
        "predicates": preds,
        "kappa": outcome(&kappa.as_ref().map(|t| t.iter().map(|k| &k.values).collect::<Vec<_>>())),
        "cantor": outcome(&cantor),
        "lemma": outcome(&lemma),
    });
    let text = match a.format {
        Format::Text => {
            let mut s = format!(
                "classes {}, pre-stable {}, irreducible {}\n",
                graph.len(),
                preds.pre_stable,
                preds.irreducible
            );
            if let Ok(t) = &kappa {
                for k in t {
                    s.push_str(&format!("kappa_{} = {:?}\n", k.depth, k.values));
                }
            }
            if let Ok(c) = &cantor {
                s.push_str(&format!("cantor multicurve: {}\n", c.verdict));
            }
            s
        }
        _ => pretty(&report),
    };
    emit(a.out.as_ref(), "multicurve.json", &text)?;
    match (&kappa, &cantor) {
        (Ok(_), Ok(_)) => Ok(()),
        (Err(e), _) | (_, Err(e)) => Err(input(e)),
    }
}

fn load_interval_system(name: &str) -> CliResult<(ExactIntervalSystem, Option<AnnularSystemSpec>)> {
    let text = match name {
        "middle-thirds" => MIDDLE_THIRDS_JSON.to_string(),
        "cubic-annulus-model" => return from_annular(cubic_annulus()),
        "lattes" => return from_annular(lattes_annular()),
        path => std::fs::read_to_string(path).map_err(|e| input(format!("{path}: {e}")))?,
    };
    let value: Value = parse_json(&text, name)?;
    if value.get("intervals").is_some() {
        let spec: IntervalSystemSpec = parse_json(&text, name)?;
        Ok((spec.build().map_err(input)?, None))
    } else {
        from_annular(parse_json(&text, name)?)
    }
}

fn from_annular(
    spec: AnnularSystemSpec,
) -> CliResult<(ExactIntervalSystem, Option<AnnularSystemSpec>)> {
    let sys = ExactIntervalSystem::from_annular_spec(&spec).map_err(input)?;
    Ok((sys, Some(spec)))
}

pub fn interval(a: &IntervalArgs) -> CliResult<()> {
    let (sys, _) = load_interval_system(&a.input)?;
    let pieces = sys.preimage_depth(a.depth);
    let csv = to_csv(&pieces);
    let expansion = sys.expansion(EXPANSION_CAP);
    let mut points = Vec::new();
    for p in &a.points {
        let x: BigRational = parse_scalar(p).map_err(input)?;
        let entry = match sys.orbit_code(&x, a.iters) {
            Ok(code) => json!({"point": p, "code": code, "class": classify_code(&code)}),
            Err(e) => json!({"point": p, "error": e.to_string()}),
        };
        points.push(entry);
    }
    let alphabet = sys.subs().len();
    let report = json!({
        "components": sys.len(),
        "subintervals": alphabet,
        "depth": a.depth,
        "intervals": pieces.len(),
        "expansion": match &expansion {
            Ok(e) => json!({
                "n": e.n,
                "min_derivative": e.min_derivative.to_string(),
                "lambda": e.lambda,
                "c": e.c,
            }),
            Err(e) => json!({"error": e.to_string()}),
        },
        "points": points,
        "champernowne_class": (alphabet >= 2).then(|| classify_stream(champernowne(alphabet), a.iters)),
    });
    match a.out {
        Some(_) => {
            emit(a.out.as_ref(), "intervals.csv", &csv)?;
            emit(a.out.as_ref(), "report.json", &pretty(&report))?;
        }
        None if a.format == Format::Csv => emit(None, "", &csv)?,
        None => emit(None, "", &pretty(&report))?,
    }
    expansion.map(|_| ()).map_err(compute)
}

fn load_annular(name: &str) -> CliResult<AnnularSystemSpec> {
    match name {
        "cubic-annulus-model" => Ok(cubic_annulus()),
        "lattes" => Ok(lattes_annular()),
        path => read_json(Path::new(path)),
    }
}

/// `0,1` periodic; `2/0,1` prefix then cycle; `champernowne`.
pub fn parse_code(s: &str, alphabet: usize, horizon: usize) -> CliResult<Code> {
    let list = |t: &str| -> CliResult<Vec<usize>> {
        t.split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|e| input(format!("code `{s}`: {e}")))
            })
            .collect()
    };
    if s == "champernowne" {
        if alphabet < 2 {
            return Err(input("champernowne code needs at least two branches"));
        }
        return Ok(Code::Finite(champernowne(alphabet).take(horizon).collect()));
    }
    let (prefix, cycle) = match s.split_once('/') {
        Some((p, c)) => (list(p)?, list(c)?),
        None => (Vec::new(), list(s)?),
    };
    if cycle.is_empty() {
        return Err(input(format!("code `{s}` has an empty cycle")));
    }
    Ok(Code::EventuallyPeriodic { prefix, cycle }.normalized())
}

pub fn annulus(a: &AnnulusArgs) -> CliResult<()> {
    let spec = load_annular(&a.input)?;
    let validation = spec.validate().map_err(input)?;
    let growth = degree_growth_n(&spec);
    let codes: Vec<String> = if a.codes.is_empty() {
        (0..spec.subannuli.len()).map(|i| i.to_string()).collect()
    } else {
        a.codes.clone()
    };
    let mut fates = Vec::new();
    for c in &codes {
        let code = parse_code(c, spec.subannuli.len(), a.iters)?;
        let fate = nested_fate(&spec, &code, a.iters).map_err(input)?;
        let class = component_class(&spec, &code, a.iters.max(DEFAULT_HORIZON));
        fates.push(json!({
            "code": c,
            "fate": fate,
            "class": outcome(&class),
        }));
    }
    let mut csv = None;
    let mut hull_error = None;
    match realize_log::<BigRational>(&spec) {
        Ok(real) => {
            let half = BigRational::new(1.into(), 2.into());
            let core: Vec<BigRational> = (0..real.system.len())
                .map(|j| real.system.interval(j).0 + half.clone())
                .collect();
            let mut rows = Vec::new();
            for n in 0..=a.depth {
                rows.push((n, hull_annulus(&real, &core, n).map_err(compute)?));
            }
            csv = Some(hulls_to_csv(&rows));
        }
        Err(e) => hull_error = Some(e.to_string()),
    }
    let report = json!({
        "validation": validation,
        "degree_growth_n": outcome(&growth),
        "fates": fates,
        "hulls": hull_error.map_or(json!("hulls.csv"), |e| json!({"error": e})),
    });
    match a.out {
        Some(_) => {
            if let Some(c) = &csv {
                emit(a.out.as_ref(), "hulls.csv", c)?;
            }
            emit(a.out.as_ref(), "report.json", &pretty(&report))?;
        }
        None if a.format == Format::Csv => emit(None, "", csv.as_deref().unwrap_or(""))?,
        None => emit(None, "", &pretty(&report))?,
    }
    Ok(())
}

/// Custom map input for `wandering`. Boundary continua and arcs are open
/// polylines; `null` stands for ∞.
#[derive(Debug, Deserialize)]
struct WanderingInput {
    map: MapSpec,
    #[serde(default)]
    marked: Option<Vec<Point<f64>>>,
    cores: Vec<Vec<Point<f64>>>,
    boundaries: Vec<[Vec<Point<f64>>; 2]>,
    #[serde(default)]
    arcs: Option<Vec<Vec<Point<f64>>>>,
    #[serde(default)]
    proxies: Option<Vec<[Vec<Point<f64>>; 2]>>,
    #[serde(default)]
    pole: Option<Point<f64>>,
}

struct Problem {
    f: RationalMap<f64>,
    input: ExactSystemInput<f64>,
    proxies: Option<Vec<[CurvePolyline<f64>; 2]>>,
    pole: Point<f64>,
}

fn lattes_problem(nodes: usize) -> Problem {
    let data = LattesData::<f64>::new(nodes);
    Problem {
        f: lattes(),
        input: data.exact_input(),
        proxies: Some(vec![data.proxies.clone()]),
        pole: Point::new(0.0, 2.0),
    }
}

fn custom_problem(path: &Path) -> CliResult<Problem> {
    let w: WanderingInput = read_json(path)?;
    let f = RationalMap::from_spec(&w.map).map_err(input)?;
    let marked = match w.marked {
        Some(pts) => MarkedSphere::new(pts, 1e-9).map_err(input)?,
        None => post_critical(&f, 64, 1e-9).map_err(compute)?.marked,
    };
    let open = |v: Vec<Point<f64>>| CurvePolyline::open(v);
    let pair = |[a, b]: [Vec<Point<f64>>; 2]| [open(a), open(b)];
    Ok(Problem {
        f,
        input: ExactSystemInput {
            marked,
            cores: w.cores.into_iter().map(CurvePolyline::closed).collect(),
            boundaries: w.boundaries.into_iter().map(pair).collect(),
            arcs: w.arcs.map(|v| v.into_iter().map(open).collect()),
        },
        proxies: w.proxies.map(|v| {
            v.into_iter()
                .map(|[a, b]| [CurvePolyline::closed(a), CurvePolyline::closed(b)])
                .collect()
        }),
        pole: w.pole.unwrap_or(Point::Infinity),
    })
}

pub fn wandering(a: &WanderingArgs) -> CliResult<()> {
    if a.iters == 0 || a.nodes < 8 || a.tol <= 0.0 || a.delta <= 0.0 {
        return Err(input(
            "iters ≥ 1, nodes ≥ 8 and positive tolerances required",
        ));
    }
    let problem = match (a.map.as_deref(), &a.input) {
        (Some("lattes"), _) => lattes_problem(a.nodes),
        (Some("cubic-annulus-model"), _) => return cubic_model(a),
        (Some(other), _) => return Err(input(format!("unknown map `{other}`"))),
        (None, Some(path)) => custom_problem(path)?,
        (None, None) => return Err(input("give --map or --input")),
    };
    let lift = LiftOptions {
        delta: a.delta,
        ..Default::default()
    };
    let report = verify_exact_system(&problem.f, &problem.input, &lift).map_err(compute)?;
    let spec = &report.spec;
    let code = parse_code(&a.code, spec.subannuli.len(), a.iters + 1)?;
    let fate = nested_fate(spec, &code, DEFAULT_HORIZON).map_err(input)?;
    let system = json!({
        "spec": spec,
        "validation": report.validation,
        "flags_consistent": report.flags_consistent,
        "kappa": report.kappa,
        "cantor": report.cantor.verdict,
    });
    if let NestedFate::SharesBoundaryForever { .. } = fate {
        eprintln!(
            "code {} keeps a boundary circle at every depth; no iteration",
            a.code
        );
        let log = json!({
            "code": a.code,
            "system": system,
            "fate": fate,
            "diagnostic": "boundary collapse: the nested annuli share a boundary circle forever, so the nested intersection is not a Jordan curve in the interior",
            "iterated": false,
        });
        return emit(a.out.as_ref(), "convergence.json", &pretty(&log));
    }
    let opts = WanderingOptions {
        iterations: a.iters,
        nodes: a.nodes,
        tol: a.tol,
        lift,
    };
    let run = wandering_curve(
        &problem.f,
        &problem.input,
        &report,
        &code,
        problem.proxies.as_deref(),
        &opts,
    )
    .map_err(compute)?;
    for (n, d) in run.distances.iter().enumerate() {
        eprintln!("d_{n} = {d:.6e}");
    }
    let log = json!({
        "code": a.code,
        "system": system,
        "fate": fate,
        "iterated": true,
        "depth": run.depth,
        "distances": run.distances,
        "ratios": run.ratios(),
        "stopped_by_tol": run.stopped_by_tol,
        "self_intersections": run.self_intersections,
        "functoriality": run.functoriality,
        "boundary": run.boundary,
    });
    let last = run.curves.last().expect("at least one curve");
    let svg = render_svg(
        &Chart::new(problem.pole),
        &Scene {
            marked: &problem.input.marked.points,
            slits: problem
                .input
                .boundaries
                .iter()
                .flatten()
                .cloned()
                .collect::<Vec<_>>()
                .as_slice(),
            curves: &run.curves,
        },
    );
    write_outputs(a, &log, &curve_to_csv(last), &svg)
}

fn write_outputs(a: &WanderingArgs, log: &Value, csv: &str, svg: &str) -> CliResult<()> {
    match a.out {
        Some(_) => {
            emit(a.out.as_ref(), "wandering.svg", svg)?;
            emit(a.out.as_ref(), "curve.csv", csv)?;
            emit(a.out.as_ref(), "convergence.json", &pretty(log))
        }
        None => match a.format {
            Format::Csv => emit(None, "", csv),
            Format::Svg => emit(None, "", svg),
            _ => emit(None, "", &pretty(log)),
        },
    }
}

fn cubic_model(a: &WanderingArgs) -> CliResult<()> {
    let spec = cubic_annulus();
    let code = parse_code(&a.code, spec.subannuli.len(), a.iters)?;
    let fate = nested_fate(&spec, &code, DEFAULT_HORIZON).map_err(input)?;
    if let NestedFate::SharesBoundaryForever { .. } = fate {
        let log = json!({
            "code": a.code,
            "fate": fate,
            "diagnostic": "boundary collapse: the nested annuli share a boundary circle forever",
            "iterated": false,
        });
        return emit(a.out.as_ref(), "convergence.json", &pretty(&log));
    }
    let run = log_model_wandering(&spec, &code, a.iters).map_err(compute)?;
    for (n, d) in run.distances.iter().enumerate() {
        eprintln!("d_{n} = {d:.6e}");
    }
    let log = json!({
        "code": a.code,
        "fate": fate,
        "iterated": true,
        "log_radii": run.radii,
        "distances": run.distances,
        "hull": run.hull,
        "boundary": run.boundary,
    });
    let curves: Vec<CurvePolyline<f64>> = (0..run.radii.len())
        .map(|n| run.curve(n, a.nodes))
        .collect();
    let rim = |r: f64| CurvePolyline::ellipse(a.nodes, num_complex::Complex::new(0.0, 0.0), r, r);
    let slits = [rim(1.0), rim(std::f64::consts::E)];
    let svg = render_svg(
        &Chart::new(Point::Infinity),
        &Scene {
            marked: &[],
            slits: &slits,
            curves: &curves,
        },
    );
    write_outputs(a, &log, &curve_to_csv(curves.last().unwrap()), &svg)
}

pub fn renorm(a: &RenormArgs) -> CliResult<()> {
    let bundle = match a.input.as_str() {
        "lattes" => RenormBundle::lattes(),
        path => read_json(Path::new(path))?,
    };
    let report = renorm_report(&bundle).map_err(input)?;
    let text = match a.format {
        Format::Json => pretty(&report),
        _ => report.to_text(),
    };
    let name = if a.format == Format::Json {
        "renorm.json"
    } else {
        "renorm.txt"
    };
    emit(a.out.as_ref(), name, &text)
}

pub fn verify(a: &VerifyArgs) -> CliResult<()> {
    let report = run_verify(a.seed, &VerifyOptions::default());
    emit(a.out.as_ref(), "verify.json", &report.to_json())?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Compute(format!(
            "checks failed: {}",
            failed.join(", ")
        )))
    }
}
