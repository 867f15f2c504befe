//! The invariant suite behind the `verify` subcommand. Every check draws
//! from its own ChaCha stream derived from one seed, so the report is a pure
//! function of the seed.

pub mod gen;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::annulus_engine::degree_growth_n;
use crate::coding::{Code, CodeClass};
use crate::curve_complex::{is_cantor, lemma_cm_report};
use crate::interval_model::{semiconjugacy_check, IntervalSystem, EXPANSION_CAP};
use crate::rational_dynamics::builtin::{cubic_annulus, lattes, lattes_annular, LattesData};
use crate::rational_dynamics::{
    lift_curve_components, post_critical, verify_exact_system, wandering_curve, CurvePolyline,
    LiftOptions, Poly, RationalMap, WanderingOptions,
};
use crate::renorm_search::{renorm_report, tau_map, RenormBundle};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub graphs: usize,
    pub specs: usize,
    pub circles: usize,
    pub wandering_iterations: usize,
    pub wandering_nodes: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            graphs: 1000,
            specs: 500,
            circles: 50,
            wandering_iterations: 10,
            wandering_nodes: 512,
        }
    }
}

fn stream(seed: u64, check: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(check);
    rng
}

fn check(name: &str, passed: bool, detail: Value) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_verify(seed: u64, opts: &VerifyOptions) -> VerifyReport {
    let checks = vec![
        lemma_equivalence(seed, opts),
        cantor_routes_agree(seed, opts),
        interval_golden(),
        semiconjugacy(),
        degree_growth(seed, opts),
        lattes_post_critical(),
        degree_conservation(seed, opts),
        lattes_exact_system(),
        lattes_wandering(opts),
        renorm(),
        tau_periodicity(seed),
    ];
    VerifyReport {
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn lemma_equivalence(seed: u64, opts: &VerifyOptions) -> Check {
    let mut rng = stream(seed, 1);
    let mut failures = Vec::new();
    for k in 0..opts.graphs {
        let g = gen::random_irreducible_graph(&mut rng, 6, 3);
        match lemma_cm_report(&g) {
            Ok(r) if r.all_agree => {}
            Ok(r) => {
                failures.push(json!({"graph": k, "matrix": g.matrix(), "conditions": r.as_array()}))
            }
            Err(e) => failures.push(json!({"graph": k, "error": e.to_string()})),
        }
    }
    check(
        "lemma_equivalence",
        failures.is_empty(),
        json!({"graphs": opts.graphs, "failures": failures}),
    )
}

fn cantor_routes_agree(seed: u64, opts: &VerifyOptions) -> Check {
    let mut rng = stream(seed, 2);
    let mut tested = 0;
    let mut cantor = 0;
    let mut disagree = Vec::new();
    for _ in 0..opts.graphs {
        let g = gen::random_graph(&mut rng, 6, 3);
        if let Ok(v) = is_cantor(&g) {
            tested += 1;
            cantor += v.verdict as usize;
            if !v.agree {
                disagree.push(g.matrix().to_vec());
            }
        }
    }
    check(
        "cantor_structural_vs_empirical",
        disagree.is_empty(),
        json!({"pre_stable_graphs": tested, "cantor": cantor, "disagreements": disagree}),
    )
}

fn interval_golden() -> Check {
    let sys = IntervalSystem::<BigRational>::from_annular_spec(&cubic_annulus()).expect("built-in");
    let depth = sys.preimage_depth(10);
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let len = Pow::pow(&third, 10u32);
    let exact_lengths = depth
        .iter()
        .all(|d| d.right.clone() - d.left.clone() == len);
    let e = sys.expansion(EXPANSION_CAP).expect("expanding");
    let class = |num: i64, den: i64| {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        sys.orbit_code(&x, 64)
            .map(|c| crate::coding::classify_code(&c))
            .ok()
    };
    let three_q = class(3, 4);
    let one_q = class(1, 4);
    let passed = depth.len() == 1024
        && exact_lengths
        && e.n == 1
        && (e.lambda - 3.0).abs() < 1e-12
        && three_q == Some(CodeClass::Periodic { period: 1 })
        && one_q
            == Some(CodeClass::Preperiodic {
                preperiod: 1,
                period: 1,
            });
    check(
        "interval_golden",
        passed,
        json!({
            "intervals": depth.len(),
            "exact_lengths": exact_lengths,
            "expansion_n": e.n,
            "lambda": e.lambda,
            "class_3_4": three_q,
            "class_1_4": one_q,
        }),
    )
}

fn semiconjugacy() -> Check {
    let mut detail = serde_json::Map::new();
    let mut passed = true;
    for (name, spec) in [
        ("cubic_annulus", cubic_annulus()),
        ("lattes", lattes_annular()),
    ] {
        let sys = IntervalSystem::<BigRational>::from_annular_spec(&spec).expect("built-in");
        let pi: Vec<usize> = (0..spec.subannuli.len()).collect();
        let r = semiconjugacy_check(&sys, &spec, 6, &pi);
        passed &= r.holds;
        detail.insert(name.into(), serde_json::to_value(&r).unwrap());
    }
    check("semiconjugacy", passed, Value::Object(detail))
}

fn degree_growth(seed: u64, opts: &VerifyOptions) -> Check {
    let mut rng = stream(seed, 5);
    let mut worst = 0i64;
    let mut violations = 0;
    for _ in 0..opts.specs {
        let s = gen::random_annular_spec(&mut rng, 4, 6);
        let n = degree_growth_n(&s).expect("annular by construction");
        let m = s.subannuli.len();
        worst = worst.max(n as i64 - m as i64);
        violations += (n > m + 2) as usize;
    }
    check(
        "degree_growth_bound",
        violations == 0,
        json!({"specs": opts.specs, "max_n_minus_m": worst, "violations": violations}),
    )
}

fn lattes_post_critical() -> Check {
    let f = lattes::<f64>();
    match post_critical(&f, 16, 1e-9) {
        Ok(pc) => {
            let marked = serde_json::to_value(&pc.marked.points).unwrap();
            let want = LattesData::<f64>::new(8).marked.points;
            let same = pc.marked.points.len() == 4
                && pc
                    .marked
                    .points
                    .iter()
                    .zip(&want)
                    .all(|(a, b)| a.chordal(b) < 1e-9);
            let worst = pc
                .orbits
                .iter()
                .map(|o| o.closing_error)
                .fold(0.0, f64::max);
            check(
                "lattes_post_critical",
                same && worst < 1e-9,
                json!({"marked": marked, "max_closing_error": worst}),
            )
        }
        Err(e) => check(
            "lattes_post_critical",
            false,
            json!({"error": e.to_string()}),
        ),
    }
}

fn degree_conservation(seed: u64, opts: &VerifyOptions) -> Check {
    let mut rng = stream(seed, 7);
    let e3 = 3f64.exp();
    let maps: Vec<(&str, RationalMap<f64>)> = vec![
        ("lattes", lattes()),
        (
            "cube",
            RationalMap::new(Poly::real(&[0.0, 0.0, 0.0, 1.0]), Poly::real(&[1.0])).unwrap(),
        ),
        (
            "inverted_cube",
            RationalMap::new(Poly::real(&[e3]), Poly::real(&[0.0, 0.0, 0.0, 1.0])).unwrap(),
        ),
    ];
    let lift = LiftOptions::default();
    let mut detail = serde_json::Map::new();
    let mut passed = true;
    for (name, f) in &maps {
        let mut ok = 0;
        let mut skipped = 0;
        let mut bad = 0;
        while ok + bad < opts.circles {
            let c = Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = rng.gen_range(0.1..2.5);
            let circle = CurvePolyline::ellipse(256, c, r, r);
            match lift_curve_components(f, &circle, &lift) {
                Ok(comps) => {
                    if comps.iter().map(|c| c.degree).sum::<usize>() == f.degree() {
                        ok += 1;
                    } else {
                        bad += 1;
                    }
                }
                Err(_) => skipped += 1,
            }
        }
        passed &= bad == 0;
        detail.insert(
            (*name).into(),
            json!({"circles": ok + bad, "conserved": ok, "skipped_near_critical_values": skipped}),
        );
    }
    check("degree_conservation", passed, Value::Object(detail))
}

fn lattes_exact_system() -> Check {
    let f = lattes::<f64>();
    let data = LattesData::<f64>::new(1024);
    match verify_exact_system(&f, &data.exact_input(), &LiftOptions::default()) {
        Ok(r) => {
            let degrees: Vec<u32> = r.spec.subannuli.iter().map(|s| s.degree).collect();
            let kappa_ok = r.kappa.iter().enumerate().all(|(n, k)| k[0] == 1u128 << n);
            let passed = r.spec.components.len() == 1
                && degrees == [2, 2]
                && r.validation.is_exact
                && r.flags_consistent
                && kappa_ok
                && r.cantor.verdict;
            check(
                "lattes_exact_system",
                passed,
                json!({
                    "spec": r.spec,
                    "validation": r.validation,
                    "kappa": r.kappa,
                    "cantor": r.cantor.verdict,
                    "flags_consistent": r.flags_consistent,
                }),
            )
        }
        Err(e) => check(
            "lattes_exact_system",
            false,
            json!({"error": e.to_string()}),
        ),
    }
}

fn lattes_wandering(opts: &VerifyOptions) -> Check {
    let f = lattes::<f64>();
    let data = LattesData::<f64>::new(opts.wandering_nodes);
    let input = data.exact_input();
    let wopts = WanderingOptions {
        iterations: opts.wandering_iterations,
        nodes: opts.wandering_nodes,
        ..Default::default()
    };
    let run = verify_exact_system(&f, &input, &wopts.lift).and_then(|r| {
        wandering_curve(
            &f,
            &input,
            &r,
            &Code::periodic(vec![0, 1]),
            Some(&[data.proxies.clone()]),
            &wopts,
        )
    });
    match run {
        Ok(run) => {
            let passed =
                run.telescopes(1, 2) && run.self_intersections == 0 && run.functoriality < 1e-6;
            check(
                "lattes_wandering",
                passed,
                json!({
                    "distances": run.distances,
                    "self_intersections": run.self_intersections,
                    "functoriality": run.functoriality,
                    "boundary": run.boundary,
                }),
            )
        }
        Err(e) => check("lattes_wandering", false, json!({"error": e.to_string()})),
    }
}

fn renorm() -> Check {
    match renorm_report(&RenormBundle::lattes()) {
        Ok(r) => {
            let c = r.best();
            let passed =
                c.period == 1 && c.candidate_degree == 2 && c.verdict && r.tau_matches_spec;
            check("renorm_lattes", passed, serde_json::to_value(&r).unwrap())
        }
        Err(e) => check("renorm_lattes", false, json!({"error": e.to_string()})),
    }
}

fn tau_periodicity(seed: u64) -> Check {
    let mut rng = stream(seed, 11);
    let mut bad = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let t = gen::random_tau(&mut rng, n);
        let m = tau_map(&t, n).expect("function by construction");
        let covered = (0..n).all(|i| m.preperiod[i] < n && m.period[i] >= 1);
        let cycles_ok = m.cycles.iter().all(|c| {
            c.iter()
                .enumerate()
                .all(|(k, &i)| t[i] == c[(k + 1) % c.len()])
        });
        bad += (!covered || !cycles_ok) as usize;
    }
    check(
        "tau_eventually_periodic",
        bad == 0,
        json!({"maps": 200, "failures": bad}),
    )
}
