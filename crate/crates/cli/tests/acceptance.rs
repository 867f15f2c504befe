//! Acceptance run: one PASS/FAIL line per criterion, with wall time.
//! Exits non-zero when any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex;
use num_rational::BigRational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wandering_core::annulus_engine::{degree_growth_n, AnnularSystemSpec};
use wandering_core::coding::{classify_code, Code, CodeClass};
use wandering_core::curve_complex::{kappa_table, lemma_cm_report};
use wandering_core::interval_model::{parse_scalar, semiconjugacy_check, EXPANSION_CAP};
use wandering_core::rational_dynamics::builtin::{
    cubic_annulus, lattes, lattes_annular, LattesData,
};
use wandering_core::rational_dynamics::{
    lift_curve_components, lift_path, post_critical, verify_exact_system, wandering_curve,
    CurvePolyline, LiftOptions, Point, WanderingOptions,
};
use wandering_core::renorm_search::{renorm_report, tau_from_samples, RenormBundle};
use wandering_core::verify::gen;
use wandering_core::ExactIntervalSystem;

const SEED: u64 = 20240611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Labelled preimage trees with multiplicity-weighted nodes.
fn tree_oracle(m: &[Vec<u32>], depth: usize) -> Vec<u128> {
    fn descend(m: &[Vec<u32>], class: usize, weight: u128, left: usize, out: &mut [u128]) {
        if left == 0 {
            out[class] += weight;
            return;
        }
        for (child, row) in m.iter().enumerate() {
            if row[class] > 0 {
                descend(m, child, weight * row[class] as u128, left - 1, out);
            }
        }
    }
    let mut out = vec![0; m.len()];
    for root in 0..m.len() {
        descend(m, root, 1, depth, &mut out);
    }
    out
}

fn valid_codes(spec: &AnnularSystemSpec, n: usize) -> usize {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|w| {
                spec.subannuli.iter().enumerate().filter_map(move |(i, s)| {
                    w.last()
                        .map_or(true, |&l| spec.subannuli[l].target == s.parent)
                        .then(|| [w.clone(), vec![i]].concat())
                })
            })
            .collect();
    }
    out.len()
}

fn lemma_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let graphs = 1000;
    let mut split = 0;
    for _ in 0..graphs {
        let g = gen::random_irreducible_graph(&mut rng, 6, 3);
        let a = lemma_cm_report(&g).map(|r| r.as_array());
        if !a.is_ok_and(|a| a.iter().all(|&x| x == a[0])) {
            split += 1;
        }
    }
    outcome(
        split == 0,
        format!("{graphs} graphs, {split} with differing conditions"),
    )
}

fn kappa_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let (mut compared, mut mismatches) = (0, 0);
    for _ in 0..1000 {
        let g = gen::random_graph(&mut rng, 5, 3);
        let Ok(table) = kappa_table(&g, 8) else {
            continue;
        };
        compared += 1;
        if table
            .iter()
            .enumerate()
            .any(|(n, k)| k.values != tree_oracle(g.matrix(), n))
        {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0 && compared >= 100,
        format!("{compared} pre-stable graphs to depth 8, {mismatches} mismatches"),
    )
}

fn interval_golden() -> Outcome {
    let sys = ExactIntervalSystem::from_annular_spec(&cubic_annulus()).unwrap();
    let pieces = sys.preimage_depth(10);
    let len: BigRational = parse_scalar("1/59049").unwrap();
    let exact = pieces
        .iter()
        .all(|d| d.right.clone() - d.left.clone() == len);
    let e = sys.expansion(EXPANSION_CAP).unwrap();
    let three: BigRational = parse_scalar("3").unwrap();
    let class = |x: &str| classify_code(&sys.orbit_code(&parse_scalar(x).unwrap(), 64).unwrap());
    let (a, b) = (class("3/4"), class("1/4"));
    let passed = pieces.len() == 1024
        && exact
        && e.n == 1
        && e.min_derivative == three
        && a == CodeClass::Periodic { period: 1 }
        && b == CodeClass::Preperiodic {
            preperiod: 1,
            period: 1,
        };
    outcome(
        passed,
        format!(
            "{} intervals, all of length 3^-10: {exact}, N = {}, lambda = {}, 3/4 {a:?}, 1/4 {b:?}",
            pieces.len(),
            e.n,
            e.lambda
        ),
    )
}

fn degree_growth_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let specs = 500;
    let mut worst = i64::MIN;
    let mut over = 0;
    for _ in 0..specs {
        let s = gen::random_annular_spec(&mut rng, 4, 6);
        let n = degree_growth_n(&s).unwrap();
        let m = s.subannuli.len();
        worst = worst.max(n as i64 - m as i64);
        over += (n > m + 2) as usize;
    }
    outcome(over == 0, format!("{specs} specs, max N - m = {worst}"))
}

fn lattes_pcf() -> Outcome {
    let f = lattes::<f64>();
    let pc = post_critical(&f, 16, 1e-9).unwrap();
    let want = [
        Point::real(0.0),
        Point::real(1.0),
        Point::real(-1.0),
        Point::Infinity,
    ];
    let found = pc.marked.len() == 4
        && want
            .iter()
            .all(|w| pc.marked.points.iter().any(|p| p.chordal(w) < 1e-9));
    let worst = pc
        .orbits
        .iter()
        .map(|o| o.closing_error)
        .fold(0.0, f64::max);
    outcome(
        found && worst < 1e-9,
        format!(
            "{}, max closing error {worst:.1e}",
            serde_json::to_string(&pc.marked.points).unwrap()
        ),
    )
}

fn slit_identity() -> Outcome {
    let f = lattes::<f64>();
    let opts = LiftOptions::default();
    let arc = CurvePolyline::sample(400, false, |t| Point::real(1.05 * 40f64.powf(t)));
    let slits = LattesData::<f64>::new(8).arcs;
    let mut worst = 0.0f64;
    let mut per_slit = [0usize; 2];
    for s in f.preimages(&arc.points[0]) {
        let Ok(l) = lift_path(&f, &arc, &s, &opts) else {
            return outcome(false, "lift failed");
        };
        let d: Vec<f64> = slits
            .iter()
            .map(|sl| {
                l.points
                    .iter()
                    .map(|p| sl.arc_distance_to(p))
                    .fold(0.0, f64::max)
            })
            .collect();
        let k = (d[1] < d[0]) as usize;
        per_slit[k] += 1;
        worst = worst.max(d[k]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let (mut circles, mut bad) = (0, 0);
    while circles < 50 {
        use rand_chacha::rand_core::RngCore;
        let u = |r: &mut ChaCha8Rng| r.next_u64() as f64 / u64::MAX as f64;
        let c = Complex::new(4.0 * u(&mut rng) - 2.0, 4.0 * u(&mut rng) - 2.0);
        let r = 0.1 + 2.4 * u(&mut rng);
        if let Ok(comps) = lift_curve_components(&f, &CurvePolyline::ellipse(256, c, r, r), &opts) {
            circles += 1;
            bad += (comps.iter().map(|c| c.degree).sum::<usize>() != 4) as usize;
        }
    }
    outcome(
        worst < 1e-6 && per_slit == [2, 2] && bad == 0,
        format!("lifts per slit {per_slit:?}, max distance {worst:.1e}; {circles} circles, {bad} with degree sum != 4"),
    )
}

fn exact_system() -> Outcome {
    let f = lattes::<f64>();
    let data = LattesData::<f64>::new(1024);
    let r = match verify_exact_system(&f, &data.exact_input(), &LiftOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let degrees: Vec<u32> = r.spec.subannuli.iter().map(|s| s.degree).collect();
    let kappa_ok =
        r.kappa.len() == 11 && r.kappa.iter().enumerate().all(|(n, k)| k == &[1u128 << n]);
    let passed = r.spec.components.len() == 1
        && degrees == [2, 2]
        && r.validation.is_exact
        && r.validation.is_annular_system
        && r.flags_consistent
        && kappa_ok
        && r.cantor.verdict;
    outcome(
        passed,
        format!(
            "{} component, degrees {degrees:?}, exact {}, kappa_n = 2^n to n = 10: {kappa_ok}, cantor {}",
            r.spec.components.len(),
            r.validation.is_exact,
            r.cantor.verdict
        ),
    )
}

fn wandering() -> Outcome {
    let f = lattes::<f64>();
    let opts = WanderingOptions {
        iterations: 20,
        nodes: 2048,
        ..Default::default()
    };
    let data = LattesData::<f64>::new(opts.nodes);
    let input = data.exact_input();
    let run = verify_exact_system(&f, &input, &opts.lift)
        .and_then(|r| wandering_curve(&f, &input, &r, &Code::periodic(vec![0, 1]), None, &opts));
    let run = match run {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let last = run.curves.last().unwrap();
    let passed = run.distances.len() == 20
        && run.telescopes(5, 5)
        && last.closed
        && last.len() <= 2048
        && run.self_intersections == 0
        && run.functoriality < 1e-6;
    outcome(
        passed,
        format!(
            "d_0 = {:.2e}, d_19 = {:.2e}, {} nodes, {} self-intersections, functoriality {:.1e}",
            run.distances[0],
            run.distances.last().unwrap(),
            last.len(),
            run.self_intersections,
            run.functoriality
        ),
    )
}

fn semiconjugacy() -> Outcome {
    let mut notes = Vec::new();
    let mut passed = true;
    for (name, spec) in [
        ("cubic-annulus-model", cubic_annulus()),
        ("lattes", lattes_annular()),
    ] {
        let sys = ExactIntervalSystem::from_annular_spec(&spec).unwrap();
        let pi: Vec<usize> = (0..spec.subannuli.len()).collect();
        let r = semiconjugacy_check(&sys, &spec, 6, &pi);
        let all: usize = (1..=6).map(|n| valid_codes(&spec, n)).sum();
        passed &= r.holds && r.codes_checked == all;
        notes.push(format!("{name} {}/{all} codes", r.codes_checked));
    }
    outcome(passed, notes.join(", "))
}

fn renorm() -> Outcome {
    let b = RenormBundle::lattes();
    let r = match renorm_report(&b) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let c = r.best();
    let f = lattes::<f64>();
    let samples: Vec<Vec<Point<f64>>> = vec![
        (1..10).map(|k| Point::real(-k as f64 / 10.0)).collect(),
        (1..10).map(|k| Point::real(1.0 + k as f64)).collect(),
    ];
    let numeric = tau_from_samples(&f, &samples, &LattesData::<f64>::new(8).arcs, 1e-9);
    let passed = c.period == 1
        && c.candidate_degree == 2
        && c.iterate_degree == 4
        && c.verdict
        && r.tau_matches_spec
        && numeric.as_ref().is_ok_and(|t| *t == b.tau);
    outcome(
        passed,
        format!(
            "p = {}, deg g = {}, deg f^p = {}, verdict {}, slit images {numeric:?}",
            c.period, c.candidate_degree, c.iterate_degree, c.verdict
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let status = Command::new(env!("CARGO_BIN_EXE_wandering"))
            .args(["verify", "--seed", "7", "--out"])
            .arg(&out)
            .output()
            .expect("binary runs");
        (
            status.status.success(),
            std::fs::read(out.join("verify.json")).unwrap_or_default(),
        )
    };
    let (ok_a, a) = run("a");
    let (ok_b, b) = run("b");
    outcome(
        ok_a && ok_b && !a.is_empty() && a == b,
        format!("{} bytes, identical {}", a.len(), a == b),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        (
            "lemma equivalence",
            Duration::from_secs(10),
            lemma_equivalence,
        ),
        (
            "kappa recurrence vs tree oracle",
            Duration::from_secs(30),
            kappa_oracle,
        ),
        (
            "interval model golden",
            Duration::from_secs(1),
            interval_golden,
        ),
        (
            "degree growth bound",
            Duration::from_secs(10),
            degree_growth_bound,
        ),
        (
            "lattes post-critical set",
            Duration::from_secs(1),
            lattes_pcf,
        ),
        (
            "lattes slit identity",
            Duration::from_secs(10),
            slit_identity,
        ),
        (
            "exact annular system",
            Duration::from_secs(30),
            exact_system,
        ),
        (
            "wandering jordan curve",
            Duration::from_secs(300),
            wandering,
        ),
        ("semiconjugacy", Duration::from_secs(1), semiconjugacy),
        ("renormalization report", Duration::from_secs(1), renorm),
        ("verify determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let took = t.elapsed();
        let ok = o.passed && took < *limit;
        failed += !ok as usize;
        println!(
            "criterion {:>2} {name}: {} ({:.2} s, limit {} s) {}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    println!(
        "acceptance: {} of {} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
