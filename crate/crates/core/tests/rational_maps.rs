use num_complex::Complex;
use proptest::prelude::*;
use wandering_core::rational_dynamics::builtin::{lattes, LattesData};
use wandering_core::rational_dynamics::{
    lift_curve_components, lift_path, post_critical, winding_number, Chart, CurvePolyline,
    LiftOptions, Point, Poly, RationalMap,
};

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

/// Which side of `curve` the point lies on, in a chart far from both.
fn inside(curve: &CurvePolyline<f64>, chart: &Chart<f64>, p: &Point<f64>) -> bool {
    let z = curve.in_chart(chart);
    winding_number(&z, chart.to_plane(p).unwrap()) != 0
}

fn random_map() -> impl Strategy<Value = RationalMap<f64>> {
    (
        2usize..=4,
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 10),
    )
        .prop_filter_map("coprime", |(d, cs)| {
            let num = Poly::new(cs[..=d].iter().map(|&(a, b)| c(a, b)).collect());
            let den = Poly::new(cs[5..5 + d].iter().map(|&(a, b)| c(a, b)).collect());
            RationalMap::new(num, den).ok().filter(|f| f.degree() == d)
        })
}

#[test]
fn lattes_post_critical_set() {
    let f = lattes::<f64>();
    let pc = post_critical(&f, 16, 1e-9).unwrap();
    let want = [
        Point::real(-1.0),
        Point::real(0.0),
        Point::real(1.0),
        Point::Infinity,
    ];
    assert_eq!(pc.marked.len(), 4);
    for w in &want {
        assert!(pc.marked.points.iter().any(|p| p.chordal(w) < 1e-9));
    }
    assert!(pc.orbits.iter().all(|o| o.closing_error < 1e-9));
    // every critical value is a marked point
    for v in f.critical_values() {
        assert!(want.iter().any(|w| w.chordal(v) < 1e-9));
    }
}

#[test]
fn lattes_slits_pull_back_to_slits() {
    let f = lattes::<f64>();
    let opts = LiftOptions::default();
    let arc = CurvePolyline::sample(400, false, |t| Point::real(1.05 * (40.0f64).powf(t)));
    let seeds = f.preimages(&arc.points[0]);
    assert_eq!(seeds.len(), 4);
    let slits = LattesData::<f64>::new(8).arcs;
    let mut on = [0usize; 2];
    for s in &seeds {
        let l = lift_path(&f, &arc, s, &opts).unwrap();
        // slits lie on the real great circle, so measure along great-circle arcs
        let d: Vec<f64> = slits
            .iter()
            .map(|sl| {
                l.points
                    .iter()
                    .map(|p| sl.arc_distance_to(p))
                    .fold(0.0, f64::max)
            })
            .collect();
        let k = if d[0] < d[1] { 0 } else { 1 };
        assert!(d[k] < 1e-6, "{d:?}");
        on[k] += 1;
    }
    assert_eq!(on, [2, 2]);
}

#[test]
fn core_lifts_have_opposite_sides() {
    // the two sides of every preimage component map to the two sides of the core
    let f = lattes::<f64>();
    let d = LattesData::<f64>::new(512);
    let comps = lift_curve_components(&f, &d.core, &LiftOptions::default()).unwrap();
    assert_eq!(comps.iter().map(|c| c.degree).sum::<usize>(), 4);
    let chart_core = CurvePolyline::far_chart(&[&d.core]);
    for comp in &comps {
        let chart = CurvePolyline::far_chart(&[&comp.curve]);
        let z = comp.curve.in_chart(&chart);
        let n = z.len();
        let mut seen = None;
        for i in (0..n).step_by(64) {
            let t = z[(i + 1) % n] - z[(i + n - 1) % n];
            let nrm = Complex::new(-t.im, t.re) * 0.25;
            let plus = chart.from_plane(z[i] + nrm);
            let minus = chart.from_plane(z[i] - nrm);
            assert_ne!(
                inside(&comp.curve, &chart, &plus),
                inside(&comp.curve, &chart, &minus)
            );
            let sides = (
                inside(&d.core, &chart_core, &f.eval(&plus)),
                inside(&d.core, &chart_core, &f.eval(&minus)),
            );
            assert_ne!(sides.0, sides.1);
            assert_eq!(*seen.get_or_insert(sides), sides);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn critical_points_count_and_vanish(f in random_map()) {
        let total: usize = f.critical_points().iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(total, 2 * f.degree() - 2);
        for cp in f.critical_points() {
            if let Point::Finite(z) = cp.point {
                let h = 1e-5;
                let a = f.eval(&Point::Finite(z + h));
                let b = f.eval(&Point::Finite(z - h));
                let fz = f.eval(&cp.point);
                // f is flat to first order: the symmetric difference is O(h³)
                prop_assume!(fz.chordal(&Point::Infinity) > 1e-3 && cp.spread < 1e-8);
                prop_assert!(a.chordal(&b) < 1e-6, "{} vs {}", a.chordal(&b), h);
            }
        }
    }

    #[test]
    fn preimages_are_preimages(f in random_map(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let w = Point::new(re, im);
        let ps = f.preimages(&w);
        prop_assume!(f.critical_values().iter().all(|v| v.chordal(&w) > 1e-3));
        prop_assert_eq!(ps.len(), f.degree());
        for p in &ps {
            prop_assert!(f.eval(p).chordal(&w) < 1e-9);
        }
    }

    #[test]
    fn circle_lifts_conserve_degree(cx in -2.0f64..2.0, cy in -2.0f64..2.0, r in 0.1f64..2.5) {
        let f = lattes::<f64>();
        let circle = CurvePolyline::ellipse(256, c(cx, cy), r, r);
        let lifted = lift_curve_components(&f, &circle, &LiftOptions::default());
        prop_assume!(lifted.is_ok());
        let comps = lifted.unwrap();
        prop_assert_eq!(comps.iter().map(|c| c.degree).sum::<usize>(), 4);
        for comp in &comps {
            prop_assert_eq!(comp.curve.len(), 256 * comp.degree);
            for (k, p) in comp.curve.points.iter().enumerate() {
                prop_assert!(f.eval(p).chordal(&circle.points[k % 256]) < 1e-8);
            }
        }
    }
}
