use proptest::prelude::*;
use wandering_core::renorm_search::{
    complement_pieces, renorm_report, tau_map, RenormBundle, RenormError,
};

/// (preperiod, period) of `i` by recording the first visit of every index.
fn orbit_shape(tau: &[usize], i: usize) -> (usize, usize) {
    let mut first = vec![None; tau.len()];
    let mut x = i;
    let mut k = 0;
    loop {
        if let Some(j) = first[x] {
            return (j, k - j);
        }
        first[x] = Some(k);
        x = tau[x];
        k += 1;
    }
}

fn self_map() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=9).prop_flat_map(|n| prop::collection::vec(0..n, n))
}

#[test]
fn lattes_bundle_round_trips() {
    let b = RenormBundle::lattes();
    let back: RenormBundle = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
    assert_eq!(back, b);
    let pieces = complement_pieces(&b).unwrap();
    assert_eq!(pieces.iter().map(|p| p.marked).sum::<usize>(), 4);
}

#[test]
fn bad_bundles_rejected() {
    let mut b = RenormBundle::lattes();
    b.pieces[0].marked = 3;
    assert_eq!(
        complement_pieces(&b),
        Err(RenormError::MarkedCount { sum: 5, total: 4 })
    );

    let mut b = RenormBundle::lattes();
    b.stable_multicurve = false;
    assert_eq!(complement_pieces(&b), Err(RenormError::NotStable));

    let mut b = RenormBundle::lattes();
    let t = b.pieces[1].touches[0];
    b.pieces[0].touches.push(t);
    assert!(matches!(
        complement_pieces(&b),
        Err(RenormError::BoundaryCover { count: 2, .. })
    ));

    let mut b = RenormBundle::lattes();
    b.tau = vec![1, 2];
    assert!(matches!(
        renorm_report(&b),
        Err(RenormError::NotAFunction { .. })
    ));
}

#[test]
fn mismatched_tau_is_flagged() {
    let mut b = RenormBundle::lattes();
    b.tau = vec![0, 1];
    let r = renorm_report(&b).unwrap();
    assert!(!r.tau_matches_spec);
}

proptest! {
    #[test]
    fn tau_shapes_match_iteration(tau in self_map()) {
        let n = tau.len();
        let m = tau_map(&tau, n).unwrap();
        for i in 0..n {
            let (pre, per) = orbit_shape(&tau, i);
            prop_assert_eq!((m.preperiod[i], m.period[i]), (pre, per));
            prop_assert!(pre + per <= n);
        }
        let on_cycles: usize = m.cycles.iter().map(Vec::len).sum();
        prop_assert_eq!(on_cycles, (0..n).filter(|&i| m.is_periodic(i)).count());
        for c in &m.cycles {
            prop_assert_eq!(c[0], *c.iter().min().unwrap());
        }
    }

    #[test]
    fn verdict_follows_degrees(d0 in 1u32..=6, d1 in 1u32..=6, deg in 2u32..=6) {
        let mut b = RenormBundle::lattes();
        b.piece_degrees = Some(vec![d0, d1]);
        b.map_degree = deg;
        let r = renorm_report(&b).unwrap();
        for c in &r.cycles {
            let g: u64 = c.cycle.iter().map(|&i| [d0, d1][i] as u64).product();
            let fp = (deg as u64).pow(c.period as u32);
            prop_assert_eq!(c.candidate_degree, g);
            prop_assert_eq!(c.iterate_degree, fp);
            prop_assert_eq!(c.verdict, g >= 2 && g < fp);
        }
        prop_assert_eq!(r.best().verdict, r.cycles.iter().any(|c| c.verdict));
    }
}
