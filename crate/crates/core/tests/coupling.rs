use std::f64::consts::PI;

use deadzone::angle::{circular_distance, wrap, TAU};
use deadzone::coupling::{make_bump_profile, CouplingError, KuramotoSakaguchi};
use deadzone::{BumpProfile, CircleArc, CouplingFunction, CouplingSpec};
use proptest::prelude::*;

fn arc(lo: f64, hi: f64) -> CircleArc {
    CircleArc::from_endpoints(lo, hi).unwrap()
}

fn central_difference(g: &CouplingFunction, psi: f64, h: f64) -> f64 {
    (g.eval(psi + h) - g.eval(psi - h)) / (2.0 * h)
}

#[test]
fn symmetric_arc_around_pi_contains_pi() {
    let g = CouplingFunction::with_dead_zones(vec![arc(5.0 * PI / 6.0, 7.0 * PI / 6.0)]).unwrap();
    assert!(g.in_dead_zone(PI));
    assert!(g.is_dead_zone_symmetric());
    assert!(!g.in_dead_zone(0.0));
    assert_eq!(g.eval(PI), 0.0);
    assert_eq!(g.deriv(PI), 0.0);
}

#[test]
fn boundary_points_are_dead() {
    let lo = 5.0 * PI / 6.0;
    let g = CouplingFunction::with_dead_zones(vec![arc(lo, 7.0 * PI / 6.0)]).unwrap();
    assert!(g.in_dead_zone(lo));
    assert!(g.in_dead_zone(7.0 * PI / 6.0));
    assert!(!g.in_dead_zone(lo - 1e-9));
}

#[test]
fn asymmetric_zone_is_not_symmetric() {
    let g = CouplingFunction::with_dead_zones(vec![arc(PI / 3.0, 1.5 * PI)]).unwrap();
    assert!(!g.is_dead_zone_symmetric());
}

#[test]
fn mirror_pair_is_symmetric() {
    let g = CouplingFunction::with_dead_zones(vec![arc(0.5, 1.0), arc(TAU - 1.0, TAU - 0.5)]).unwrap();
    assert!(g.is_dead_zone_symmetric());
    assert_eq!(g.dead_zone_count(), 2);
    assert_eq!(g.live_zone_count(), 2);
}

#[test]
fn ks_approximate_dead_zone() {
    let g = CouplingFunction::ks(1.0, 0.5, 5e-3, 1.3).unwrap();
    assert!(g.in_dead_zone(1.4));
    assert!(!g.in_dead_zone(1.6));
    // b = 0 means no dead zone at all
    let free = CouplingFunction::ks(1.0, 0.0, 5e-3, 1.3).unwrap();
    assert!(!free.in_dead_zone(1.0));
    assert_eq!(free.dead_zone_count(), 0);
}

#[test]
fn ks_rejects_bad_parameters() {
    assert!(KuramotoSakaguchi::new(0.0, PI, 5e-3, 1.3).is_err());
    assert!(KuramotoSakaguchi::new(0.0, 0.5, 0.0, 1.3).is_err());
    assert!(KuramotoSakaguchi::new(f64::NAN, 0.5, 5e-3, 1.3).is_err());
}

#[test]
fn ks_derivative_matches_finite_difference() {
    let g = CouplingFunction::ks(1.0, 0.5, 5e-3, 1.3).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let psi = TAU * (i as f64 + 0.37) / 100.0;
        let exact = g.deriv(psi);
        let fd = central_difference(&g, psi, 1e-7);
        worst = worst.max((exact - fd).abs() / exact.abs().max(1.0));
    }
    assert!(worst < 1e-5, "relative error {worst}");
}

#[test]
fn ks_is_nearly_null_inside_its_dead_zone() {
    let cases = [
        (PI, PI / 6.0),
        (11.0 * PI / 12.0, 7.0 * PI / 12.0),
        (7.0 * PI / 24.0, 5.0 * PI / 8.0),
        (1.0, 0.5),
    ];
    for (a, b) in cases {
        let g = KuramotoSakaguchi::with_defaults(a, b).unwrap();
        let inner = b - 0.05;
        let worst = (0..=1000)
            .map(|i| a - inner + 2.0 * inner * i as f64 / 1000.0)
            .map(|psi| g.eval(psi).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "a={a} b={b}: {worst}");
    }
}

#[test]
fn profile_center_value_and_slope() {
    let support = CircleArc::new(1.0, 0.4).unwrap();
    let p = make_bump_profile(1.2, support, 0.0, 1.0).unwrap();
    assert_eq!(p.eval(1.2), 0.0);
    assert_eq!(p.deriv(1.2), 1.0);
    assert_eq!(p.eval(1.0), 0.0);
    assert_eq!(p.eval(1.4), 0.0);

    let q = make_bump_profile(1.2, support, 0.3, 0.0).unwrap();
    assert_eq!(q.eval(1.2), 0.3);
}

#[test]
fn profile_tail_is_tiny_near_boundary() {
    let support = CircleArc::new(2.0, 0.1).unwrap();
    let p = make_bump_profile(2.05, support, 1.0, 5.0).unwrap();
    assert!(p.eval(2.0 + 1e-9).abs() < 1e-6);
    assert!(p.eval(2.1 - 1e-9).abs() < 1e-6);
}

#[test]
fn center_outside_support_is_rejected() {
    let support = CircleArc::new(1.0, 0.4).unwrap();
    assert!(matches!(
        make_bump_profile(2.0, support, 0.0, 1.0),
        Err(CouplingError::CenterOutsideSupport { .. })
    ));
}

#[test]
fn overlapping_profiles_are_rejected() {
    let a = BumpProfile::centered(1.0, 0.5, 0.0, 1.0).unwrap();
    let b = BumpProfile::centered(1.2, 0.5, 0.0, 1.0).unwrap();
    assert!(CouplingFunction::piecewise(vec![a, b]).is_err());
}

#[test]
fn all_zero_profiles_are_rejected() {
    let a = BumpProfile::centered(1.0, 0.5, 0.0, 0.0).unwrap();
    assert!(matches!(CouplingFunction::piecewise(vec![a]), Err(CouplingError::Constant)));
}

#[test]
fn spec_file_round_trip() {
    let ks = CouplingFunction::ks(1.0, 0.5, 5e-3, 1.3).unwrap();
    let text = serde_json::to_string(&ks).unwrap();
    assert!(text.contains("\"kind\":\"ks\""));
    let back: CouplingFunction = serde_json::from_str(&text).unwrap();
    assert_eq!(back, ks);

    let pw = CouplingFunction::with_dead_zones(vec![arc(0.5, 1.0), arc(3.0, 4.0)]).unwrap();
    let text = serde_json::to_string(&pw).unwrap();
    assert!(text.contains("\"support_start\""));
    let back: CouplingFunction = serde_json::from_str(&text).unwrap();
    for i in 0..200 {
        let psi = TAU * i as f64 / 200.0;
        assert_eq!(back.eval(psi), pw.eval(psi));
    }
}

#[test]
fn ks_spec_defaults() {
    let spec: CouplingSpec = serde_json::from_str(r#"{"kind":"ks","a":1.0,"b":0.5}"#).unwrap();
    let g = CouplingFunction::try_from(&spec).unwrap();
    let CouplingFunction::KuramotoSakaguchi(k) = g else { panic!("wrong kind") };
    assert_eq!(k.eps(), 5e-3);
    assert_eq!(k.alpha(), 1.3);
}

#[test]
fn invalid_spec_is_an_error() {
    let bad = r#"{"kind":"piecewise","profiles":[{"center":3.0,"support_start":0.0,"support_width":1.0,"value":0.0,"slope":1.0}]}"#;
    assert!(serde_json::from_str::<CouplingFunction>(bad).is_err());
}

/// Up to four disjoint dead-zone arcs, each at least 0.05 wide and separated
/// by live gaps of at least 0.05.
fn dead_zone_arcs() -> impl Strategy<Value = Vec<CircleArc>> {
    (1usize..=4, any::<u64>()).prop_map(|(count, seed)| {
        let mut cuts: Vec<f64> = (0..2 * count)
            .map(|i| {
                let x = (seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(7 * i as u32 + 1) >> 11) as f64;
                x / (1u64 << 53) as f64
            })
            .collect();
        cuts.sort_by(f64::total_cmp);
        // spread the cuts so neighbours are at least 0.05 apart
        let slack = TAU - 0.05 * (2 * count) as f64;
        let offset = cuts[0];
        let points: Vec<f64> = cuts
            .iter()
            .enumerate()
            .map(|(i, c)| offset + (c - cuts[0]) * slack + 0.05 * i as f64)
            .collect();
        points.chunks(2).map(|w| CircleArc::new(w[0], w[1] - w[0]).unwrap()).collect()
    })
}

fn ks_function() -> impl Strategy<Value = CouplingFunction> {
    (0.0..TAU, 0.0..3.0, 1e-3..0.1, -PI..PI)
        .prop_map(|(a, b, eps, alpha)| CouplingFunction::ks(a, b, eps, alpha).unwrap())
}

fn any_function() -> impl Strategy<Value = CouplingFunction> {
    prop_oneof![
        dead_zone_arcs().prop_map(|arcs| CouplingFunction::with_dead_zones(arcs).unwrap()),
        ks_function(),
    ]
}

proptest! {
    #[test]
    fn periodic(g in any_function(), psi in -10.0..10.0f64) {
        let shifted = g.eval(psi + TAU);
        let base = g.eval(psi);
        // the shift itself rounds, so compare at the scale of one ulp times the slope bound
        prop_assert!((shifted - base).abs() <= 1e-9 * (1.0 + g.deriv(psi).abs()));
        prop_assert_eq!(g.in_dead_zone(psi), g.in_dead_zone(psi + TAU));
    }

    #[test]
    fn null_in_dead_zone_interiors(arcs in dead_zone_arcs(), u in 0.0..1.0f64) {
        let g = CouplingFunction::with_dead_zones(arcs.clone()).unwrap();
        for a in &arcs {
            let psi = a.start() + a.width() * (0.001 + 0.998 * u);
            prop_assert!(g.in_dead_zone(psi));
            prop_assert_eq!(g.eval(psi), 0.0);
            prop_assert_eq!(g.deriv(psi), 0.0);
        }
    }

    #[test]
    fn live_zones_are_live_and_vary(arcs in dead_zone_arcs()) {
        let g = CouplingFunction::with_dead_zones(arcs).unwrap();
        for lz in g.dead_zones().live_zones() {
            // every tenth of the live zone shows variation
            for s in 0..10 {
                let lo = lz.start() + lz.width() * s as f64 / 10.0;
                let vals: Vec<f64> = (1..10).map(|i| g.eval(lo + lz.width() * i as f64 / 100.0)).collect();
                let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
                prop_assert!(spread > 0.0);
            }
            prop_assert!(!g.in_dead_zone(lz.midpoint()));
        }
    }

    #[test]
    fn piecewise_derivative_matches_finite_difference(arcs in dead_zone_arcs(), u in 0.0..1.0f64) {
        let g = CouplingFunction::with_dead_zones(arcs).unwrap();
        let psi = TAU * u;
        let fd = central_difference(&g, psi, 1e-6);
        let exact = g.deriv(psi);
        // the window's second derivative scales like 1/width², so allow for it
        let widths = g.dead_zones().live_zones().iter().map(|l| l.width()).fold(f64::MAX, f64::min);
        let tol = 1e-5 * (1.0 + 1.0 / (widths * widths));
        prop_assert!((fd - exact).abs() < tol, "fd {} exact {}", fd, exact);
    }

    #[test]
    fn hinted_eval_agrees(g in any_function(), start in 0usize..8, psis in proptest::collection::vec(-TAU..TAU, 1..40)) {
        let mut hint = start;
        for psi in psis {
            let (v, live) = g.eval_hinted(psi, &mut hint);
            prop_assert!((v - g.eval(psi)).abs() < 1e-12);
            prop_assert_eq!(live, !g.in_dead_zone(psi));
        }
    }

    #[test]
    fn spec_round_trip(g in any_function()) {
        let spec = CouplingSpec::from(&g);
        let back = CouplingFunction::try_from(&spec).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        let reparsed: CouplingSpec = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&reparsed, &spec);
        for i in 0..50 {
            let psi = TAU * i as f64 / 50.0 + 0.013;
            prop_assert!((back.eval(psi) - g.eval(psi)).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_preserves_width(start in 0.0..TAU, width in 0.01..6.0f64) {
        let a = CircleArc::new(start, width).unwrap();
        let r = a.reflect();
        prop_assert!((r.width() - width).abs() < 1e-15);
        prop_assert!(r.contains(wrap(-a.midpoint())));
        prop_assert!(circular_distance(r.midpoint(), -a.midpoint()) < 1e-12);
    }
}
