mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use tsurf_core::curvature::{
    gauss_mean, hii, hii_residual, kii_brioschi, kii_specialized, ladder_identity_first, ladder_identity_second,
    ladder_record, sample,
};
use tsurf_core::{forms_at, make_surface, Domain, SurfaceDef};

fn surface(f: &str, g: &str, lo: f64, hi: f64) -> SurfaceDef {
    make_surface(f, g, &BTreeMap::new(), Domain::square(lo, hi).unwrap()).unwrap()
}

#[test]
fn hii_vertex_value_agrees_with_divergence_oracle() {
    let s = surface("u^2/2", "v^2/2", -2.0, 2.0);
    let closed = hii(&s, 0.0, 0.0).unwrap();
    let oracle = common::hii_by_divergence(&s, 0.0, 0.0, 1e-4);
    assert!((closed - 1.0).abs() < 1e-9, "{closed}");
    assert!((oracle - 1.0).abs() < 1e-5, "{oracle}");
}

#[test]
fn hii_closed_form_matches_oracle_where_k_positive() {
    for seed in 0..5 {
        let s = common::random_surface(seed);
        for (u, v) in common::nondegenerate_points(&s, 20, seed + 100) {
            let (k, _) = gauss_mean(&s, u, v).unwrap();
            if k <= 0.0 {
                continue;
            }
            let closed = hii(&s, u, v).unwrap();
            let oracle = common::hii_by_divergence(&s, u, v, 1e-4);
            assert!(
                (closed - oracle).abs() <= 1e-5 * closed.abs().max(1.0),
                "seed {seed} at ({u}, {v}): {closed} vs {oracle}"
            );
        }
    }
}

#[test]
fn hii_closed_form_matches_oracle_on_indefinite_points() {
    let s = surface("u^3 + u", "-(v^2) + sin(v)", -1.0, 1.0);
    for (u, v) in [(0.3, 0.4), (0.6, 0.8), (0.9, -0.2)] {
        assert!(sample(&s, u, v).unwrap().indefinite_ii);
        let closed = hii(&s, u, v).unwrap();
        let oracle = common::hii_by_divergence(&s, u, v, 1e-4);
        assert!(
            (closed - oracle).abs() <= 1e-5 * closed.abs().max(1.0),
            "{closed} vs {oracle}"
        );
    }
}

#[test]
fn residual_tracks_hii() {
    let s = common::random_surface(11);
    for (u, v) in common::nondegenerate_points(&s, 10, 3) {
        let b = forms_at(&s, u, v).unwrap();
        let r = hii_residual(&s, u, v).unwrap();
        let h = hii(&s, u, v).unwrap();
        assert!((r + 4.0 * h / b.delta.sqrt()).abs() < 1e-8 * r.abs().max(1.0));
    }
}

#[test]
fn kii_dual_path_on_random_surfaces() {
    for seed in 0..5 {
        let s = common::random_surface(seed);
        for (u, v) in common::nondegenerate_points(&s, 20, seed) {
            let a = kii_specialized(&s, u, v).unwrap();
            let b = kii_brioschi(&s, u, v).unwrap();
            assert!(
                (a - b).abs() <= 1e-6 * (1.0 + a.abs()),
                "seed {seed} at ({u}, {v}): {a} vs {b}"
            );
        }
    }
}

#[test]
fn kii_dual_path_on_cubic_sine() {
    let s = surface("u^3 + u", "sin(v)", -1.5, 1.5);
    for (u, v) in common::nondegenerate_points(&s, 20, 7) {
        let a = kii_specialized(&s, u, v).unwrap();
        let b = kii_brioschi(&s, u, v).unwrap();
        assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-12) + 1e-12, "{a} vs {b}");
    }
}

#[test]
fn ladder_identities_on_random_surfaces() {
    let surfaces = [
        surface("u^3", "sin(v)", 0.1, 1.5),
        surface("exp(u) + u^3", "v^4 + v^2", 0.2, 1.2),
        surface("cosh(u)", "log(2 + cos(v))", 0.2, 1.3),
    ];
    for s in &surfaces {
        let mut ratios = Vec::new();
        for (u, v) in common::nondegenerate_points(s, 20, 5) {
            let Ok(record) = ladder_record(s, u, v) else { continue };
            assert!(record.phi.is_finite() && record.b_small.is_finite());
            let (lhs, rhs) = ladder_identity_first(s, u, v).unwrap();
            assert!(
                (lhs - rhs).abs() / (1.0 + rhs.abs()) < 1e-4,
                "({u}, {v}): {lhs} vs {rhs}"
            );
            if let Ok((_, _, ratio)) = ladder_identity_second(s, u, v) {
                ratios.push(ratio);
            }
        }
        assert!(ratios.len() >= 10);
        let first = ratios[0];
        for r in &ratios {
            assert!((r - first).abs() <= 1e-3 * first.abs(), "{r} vs {first}");
        }
    }
}

#[test]
fn ladder_record_is_reproducible() {
    let s = common::random_surface(4);
    let (u, v) = common::nondegenerate_points(&s, 1, 9)[0];
    assert_eq!(ladder_record(&s, u, v).ok(), ladder_record(&s, u, v).ok());
}

proptest! {
    #[test]
    fn vertical_shift_changes_nothing(c1 in -50.0f64..50.0, c2 in -50.0f64..50.0, u in -1.2f64..1.2, v in -1.2f64..1.2) {
        let base = surface("u^3 + sin(u)", "cosh(v) - v^2/3", -1.5, 1.5);
        let shifted = surface(&format!("u^3 + sin(u) + {c1}"), &format!("cosh(v) - v^2/3 + {c2}"), -1.5, 1.5);
        let a = sample(&base, u, v).unwrap();
        let b = sample(&shifted, u, v).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sign_rule(seed in 0u64..40, u in -0.95f64..0.95, v in -0.95f64..0.95) {
        let s = common::random_surface(seed);
        let b = forms_at(&s, u, v).unwrap();
        let smp = sample(&s, u, v).unwrap();
        if !smp.degenerate_ii {
            let product = b.alpha.d1 * b.beta.d1;
            prop_assert_eq!(smp.indefinite_ii, smp.gaussian < 0.0);
            prop_assert_eq!(smp.indefinite_ii, product < 0.0);
        }
    }

    #[test]
    fn symbolic_derivative_matches_central_difference(seed in 0u64..200, x in -0.9f64..0.9) {
        let s = common::random_surface(seed);
        let params = s.params().clone();
        let f = |x: f64| s.f().eval(0, x, &params).unwrap();
        let fd = common::central_difference(f, x);
        let exact = s.f().eval(1, x, &params).unwrap();
        prop_assert!((exact - fd).abs() / (1.0 + exact.abs()) < 1e-6);
    }
}
