use num::{BigInt, Zero};
use proptest::prelude::*;
use tsurf_core::curvature::kii_numerator;
use tsurf_core::polynomial::{
    dominant_coefficient, dominant_coefficient_law, int, num_poly, power_terms, rat, theorem1_scan, to_f64,
    weingarten_poly_residual,
};
use tsurf_core::{forms_at, Domain, Poly1, Rational, SurfaceDef};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly(max_degree: usize) -> impl Strategy<Value = Poly1> {
    prop::collection::vec(small_rational(), 0..=max_degree + 1).prop_map(|c| Poly1::from_coeffs(&c))
}

/// Polynomial of exact degree `degree`.
fn poly_of_degree(degree: u32) -> impl Strategy<Value = Poly1> {
    (
        prop::collection::vec(small_rational(), degree as usize),
        nonzero_rational(),
    )
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            Poly1::from_coeffs(&c)
        })
}

/// `(α, β)` with `6 ≥ deg α > deg β ≥ 2`.
fn degree_pair() -> impl Strategy<Value = (Poly1, Poly1)> {
    (3u32..=6)
        .prop_flat_map(|m| (Just(m), 2..m))
        .prop_flat_map(|(m, n)| (poly_of_degree(m), poly_of_degree(n)))
}

proptest! {
    #[test]
    fn ring_axioms(p in poly(4), q in poly(4), r in poly(3)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        // Leibniz rule
        prop_assert_eq!((&p * &q).derivative(), &(&p.derivative() * &q) + &(&p * &q.derivative()));
        prop_assert_eq!(p.antiderivative().derivative(), p.clone());
    }

    #[test]
    fn lifts_are_ring_maps(p in poly(3), q in poly(3)) {
        prop_assert_eq!((&p * &q).lift_u(), &p.lift_u() * &q.lift_u());
        prop_assert_eq!((&p + &q).lift_v(), &p.lift_v() + &q.lift_v());
        let x = rat(3, 2);
        prop_assert_eq!(p.lift_u().eval(&x, &int(7)), p.eval(&x));
    }

    #[test]
    fn stored_coefficients_are_nonzero(p in poly(5), q in poly(3)) {
        let n = num_poly(&p, &q);
        prop_assert!(n.terms().all(|(_, c)| !c.is_zero()));
        prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        if let Some(lead) = p.leading() {
            prop_assert!(!lead.is_zero());
        }
    }

    #[test]
    fn num_matches_jet_evaluation(
        alpha in poly(3),
        beta in poly(3),
        points in prop::collection::vec((small_rational(), small_rational()), 50),
    ) {
        let exact = num_poly(&alpha, &beta);
        let s = SurfaceDef::new(
            alpha.antiderivative().to_expr("u"),
            beta.antiderivative().to_expr("v"),
            Default::default(),
            Domain::square(-10.0, 10.0).unwrap(),
        ).unwrap();
        for (u, v) in &points {
            let want = to_f64(&exact.eval(u, v));
            let b = forms_at(&s, to_f64(u), to_f64(v)).unwrap();
            let got = kii_numerator(&b);
            prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{} vs {}", got, want);
        }
    }

    #[test]
    fn dominant_coefficient_law_holds((alpha, beta) in degree_pair()) {
        let (m, n) = (alpha.degree().unwrap(), beta.degree().unwrap());
        let (mono, coeff) = dominant_coefficient(&alpha, &beta).unwrap();
        prop_assert_eq!(mono, (4 * m - 2, n - 1));
        prop_assert_eq!(coeff, dominant_coefficient_law(m, n, alpha.leading().unwrap(), beta.leading().unwrap()));
    }

    #[test]
    fn constant_slope_kills_num(c in small_rational(), beta in poly(4)) {
        prop_assert!(num_poly(&Poly1::constant(c.clone()), &beta).is_zero());
        prop_assert!(num_poly(&beta, &Poly1::constant(c)).is_zero());
    }

    #[test]
    fn weingarten_residual_is_affine_in_lambda(alpha in poly(3), beta in poly(3), a in small_rational(), b in small_rational()) {
        let r = |l: &Rational| weingarten_poly_residual(&alpha, &beta, l);
        let zero = Rational::zero();
        prop_assert_eq!(&r(&a) + &r(&b), &r(&zero) + &r(&(&a + &b)));
    }

    #[test]
    fn shifted_paraboloids_are_exact(a in nonzero_rational(), c1 in small_rational(), c2 in small_rational()) {
        let alpha = Poly1::from_coeffs(&[c1, &int(2) * &a]);
        let beta = Poly1::from_coeffs(&[c2, &int(-2) * &a]);
        prop_assert!(weingarten_poly_residual(&alpha, &beta, &int(2)).is_zero());
    }

    #[test]
    fn one_third_family_cancels(a in nonzero_rational()) {
        let third = rat(1, 3);
        prop_assert!(power_terms(&third, &third, &a, &-a.clone()).unwrap().is_empty());
    }
}

#[test]
fn scan_is_independent_of_thread_count() {
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = serial.install(|| theorem1_scan(4, 3, 5, 99).unwrap());
    let many = theorem1_scan(4, 3, 5, 99).unwrap();
    assert_eq!(one, many);
}
