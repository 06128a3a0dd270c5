use cartan_hartogs::certify::{allowed_factor, certify_balanced, ke_check, solve_a2_constant};
use cartan_hartogs::geometry::HartogsGeometry;
use cartan_hartogs::hua::HartogsSpec;
use cartan_hartogs::poly::{factorial, int, rat, raising_factorial, Polynomial, Rational};
use cartan_hartogs::{enumerate_catalog, parse_domain, DomainInvariants};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-20i64..=20, 0..6).prop_map(|c| Polynomial::from_i64(&c))
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn positive_rat() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn catalog_factor(d_max: u32) -> impl Strategy<Value = DomainInvariants> {
    let catalog = enumerate_catalog(d_max);
    (0..catalog.len()).prop_map(move |i| catalog[i])
}

fn small_spec() -> impl Strategy<Value = HartogsSpec> {
    prop::collection::vec((catalog_factor(6), positive_rat()), 1..4)
        .prop_flat_map(|items| (Just(items), 1u32..=3))
        .prop_map(|(items, d0)| {
            let (f, m): (Vec<_>, Vec<_>) = items.into_iter().unzip();
            HartogsSpec::new(f, m, d0).unwrap()
        })
}

/// Specs whose factors all admit point-level geometry.
fn geometric_spec() -> impl Strategy<Value = HartogsSpec> {
    let factors = ["B(1)", "B(2)", "III(2)", "IV(5)", "I(2,2)", "II(5)"]
        .map(|s| parse_domain(s).unwrap())
        .to_vec();
    prop::collection::vec((prop::sample::select(factors), positive_rat()), 1..3)
        .prop_flat_map(|items| (Just(items), 1u32..=2))
        .prop_map(|(items, d0)| {
            let (f, m): (Vec<_>, Vec<_>) = items.into_iter().unzip();
            HartogsSpec::new(f, m, d0).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_is_multiplicative(p in small_poly(), q in small_poly(), x in small_rat()) {
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
    }

    #[test]
    fn differences_compose(p in small_poly(), j in 0usize..4, k in 0usize..4) {
        prop_assert_eq!(
            p.backward_difference(j).backward_difference(k),
            p.backward_difference(j + k)
        );
    }

    #[test]
    fn difference_matches_shift(p in small_poly(), x in small_rat()) {
        let lhs = p.backward_difference(1).eval(&x);
        prop_assert_eq!(lhs, p.eval(&x) - p.eval(&(&x - int(1))));
    }

    #[test]
    fn top_difference_of_power(d in 0usize..15) {
        let dd = Polynomial::monomial(int(1), d).backward_difference(d);
        prop_assert_eq!(dd, Polynomial::constant(Rational::from_integer(factorial(d))));
    }

    #[test]
    fn raising_factorial_splits(s in small_rat(), m in 0usize..6, k in 0usize..6) {
        let whole = raising_factorial(&s, m + k);
        let split = raising_factorial(&s, m) * raising_factorial(&(&s + int(m as i64)), k);
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn compose_affine_evaluates(p in small_poly(), a in small_rat(), b in small_rat(), x in small_rat()) {
        prop_assert_eq!(p.compose_affine(&a, &b).eval(&x), p.eval(&(&a * &x + &b)));
    }

    #[test]
    fn division_identity(a in small_poly(), b in small_poly()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
        let g = Polynomial::gcd(&(&a * &c), &(&b * &c));
        prop_assert!((&a * &c).div_rem(&g).1.is_zero());
        prop_assert!((&b * &c).div_rem(&g).1.is_zero());
        prop_assert!(g.div_rem(&c.monic()).1.is_zero());
    }

    #[test]
    fn domain_display_round_trip(f in catalog_factor(40)) {
        prop_assert_eq!(parse_domain(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn certificate_ignores_factor_order(spec in small_spec(), shift in 0usize..3) {
        let k = spec.k();
        let order: Vec<usize> = (0..k).map(|i| (i + shift) % k).collect();
        let permuted = spec.permuted(&order).unwrap();
        let a = certify_balanced(&spec);
        let b = certify_balanced(&permuted);
        prop_assert_eq!(a.balanced, b.balanced);
        prop_assert_eq!(a.lhs, b.lhs);
        prop_assert_eq!(a.alpha_threshold, b.alpha_threshold);
        prop_assert_eq!(ke_check(&spec), ke_check(&permuted));
    }

    #[test]
    fn balanced_needs_allowed_factors(
        factors in prop::collection::vec(catalog_factor(6), 1..4),
        inv_mu in prop::collection::vec(1i64..=8, 3),
    ) {
        let mu = factors.iter().zip(&inv_mu).map(|(_, m)| rat(1, *m)).collect();
        let spec = HartogsSpec::new(factors.clone(), mu, 1).unwrap();
        if certify_balanced(&spec).balanced {
            prop_assert!(factors.iter().all(allowed_factor));
        }
    }

    #[test]
    fn a2_solutions_are_affine_consistent(f1 in catalog_factor(20), f2 in catalog_factor(20)) {
        let sols = solve_a2_constant(&f1, &f2).unwrap();
        prop_assert!(!sols.is_empty());
        for s in sols {
            prop_assert!((s.x1 + s.x2 - 1.0).abs() < 1e-12);
            prop_assert!(s.residuals.iter().all(|r| r.abs() < 1e-9));
        }
    }

    #[test]
    fn epsilon_depends_only_on_x(spec in geometric_spec(), s1 in 0u64..1000, s2 in 0u64..1000) {
        let g = HartogsGeometry::new(&spec).unwrap();
        let p1 = g.sample(s1, 1.0).unwrap();
        let mut p2 = g.sample(s2 + 1000, 1.0).unwrap();
        // rescale the second fiber so both points share X
        let x = g.x_value(&p1).unwrap();
        let target = ((1.0 - x) * g.base_norm(&p2).unwrap()).sqrt();
        let len = p2.fiber.norm();
        prop_assume!(len > 1e-6);
        p2.fiber *= Complex64::from(target / len);
        let alpha = cartan_hartogs::poly::to_f64(&spec.alpha_threshold()) + 1.75;
        let e1 = g.epsilon(alpha, &p1).unwrap();
        let e2 = g.epsilon(alpha, &p2).unwrap();
        prop_assert!(((e1 - e2) / e1).abs() < 1e-12, "{} vs {}", e1, e2);
    }

    #[test]
    fn kernel_identity_and_potential(spec in geometric_spec(), seed in 0u64..10_000) {
        let g = HartogsGeometry::new(&spec).unwrap();
        let pt = g.sample(seed, 1.0).unwrap();
        let alpha = cartan_hartogs::poly::to_f64(&spec.alpha_threshold()) + 0.5;
        let k = g.kernel(alpha, &pt).unwrap();
        let via_eps = k.epsilon * (alpha * k.phi).exp();
        prop_assert!(((k.kernel - via_eps) / via_eps).abs() < 1e-12);
        prop_assert!(k.epsilon > 0.0);
        prop_assert!(k.x > 0.0 && k.x <= 1.0);
        let n = g.base_norm(&pt).unwrap();
        prop_assert!(((-k.phi).exp() / (n * k.x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monge_ampere_is_rotation_invariant(spec in geometric_spec(), seed in 0u64..10_000, theta in 0.0f64..std::f64::consts::TAU) {
        let g = HartogsGeometry::new(&spec).unwrap();
        let pt = g.sample(seed, 1.0).unwrap();
        let phase = Complex64::from_polar(1.0, theta);
        let mut rotated = pt.clone();
        for b in &mut rotated.blocks {
            *b *= phase;
        }
        rotated.fiber = rotated.fiber.map(|w| w * phase.conj());
        let a = g.monge_ampere(&pt).unwrap();
        let b = g.monge_ampere(&rotated).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!(((a - b) / a).abs() < 1e-10);
    }
}
