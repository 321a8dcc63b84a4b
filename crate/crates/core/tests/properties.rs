use num_complex::Complex64;
use proptest::prelude::*;

use smoothspace::config::Tolerances;
use smoothspace::fourier::{
    apply_operator, gn_check, halfplane_root_count, halfplane_root_count_brute, l1_norm, multiplier_tails, proper_part,
    solve_system, sobolev_norm, EmbeddingProblem, GridFn, TrigPoly,
};
use smoothspace::{build_diagram, parse_operator, DiffOperator, ExactComplex, MultiIndex};

fn gauss(re: (i64, i64), im: (i64, i64)) -> ExactComplex {
    let q = |(n, d): (i64, i64)| ExactComplex::from_int(n).checked_div(&ExactComplex::from_int(d)).unwrap();
    &q(re) + &(&q(im) * &ExactComplex::i())
}

fn coefficient() -> impl Strategy<Value = ExactComplex> {
    ((-20i64..=20, 1i64..=9), (-20i64..=20, 1i64..=9), 0u32..=2).prop_map(|(re, im, p)| {
        let g = gauss(re, im);
        if p == 0 {
            g
        } else {
            &g * &ExactComplex::pi().pow(p)
        }
    })
}

fn operator() -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec((0u32..=8, 0u32..=8, coefficient()), 1..=5)
        .prop_map(|terms| DiffOperator::from_terms(terms.into_iter().map(|(a, b, c)| (MultiIndex::new(a, b), c))))
        .prop_filter("nonzero", |op| !op.is_zero())
}

fn nonzero_freq() -> impl Strategy<Value = i64> {
    prop_oneof![-6i64..=-1, 1i64..=6]
}

fn proper_poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((nonzero_freq(), nonzero_freq(), (-9i64..=9, 1i64..=5), (-9i64..=9, 1i64..=5)), 1..=5)
        .prop_map(|t| TrigPoly::from_terms(t.into_iter().map(|(m, n, re, im)| ((m, n), gauss(re, im)))))
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn any_poly() -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((-4i64..=4, -4i64..=4, -9i64..=9, -9i64..=9), 1..=8)
        .prop_map(|t| TrigPoly::from_terms(t.into_iter().map(|(m, n, a, b)| ((m, n), gauss((a, 1), (b, 1))))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(op in operator()) {
        let text = op.to_string();
        prop_assert_eq!(parse_operator(&text).unwrap(), op, "{}", text);
    }

    #[test]
    fn solve_inverts_forward(k in 1u32..=4, l in 1u32..=4, phis in prop::collection::vec(proper_poly(), 1..=3)) {
        let p = EmbeddingProblem::forward(k, l, &phis).unwrap();
        prop_assert_eq!(p.annihilation_residual(), 0.0);
        prop_assert_eq!(solve_system(&p, &Tolerances::default()).unwrap(), phis);
    }

    #[test]
    fn proper_part_is_idempotent(f in any_poly()) {
        let g = proper_part(&f);
        prop_assert!(g.is_proper());
        prop_assert_eq!(proper_part(&g), g.clone());
        prop_assert!(f.sub(&g).terms().all(|(&(m, n), _)| m == 0 || n == 0));
    }

    #[test]
    fn operators_act_linearly(op in operator(), f in any_poly(), g in any_poly()) {
        prop_assert_eq!(apply_operator(&op, &f.add(&g)), apply_operator(&op, &f).add(&apply_operator(&op, &g)));
    }

    #[test]
    fn l1_sits_between_sup_coefficient_and_l2(f in any_poly()) {
        prop_assume!(!f.is_zero());
        let l1 = l1_norm(&f, 4).unwrap();
        let l2 = sobolev_norm(&f, 0.0, 0.0).unwrap();
        let sup = f.terms().map(|(_, c)| c.to_complex64().norm()).fold(0.0, f64::max);
        prop_assert!(sup <= l1 * (1.0 + 1e-9), "{} > {}", sup, l1);
        prop_assert!(l1 <= l2 * (1.0 + 1e-9), "{} > {}", l1, l2);
    }

    #[test]
    fn diagram_is_concave_and_covers_its_points(ops in prop::collection::vec(operator(), 1..=4)) {
        let d = build_diagram(&ops).unwrap();
        prop_assert!(d.is_concave());
        for p in &d.points {
            prop_assert!(d.in_region(p), "{:?}", p);
        }
    }

    #[test]
    fn root_count_formula_matches_brute(re in -5.0f64..5.0, im in 0.01f64..5.0, below in any::<bool>(), k in 1u32..=12) {
        let z = Complex64::new(re, if below { -im } else { im });
        prop_assert_eq!(halfplane_root_count(z, k).unwrap(), halfplane_root_count_brute(z, k).unwrap());
    }

    #[test]
    fn gn_inequality_holds(n in 4usize..=24, seed in prop::collection::vec(-1.0f64..1.0, 24 * 24)) {
        let g = GridFn::from_fn(n, |i, j| {
            if i == 0 || j == 0 || i == n - 1 || j == n - 1 { 0.0 } else { seed[i * 24 + j] }
        });
        let (lhs, rhs) = gn_check(&g).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multiplier_tail_is_monotone(a in 1u32..=3, b in 1u32..=3, alpha in 0u32..=2, beta in 0u32..=2) {
        prop_assume!(alpha * b + beta * a < a * b);
        let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
        let s = multiplier_tails((alpha, beta), (a, b), sign, &[4, 8, 16, 32], 128).unwrap();
        prop_assert!(s.windows(2).all(|w| w[1] <= w[0]), "{:?}", s);
    }
}
