mod support;

use std::sync::Arc;

use framedeg::groebner::{buchberger, QuotientAlgebra};
use framedeg::quadform::{inertia_of_matrix, trace_form};
use framedeg::stiefel::{lambda, random_unimodular, HypersurfaceSpec, PipelineOptions, StiefelProblem};
use framedeg::{format_poly, parse_poly, Monomial, MonomialOrder, PolyMatrix, Polynomial, Rational, RationalMatrix, Ring};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use support::*;

fn ring() -> Arc<Ring> {
    ring3()
}

fn coeff() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn poly_in(ring: Arc<Ring>, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = ring.nvars();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), coeff()), 0..=max_terms)
        .prop_map(move |terms| {
            Polynomial::from_terms(&ring, terms.into_iter().map(|(e, c)| (Monomial::new(e), c)))
        })
}

fn poly() -> impl Strategy<Value = Polynomial> {
    poly_in(ring(), 3, 5)
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(coeff(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(a.ring()), a.clone());
        prop_assert_eq!(-&(-&a), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), x in point()) {
        let (ea, eb) = (a.evaluate(&x).unwrap(), b.evaluate(&x).unwrap());
        prop_assert_eq!((&a * &b).evaluate(&x).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate(&x).unwrap(), &ea + &eb);
    }

    #[test]
    fn leibniz_rule(a in poly(), b in poly(), v in 0usize..3) {
        let lhs = (&a * &b).partial_derivative(v).unwrap();
        let rhs = &(&a.partial_derivative(v).unwrap() * &b) + &(&a * &b.partial_derivative(v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_inverts_format(a in poly_in(ring(), 6, 8)) {
        let text = format_poly(&a);
        prop_assert_eq!(parse_poly(&text, a.ring()).unwrap(), a);
    }

    #[test]
    fn parser_never_panics(s in "[xyz0-9 +*/^()\\-]{0,40}") {
        let _ = parse_poly(&s, &ring());
    }

    #[test]
    fn determinant_is_alternating(entries in prop::collection::vec(poly_in(ring(), 1, 2), 16), i in 0usize..4, j in 0usize..4) {
        let r = ring();
        let rows: Vec<Vec<Polynomial>> = entries.chunks(4).map(<[_]>::to_vec).collect();
        let m = PolyMatrix::from_rows(&r, rows).unwrap();
        let d = m.determinant().unwrap();
        prop_assert_eq!(&m.bareiss_det().unwrap(), &d);
        let mut s = m.clone();
        s.swap_rows(i, j);
        let ds = s.determinant().unwrap();
        if i == j {
            prop_assert_eq!(ds, d);
        } else {
            prop_assert_eq!(ds, -&d);
        }
    }

    #[test]
    fn congruence_preserves_inertia(seed in any::<u64>(), dim in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_symmetric(&mut rng, dim);
        let u = random_unimodular(dim, &mut rng);
        let p = RationalMatrix::from_rows(
            u.iter().map(|r| r.iter().map(|&c| q(c, 1)).collect()).collect(),
        ).unwrap();
        let b = p.transpose().mul(&a).mul(&p);
        let ia = inertia_of_matrix(&a);
        prop_assert_eq!(inertia_of_matrix(&b), ia);
        prop_assert_eq!(descartes_inertia(&a), ia);
        prop_assert_eq!(ia.dim(), dim);
        // signature and rank have the same parity
        prop_assert_eq!((ia.signature() - ia.rank() as i64).rem_euclid(2), 0);
    }
}

/// Zero-dimensional ideals with known roots, plus a random extra generator.
fn algebra_strategy() -> impl Strategy<Value = (QuotientAlgebra, Vec<Polynomial>)> {
    (any::<u64>(), poly_in(Ring::new(["s", "t"]).unwrap(), 2, 3)).prop_map(|(seed, extra)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = extra.ring().clone();
        let (mut gens, _) = linear_product_ideal(&mut rng, &r);
        // adding an element of the ideal changes nothing
        gens.push(&extra * &gens[0]);
        let gb = buchberger(&gens, MonomialOrder::DegRevLex).unwrap();
        (QuotientAlgebra::new(gb).unwrap(), gens)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_sound((a, gens) in algebra_strategy(), f in poly_in(Ring::new(["s", "t"]).unwrap(), 4, 5), g in poly_in(Ring::new(["s", "t"]).unwrap(), 4, 5)) {
        let gb = a.gb();
        prop_assert!(gb.is_reduced());
        prop_assert!(gb.satisfies_buchberger_criterion());
        for h in &gens {
            prop_assert!(gb.normal_form(h).unwrap().is_zero());
        }
        let (quots, rem) = gb.divide(&f).unwrap();
        let mut rebuilt = rem.clone();
        for (qq, g) in quots.iter().zip(gb.generators()) {
            rebuilt = &rebuilt + &(qq * g);
        }
        prop_assert_eq!(&rebuilt, &f);
        let nf = gb.normal_form(&f).unwrap();
        prop_assert_eq!(&nf, &rem);
        prop_assert!(nf.terms().iter().all(|(m, _)| gb.is_standard(m)));
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        prop_assert_eq!(gb.normal_form(&(&f + &g)).unwrap(), &nf + &gb.normal_form(&g).unwrap());
        // compatible with products
        let lhs = gb.normal_form(&(&f * &g)).unwrap();
        let rhs = gb.normal_form(&(&nf * &gb.normal_form(&g).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_matrices_commute((a, _) in algebra_strategy()) {
        let (mx, my) = (a.var_matrix(0), a.var_matrix(1));
        prop_assert_eq!(mx.mul(my), my.mul(mx));
    }

    #[test]
    fn trace_is_linear((a, _) in algebra_strategy(), f in poly_in(Ring::new(["s", "t"]).unwrap(), 3, 4), g in poly_in(Ring::new(["s", "t"]).unwrap(), 3, 4), c in coeff()) {
        let lhs = a.trace_of(&(&f.scale(&c) + &g)).unwrap();
        let rhs = &c * a.trace_of(&f).unwrap() + a.trace_of(&g).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(a.multiplication_matrix(&f).unwrap().trace(), a.trace_of(&f).unwrap());
    }

    #[test]
    fn trace_form_is_symmetric_with_trace_entries((a, _) in algebra_strategy(), h in poly_in(Ring::new(["s", "t"]).unwrap(), 2, 3)) {
        let form = trace_form(&h, &a, "h").unwrap();
        let basis = a.basis_polynomials();
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate().skip(i) {
                let want = a.trace_of(&(&(&h * bi) * bj)).unwrap();
                prop_assert_eq!(form.matrix().get(i, j), &want);
            }
        }
    }

    #[test]
    fn order_does_not_change_the_ideal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = Ring::new(["s", "t"]).unwrap();
        let (gens, known) = linear_product_ideal(&mut rng, &r);
        let grevlex = buchberger(&gens, MonomialOrder::DegRevLex).unwrap();
        let lex = buchberger(&gens, MonomialOrder::Lex).unwrap();
        for g in lex.generators() {
            prop_assert!(grevlex.normal_form(g).unwrap().is_zero());
        }
        for g in grevlex.generators() {
            prop_assert!(lex.normal_form(g).unwrap().is_zero());
        }
        let (a, b) = (QuotientAlgebra::new(grevlex).unwrap(), QuotientAlgebra::new(lex).unwrap());
        prop_assert_eq!(a.dim(), b.dim());
        for h in ["1", "s*t + s^2 - 3", "t^3 - 2/3*s"] {
            let h = p(&r, h);
            prop_assert_eq!(a.trace_of(&h).unwrap(), b.trace_of(&h).unwrap());
        }
        prop_assert_eq!(framedeg::quadform::real_point_count(&a).unwrap(), known);
        prop_assert_eq!(framedeg::quadform::real_point_count(&b).unwrap(), known);
    }
}

fn passing_problem(seed: u64) -> Option<(StiefelProblem, framedeg::stiefel::LambdaReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = random_problem(&mut rng, 4, 2);
    lambda(&problem, &PipelineOptions::default()).ok().map(|r| (problem, r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn signature_sum_is_even(seed in any::<u64>()) {
        if let Some((_, r)) = passing_problem(seed) {
            prop_assert_eq!((r.signature_delta + r.signature_f_delta).rem_euclid(2), 0);
            prop_assert!(r.is_consistent());
        }
    }

    #[test]
    fn positive_scaling_of_f_keeps_lambda(seed in any::<u64>(), n in 1i64..20, d in 1i64..7) {
        if let Some((problem, r)) = passing_problem(seed) {
            let scaled = problem.f().scale(&q(n, d));
            let p2 = StiefelProblem::new(problem.matrix().clone(), HypersurfaceSpec::new(scaled).unwrap()).unwrap();
            prop_assert_eq!(lambda(&p2, &PipelineOptions::default()).unwrap().lambda, r.lambda);
        }
    }

    #[test]
    fn row_transforms_keep_lambda(seed in any::<u64>(), tseed in any::<u64>()) {
        if let Some((problem, r)) = passing_problem(seed) {
            let mut rng = ChaCha8Rng::seed_from_u64(tseed);
            let q = random_unimodular(problem.n(), &mut rng);
            match lambda(&problem.transform_rows(&q).unwrap(), &PipelineOptions::default()) {
                Ok(t) => prop_assert_eq!(t.lambda, r.lambda),
                Err(e) => prop_assert!(e.is_hypothesis_failure(), "{}", e),
            }
        }
    }

    #[test]
    fn residue_evaluates_like_delta(seed in any::<u64>()) {
        use framedeg::oracle::{solve_real_points, OracleOptions};
        use framedeg::stiefel::{delta_polynomials, jacobian_delta};
        if let Some((_, r)) = passing_problem(seed) {
            let a = QuotientAlgebra::new(r.gb.clone()).unwrap();
            let delta = jacobian_delta(&delta_polynomials(r.problem.matrix()).unwrap()).unwrap();
            for pt in solve_real_points(&a, &OracleOptions::default()).unwrap() {
                let x = &pt.coordinates;
                let exact = delta.evaluate_f64(x).unwrap();
                let residue = r.delta_residue.evaluate_f64(x).unwrap();
                let scale = delta.magnitude_f64(x).max(r.delta_residue.magnitude_f64(x)).max(1.0);
                prop_assert!((exact - residue).abs() <= 1e-6 * scale, "{} vs {}", exact, residue);
            }
        }
    }
}

#[test]
fn example_residue_at_points() {
    let r = lambda(&small_example(), &PipelineOptions::default()).unwrap();
    let ring = ring3();
    // delta residue at the two real points (z = 0 and z = -1)
    assert_eq!(r.delta_residue.evaluate(&[q(1, 2), q(0, 1), q(0, 1)]).unwrap(), q(-24, 1));
    assert_eq!(r.delta_residue.evaluate(&[q(-1, 2), q(-1, 2), q(-1, 1)]).unwrap(), q(27, 2));
    assert!(!Rational::is_zero(&r.hypotheses.pivot_minor_norm));
    assert_eq!(r.pivot_minor, p(&ring, "y + 2"));
}
