mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use cherednik_core::expr::{parse, parse_operator};
use cherednik_core::{
    exact_rank, phi_twist, CherednikContext, Echelon, Error, Field, Function, IntPoly, LocFrac, Operator,
    Perm, Poly, RatFunc,
};

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (
        prop::collection::vec(-4i64..=4, 0..4),
        prop::collection::vec(-4i64..=4, 1..3),
    )
        .prop_filter_map("nonzero denominator", |(num, den)| {
            RatFunc::normalize(IntPoly::from_i64s(&num), IntPoly::from_i64s(&den)).ok()
        })
}

fn operator(depth: u32) -> impl Strategy<Value = Operator> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = StdRng::seed_from_u64(seed);
        let src = common::random_expr(&mut rng, depth);
        parse_operator(&src, 2).expect("generated expressions are well formed")
    })
}

/// A polynomial function of x1, x2 with small integer coefficients and degree at most 3.
fn function() -> impl Strategy<Value = Function> {
    prop::collection::vec((0u16..=3, 0u16..=3, -3i64..=3), 0..4).prop_map(|terms| {
        let mut p = Poly::<RatFunc>::zero(2);
        for (a, b, k) in terms {
            let mono = Poly::x(2, 1).pow(a as u32).mul(&Poly::x(2, 2).pow(b as u32));
            p = p.add(&mono.scale(&RatFunc::from(k)));
        }
        LocFrac::from_poly(p).expect("rank matches")
    })
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn scalar_field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert!(a.sub_ref(&a).is_zero());
        if let Some(inv) = a.inv() {
            prop_assert!(a.mul_ref(&inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn scalar_evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc(), p in -5i64..=5, q in 1i64..=4) {
        let at = BigRational::new(p.into(), q.into());
        if let (Ok(x), Ok(y)) = (a.evaluate_at(&at), b.evaluate_at(&at)) {
            prop_assert_eq!(a.mul_ref(&b).evaluate_at(&at).unwrap(), &x * &y);
            prop_assert_eq!(a.add_ref(&b).evaluate_at(&at).unwrap(), x + y);
        }
    }

    #[test]
    fn skew_product_is_associative(u in operator(2), v in operator(2), w in operator(2)) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
    }

    #[test]
    fn skew_product_distributes(u in operator(2), v in operator(2), w in operator(2)) {
        prop_assert_eq!(u.mul(&v.add(&w)), u.mul(&v).add(&u.mul(&w)));
        prop_assert_eq!(u.add(&v).mul(&w), u.mul(&w).add(&v.mul(&w)));
    }

    #[test]
    fn action_is_a_module_structure(u in operator(2), v in operator(2), f in function()) {
        let lhs = u.mul(&v).apply(&f).unwrap();
        let rhs = u.apply(&v.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_conjugation_is_multiplicative(u in operator(2), v in operator(2), t in -2i64..=2) {
        let t_field = RatFunc::from(t);
        let conj = |x: &Operator| x.conjugate_by_delta_power(&t_field).unwrap();
        prop_assert_eq!(conj(&u.mul(&v)), conj(&u).mul(&conj(&v)));
        let explicit = Operator::delta_power(2, -t).mul(&u).mul(&Operator::delta_power(2, t));
        prop_assert_eq!(conj(&u), explicit);
    }

    #[test]
    fn specialization_commutes_with_product(u in operator(2), v in operator(2), p in -4i64..=4, q in 1i64..=3) {
        let r = BigRational::new(p.into(), q.into());
        let spec = |x: &Operator| x.specialize_c(&r);
        if let (Ok(a), Ok(b), Ok(ab)) = (spec(&u), spec(&v), spec(&u.mul(&v))) {
            prop_assert_eq!(ab, a.mul(&b));
        }
    }

    #[test]
    fn dunkl_preserves_polynomials(f in function(), i in 1usize..=2) {
        let ctx = CherednikContext::new(2, RatFunc::param()).unwrap();
        let g = ctx.dunkl(i).unwrap().apply(&f).unwrap();
        prop_assert!(g.as_polynomial().is_some());
    }

    #[test]
    fn phi_is_an_involution_up_to_parameter(u in operator(2)) {
        let c = RatFunc::param();
        prop_assert_eq!(phi_twist(&phi_twist(&u, &c), &-c.clone()), u.clone());
        prop_assert_eq!(phi_twist(&u.mul(&u), &c), phi_twist(&u, &c).mul(&phi_twist(&u, &c)));
    }

    #[test]
    fn echelon_rank_matches_bareiss(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 0..6)) {
        let dense: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
            .collect();
        let mut ech = Echelon::new();
        for r in &dense {
            ech.insert(r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k, v.clone())).collect());
        }
        prop_assert_eq!(ech.rank(), exact_rank(&dense).unwrap());
    }

    #[test]
    fn parser_is_total(src in "\\PC{0,40}") {
        let _ = parse(&src, 2);
    }

    #[test]
    fn parser_is_total_on_grammar_alphabet(src in "[-+*^/(), 0-9cxydels_e]{0,30}") {
        if let Ok(ast) = parse(&src, 3) {
            let _ = cherednik_core::expr::elaborate(&ast, 3);
        }
    }
}

#[test]
fn dunkl_operators_are_equivariant() {
    let ctx = CherednikContext::new(3, RatFunc::param()).unwrap();
    for w in cherednik_core::perm::all_perms(3) {
        let g = Operator::group_element(&w);
        let g_inv = Operator::group_element(&w.inverse());
        for i in 1..=3 {
            let moved = g.mul(&ctx.dunkl(i).unwrap()).mul(&g_inv);
            assert_eq!(moved, ctx.dunkl(w.apply(i - 1) + 1).unwrap());
        }
    }
}

#[test]
fn odd_permutation_under_formal_twist_is_rejected() {
    let s = Operator::group_element(&Perm::transposition(2, 1, 2).unwrap());
    assert!(matches!(
        s.conjugate_by_delta_power(&RatFunc::param()),
        Err(Error::OddPermutationUnderFormalTwist { .. })
    ));
    assert_eq!(s.conjugate_by_delta_power(&RatFunc::one()).unwrap(), s.neg());
}
