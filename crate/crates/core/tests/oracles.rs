//! Each value is first computed by hand from primitive constructors, then
//! compared with the library's own routine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::smallvec;

use cherednik_core::bimod::spherical_part;
use cherednik_core::{
    calogero_moser, exact_rank, gr_comparison, idempotent, is_good, isotypic_basis, laplacian,
    molien_dimension, phi_twist, radial_rhs, run_suite, theta_spher, a_power_basis, Character,
    CherednikContext, Echelon, Error, Field, Function, GrOptions, LocFrac, Operator, Perm, Poly, RatFunc,
    Side, SuiteOptions, SymbolPoly,
};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn c() -> RatFunc {
    RatFunc::param()
}

fn x(i: usize) -> Operator {
    Operator::x(2, i).unwrap()
}

fn d(i: usize) -> Operator {
    Operator::partial(2, i).unwrap()
}

fn s12() -> Operator {
    Operator::group_element(&Perm::transposition(2, 1, 2).unwrap())
}

/// `1/(x1 - x2)` as an operator of order zero.
fn inv_root() -> Operator {
    Operator::from_locfrac(LocFrac::inv_root(2, 0, 1))
}

fn poly_fn(p: Poly<RatFunc>) -> Function {
    LocFrac::from_poly(p).unwrap()
}

#[test]
fn sum_over_delta_keeps_its_denominator() {
    let inv = LocFrac::<RatFunc>::delta_power(2, -1);
    let x1 = poly_fn(Poly::x(2, 1));
    let x2 = poly_fn(Poly::x(2, 2));
    let sum = x1.mul(&inv).add(&x2.mul(&inv));
    assert_eq!(sum.delta_exponent(), 1);
    assert_eq!(sum.numerator(), &Poly::x(2, 1).add(&Poly::x(2, 2)));
}

#[test]
fn derivative_of_inverse_delta() {
    let inv = LocFrac::<RatFunc>::delta_power(2, -1);
    let expected = LocFrac::delta_power(2, -2).scale(&RatFunc::from(-1));
    assert_eq!(inv.loc_derivative(1).unwrap(), expected);
}

#[test]
fn dunkl_expansion_rank_two() {
    // ∂1 - c/(x1 - x2) + c/(x1 - x2)·s12
    let hand = d(1).sub(&inv_root().scale(&c())).add(&inv_root().mul(&s12()).scale(&c()));
    let ctx = CherednikContext::new(2, c()).unwrap();
    assert_eq!(ctx.dunkl(1).unwrap(), hand);

    let half = inv_root().scale(&RatFunc::from_rational(&q(1, 2)));
    let at_half = d(1).sub(&half).add(&half.mul(&s12()));
    assert_eq!(ctx.dunkl(1).unwrap().specialize_c(&q(1, 2)).unwrap(), at_half);
}

#[test]
fn dunkl_symbol_is_y() {
    let ctx = CherednikContext::new(2, c()).unwrap();
    let sym = ctx.dunkl(1).unwrap().principal_symbol().unwrap();
    let mut y1 = SymbolPoly::zero(2);
    y1.add_term(smallvec![1, 0], LocFrac::one(2));
    assert_eq!(sym.component(&Perm::identity(2)), y1);
    assert!(sym.component(&Perm::transposition(2, 1, 2).unwrap()).is_zero());
}

#[test]
fn dunkl_on_x1() {
    // ∂1 x1 - c·(x1 - x2)/(x1 - x2) = 1 - c
    let hand = RatFunc::one().sub_ref(&c());
    let ctx = CherednikContext::new(2, c()).unwrap();
    let got = ctx.dunkl(1).unwrap().apply(&poly_fn(Poly::x(2, 1))).unwrap();
    assert_eq!(got, LocFrac::constant(2, hand));
}

#[test]
fn delta_twist_of_a_derivative() {
    let w = c();
    let hand = d(1).add(&inv_root().scale(&w));
    assert_eq!(d(1).conjugate_by_delta_power(&w).unwrap(), hand);
}

#[test]
fn theta_on_laplacian_matches_skew_product_at_one() {
    let w = RatFunc::one();
    let direct = Operator::delta_power(2, -1).mul(&laplacian(2)).mul(&Operator::delta_power(2, 1));
    assert_eq!(theta_spher(&laplacian(2), &w).unwrap(), direct);

    let w = c();
    let two = RatFunc::from(2);
    let hand = laplacian(2)
        .add(&inv_root().mul(&d(1).sub(&d(2))).scale(&two.mul_ref(&w)))
        .add(&inv_root().mul(&inv_root()).scale(&two.mul_ref(&w).mul_ref(&w.sub_ref(&RatFunc::one()))));
    assert_eq!(theta_spher(&laplacian(2), &w).unwrap(), hand);
}

#[test]
fn calogero_moser_rank_two() {
    let w = c();
    let coeff = RatFunc::from(2).mul_ref(&w).mul_ref(&w.add_ref(&RatFunc::one()));
    let hand = d(1).mul(&d(1)).add(&d(2).mul(&d(2))).sub(&inv_root().mul(&inv_root()).scale(&coeff));
    assert_eq!(calogero_moser(2, &w), hand);
}

#[test]
fn radial_rhs_at_zero() {
    let hand = laplacian(2).add(&inv_root().mul(&d(1).sub(&d(2))).scale(&RatFunc::from(2)));
    assert_eq!(radial_rhs(2, &RatFunc::zero()).unwrap(), hand);
}

#[test]
fn phi_sends_dunkl_to_negated_parameter() {
    let hand = d(1).add(&inv_root().scale(&c())).sub(&inv_root().mul(&s12()).scale(&c()));
    let ctx = CherednikContext::new(2, c()).unwrap();
    assert_eq!(phi_twist(&ctx.dunkl(1).unwrap(), &c()), hand);
}

#[test]
fn spherical_symbol_of_sandwiched_product() {
    let e = idempotent::<RatFunc>(2, Character::Trivial);
    let u = e.mul(&d(1)).mul(&d(2)).mul(&e);
    let mut y1y2 = SymbolPoly::zero(2);
    y1y2.add_term(smallvec![1, 1], LocFrac::one(2));
    assert_eq!(u.spherical_scalar_symbol().unwrap(), y1y2);
    assert!(matches!(d(1).spherical_scalar_symbol(), Err(Error::NotSpherical { .. })));
    assert!(matches!(spherical_part(&d(1)), Err(Error::NotSpherical { .. })));
}

#[test]
fn swap_moves_past_x() {
    let sx = cherednik_core::expr::parse_operator("s(1,2)*x1", 2).unwrap();
    assert_eq!(sx, x(2).mul(&s12()));
}

#[test]
fn good_parameter_definition() {
    assert!(!is_good(&q(-1, 2), 2));
    assert!(is_good(&q(1, 2), 2));
    for n in 2..=4usize {
        for den in 1..=4i64 {
            for num in -6..=6i64 {
                let r = q(num, den);
                let bad = r > q(-1, 1) && r < BigRational::zero() && (2..=n as i64).any(|b| (&r * q(b, 1)).is_integer());
                assert_eq!(is_good(&r, n), !bad, "r = {r}, n = {n}");
            }
        }
    }
}

fn spans(basis: &[Poly<BigRational>], target: &Poly<BigRational>) -> bool {
    let vec = |p: &Poly<BigRational>| p.terms().map(|(m, k)| (m.clone(), k.clone())).collect();
    let mut ech = Echelon::new();
    for b in basis {
        ech.insert(vec(b));
    }
    ech.contains(vec(target))
}

#[test]
fn sign_isotypic_bases() {
    let x1 = Poly::<BigRational>::x(2, 1);
    let x2 = Poly::x(2, 2);
    let y1 = Poly::y(2, 1);
    let y2 = Poly::y(2, 2);
    let b = isotypic_basis::<BigRational>(2, Character::Sign, (1, 0));
    assert_eq!(b.dim(), 1);
    assert!(spans(&b.basis, &x1.sub(&x2)));
    let b = isotypic_basis::<BigRational>(2, Character::Sign, (1, 1));
    assert_eq!(b.dim(), 2);
    assert!(spans(&b.basis, &x1.mul(&y1).sub(&x2.mul(&y2))));
    assert!(spans(&b.basis, &x1.mul(&y2).sub(&x2.mul(&y1))));
    assert_eq!(molien_dimension(2, Character::Sign, (1, 1)), 2);

    assert_eq!(a_power_basis::<BigRational>(2, 1, (1, 0)).dim(), 1);
    let sq = a_power_basis::<BigRational>(2, 2, (2, 0));
    assert_eq!(sq.dim(), 1);
    assert!(spans(&sq.basis, &x1.sub(&x2).pow(2)));
}

#[test]
fn rank_over_the_function_field() {
    let rows = vec![vec![RatFunc::one(), c()], vec![c(), c().mul_ref(&c())]];
    assert_eq!(exact_rank(&rows).unwrap(), 1);
}

#[test]
fn rank_two_q_targets() {
    let cmp = gr_comparison(&GrOptions::new(2, 1, Side::Q, 2, 2, c())).unwrap();
    let at = |i, j| cmp.row(i, j).map(|r| (r.span_dim, r.target_dim));
    assert_eq!(at(-1, 0), Some((0, 0)));
    assert_eq!(at(0, 1), Some((2, 2)));
    assert_eq!(at(0, 0), Some((1, 1)));
}

#[test]
fn heckman_rank_two() {
    assert!(run_suite("heckman", 2, &SuiteOptions::default()).unwrap().passed());
}

#[test]
fn molien_by_direct_count() {
    // For n = 2, split x1, x2 into x1 + x2 (even) and x1 - x2 (odd); same for y.
    // A monomial in these is sign-isotypic when its total odd degree is odd.
    for i in 0..6u32 {
        for j in 0..6u32 {
            let mut odd = 0;
            for a in 0..=i {
                for b in 0..=j {
                    if (a + b) % 2 == 1 {
                        odd += 1;
                    }
                }
            }
            let total = ((i + 1) * (j + 1)) as usize;
            assert_eq!(molien_dimension(2, Character::Sign, (i, j)), odd);
            assert_eq!(molien_dimension(2, Character::Trivial, (i, j)), total - odd);
        }
    }
}
