use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use qconvex_core::certify::{certify_positive, sturm_chain, Interval, Verdict};
use qconvex_core::exactpoly::{
    poly_gcd, rat, shift_basis, shift_basis_back, squarefree_part, taylor_shift_int, BigRat, IntPoly, RatFun,
};
use qconvex_core::sosfactor::cosine_lift;

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-50i64..50, 0..8).prop_map(|c| IntPoly::from_i64s(&c))
}

fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn small_rat() -> impl Strategy<Value = BigRat> {
    (-40i64..40, 1i64..12).prop_map(|(a, b)| rat(a, b))
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &IntPoly::one(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), x in small_rat()) {
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
    }

    #[test]
    fn shift_round_trip(p in poly(), c in small_rat()) {
        let back = shift_basis_back(&shift_basis(&p, &c), &c);
        let want: Vec<BigRat> = p.coeffs().iter().cloned().map(BigRat::from_integer).collect();
        prop_assert_eq!(back, want);
    }

    #[test]
    fn integer_shift_agrees_with_evaluation(p in poly(), c in -5i64..5, x in small_rat()) {
        let s = taylor_shift_int(&p, &BigInt::from(c));
        prop_assert_eq!(s.eval(&x), p.eval(&(x + rat(c, 1))));
    }

    #[test]
    fn derivative_matches_difference_quotient(p in poly(), x in small_rat()) {
        // central difference is exact for degree <= 2 and O(h^2) beyond
        let h = rat(1, 1 << 20);
        let dq = (p.eval(&(&x + &h)) - p.eval(&(&x - &h))) / (rat(2, 1) * &h);
        let d = p.derivative().eval(&x);
        let err = (dq - &d).abs();
        let scale = p.nth_derivative(3).coeffs().iter().fold(BigInt::zero(), |m, c| m + c.abs());
        let bound = BigRat::from_integer(scale + BigInt::one()) * (x.abs() + BigRat::one()).pow(8) * &h * &h;
        prop_assert!(err <= bound);
    }

    #[test]
    fn reversal_is_an_involution(p in nonzero_poly(), extra in 0usize..4) {
        let d = p.degree().unwrap() + extra;
        let r = p.reversal(d).unwrap();
        // the reversal at d loses exactly the low zeros, so reverse back at d
        prop_assert_eq!(r.reversal(d).unwrap(), p);
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let ac = &a * &c;
        let bc = &b * &c;
        let g = poly_gcd(&ac, &bc);
        prop_assert!(ac.divexact(&g).is_ok());
        prop_assert!(bc.divexact(&g).is_ok());
        prop_assert!(g.divexact(&c.primitive_part()).is_ok());
    }

    #[test]
    fn ratfun_is_canonical(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let f = RatFun::reduce(&a * &c, &b * &c).unwrap();
        let g = RatFun::reduce(a.clone(), b.clone()).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn lift_is_palindromic(p in nonzero_poly()) {
        let g = cosine_lift(&p);
        prop_assert_eq!(g.degree(), Some(2 * p.degree().unwrap()));
        prop_assert!(g.is_palindromic());
    }

    #[test]
    fn squares_certify_nonnegative(p in nonzero_poly()) {
        // p^2 + 1 has no real roots
        let f = &(&p * &p) + &IntPoly::one();
        let cert = certify_positive(&f, &Interval::real_line(), &[], "square_plus_one").unwrap();
        prop_assert_eq!(&cert.verdict, &Verdict::PositiveStrict);
        prop_assert!(cert.replay());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Products of distinct linear factors: the root count on any interval is
    /// known from the factors themselves.
    #[test]
    fn sturm_counts_linear_products(
        roots in prop::collection::btree_set((-30i64..30, 1i64..6), 1..7),
        lo in (-40i64..0, 1i64..4),
        hi in (0i64..40, 1i64..4),
    ) {
        let rs: Vec<BigRat> = roots.iter().map(|&(a, b)| rat(a, b)).collect();
        let mut distinct = rs.clone();
        distinct.sort();
        distinct.dedup();
        let mut p = IntPoly::one();
        for r in &distinct {
            p = &p * &IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        }
        let (lo, hi) = (rat(lo.0, lo.1), rat(hi.0, hi.1));
        let chain = sturm_chain(&p).unwrap();
        let open = distinct.iter().filter(|r| **r > lo && **r < hi).count();
        let closed = distinct.iter().filter(|r| **r >= lo && **r <= hi).count();
        prop_assert_eq!(chain.count_real_roots(&Interval::open(lo.clone(), hi.clone())), open);
        prop_assert_eq!(chain.count_real_roots(&Interval::closed(lo, hi)), closed);
        prop_assert_eq!(chain.count_real_roots(&Interval::real_line()), distinct.len());
        // squaring the product changes nothing
        let sq = &p * &p;
        prop_assert_eq!(squarefree_part(&sq), p.primitive_part());
    }
}
