//! Independent cross-checks: dense exact sampling against certificates,
//! brute-force enumeration against recurrences.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use qconvex_core::certify::{certify_convexity, certify_kn_ln, Verdict};
use qconvex_core::exactpoly::{rat, BigRat};
use qconvex_core::partitions::{f_derivatives_at, f_series, partition_numbers};
use qconvex_core::qcore::{qcatalan_dyck_oracle, qcatalan_poly};
use qconvex_core::qfuncs::{build_ln, build_qn};

fn grid(lo: i64, hi: i64, den: i64) -> impl Iterator<Item = BigRat> {
    (lo * den..=hi * den).map(move |k| rat(k, den))
}

#[test]
fn convexity_dense_sampling() {
    for n in 2..=10 {
        let d2 = qcatalan_poly(n).unwrap().nth_derivative(2);
        for x in grid(-3, 3, 64) {
            assert!(d2.eval(&x).is_positive(), "C_{n}'' at {x}");
        }
        assert_eq!(certify_convexity(n).unwrap().verdict, Verdict::PositiveStrict);
    }
}

#[test]
fn ln_grid_sanity() {
    for n in (3..=15).step_by(2) {
        let l = build_ln(n).unwrap();
        for k in 1..128 {
            let x = rat(-k, 128);
            assert!(l.eval(&x).unwrap().is_positive(), "L_{n} at {x}");
        }
        assert!(certify_kn_ln(n).unwrap().is_positive());
    }
}

#[test]
fn numerator_nonnegative_on_grid() {
    for n in 2..=8 {
        let nn = build_qn(n).unwrap().nn_num;
        for k in 0..=512 {
            let x = rat(2 * k - 512, 512);
            assert!(!nn.eval(&x).is_negative(), "N_{n} at {x}");
        }
    }
}

#[test]
fn dyck_oracle_matches_product() {
    for n in 2..=9 {
        assert_eq!(qcatalan_dyck_oracle(n).unwrap(), qcatalan_poly(n).unwrap(), "n = {n}");
    }
}

/// Partitions of `n` with every part at most `max`.
fn count_partitions(n: usize, max: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max.min(n)).map(|k| count_partitions(n - k, k)).sum()
}

#[test]
fn partition_numbers_by_enumeration() {
    let p = partition_numbers(40);
    for (n, v) in p.iter().enumerate() {
        assert_eq!(*v, BigInt::from(count_partitions(n, n)), "P({n})");
    }
}

#[test]
fn series_coefficients_are_differences() {
    let p = partition_numbers(200);
    let f = f_series(200);
    assert_eq!(f.coeffs[0], BigInt::from(1));
    for n in 1..=200 {
        assert_eq!(f.coeffs[n], &p[n] - &p[n - 1], "n = {n}");
    }
}

#[test]
fn second_derivative_against_finite_difference() {
    // F'' from the three-sum identity against a difference of F values
    for (a, b) in [(1, 4), (-1, 3), (1, 2)] {
        let q = rat(a, b);
        let h = rat(1, 1 << 10);
        // the tail beyond k = 80 is below 2^-70 for |q| <= 1/2 + h
        let at = |x: &BigRat| f_derivatives_at(x, 80).unwrap();
        let c = at(&q);
        let fd = (at(&(&q + &h)).f - rat(2, 1) * &c.f + at(&(&q - &h)).f) / (&h * &h);
        let rel = ((fd - &c.fsecond) / &c.fsecond).abs();
        assert!(rel < rat(1, 1000), "q = {q}");
        assert!(!c.fsecond.is_zero());
    }
}
