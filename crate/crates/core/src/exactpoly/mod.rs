//! Exact univariate polynomial and rational-function arithmetic.
//!
//! Everything here works over arbitrary-precision integers: [`IntPoly`] is a
//! dense coefficient vector, [`RatFun`] a reduced quotient of two of them with
//! a structural canonical form, and [`BigRat`] carries rational scalars such as
//! evaluation points.

mod cyclo;
mod gcd;
mod intpoly;
mod ratfun;
mod shift;

pub use cyclo::{cyclotomic, CycloDen, CycloSum};
pub use gcd::{poly_gcd, prs_gcd, pseudo_rem, squarefree_decomposition, squarefree_part};
pub use intpoly::IntPoly;
pub use ratfun::RatFun;
pub use shift::{
    mobius_to_positive_axis, shift_basis, shift_basis_back, sign_variations, taylor_shift_int,
    HalfLine,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar; `num_rational` keeps it reduced with a positive denominator.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("divisor does not divide the dividend (nonzero remainder)")]
    NotDivisible,
    #[error("exact quotient exists over the rationals but has non-integer coefficients")]
    NotIntegral,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("degree bound {bound} is smaller than the polynomial degree {degree}")]
    DegreeBoundTooSmall { bound: usize, degree: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point {point}")]
    PoleAt { point: String },
}

/// Shorthand for an integer-valued [`BigRat`].
pub fn rat_int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` into a [`BigRat`].
pub fn parse_rat(s: &str) -> Option<BigRat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_abs = int.trim_start_matches(['-', '+']);
        let int_part: BigInt = if int_abs.is_empty() {
            BigInt::zero()
        } else {
            int_abs.parse().ok()?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().ok()?
        };
        let mag = BigRat::new(int_part * &scale + frac_part, scale);
        return Some(if neg { -mag } else { mag });
    }
    s.parse::<BigInt>().ok().map(BigRat::from_integer)
}

/// Lossy conversion used only for reporting and numeric cross-checks.
pub fn rat_to_f64(x: &BigRat) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators/denominators: shift both down to a common scale.
    let (n, d) = (x.numer(), x.denom());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift_n = (nb - 60).max(0) as usize;
    let shift_d = (db - 60).max(0) as usize;
    let nf = (n >> shift_n).to_f64().unwrap_or(0.0);
    let df = (d >> shift_d).to_f64().unwrap_or(1.0);
    let exp = shift_n as i64 - shift_d as i64;
    nf / df * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Binomial coefficient as a big integer; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rat("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rat("7"), Some(rat_int(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("abc"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let x = BigRat::new(big.clone() * 3, big * 2);
        assert!((rat_to_f64(&x) - 1.5).abs() < 1e-15);
    }
}
