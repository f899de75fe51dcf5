use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gcd::try_divexact;
use super::{poly_gcd, BigRat, IntPoly, PolyError};

/// Reduced quotient `num / den` in canonical form:
/// coprime as polynomials, no shared integer content, `lc(den) > 0`.
/// Two equal rational functions therefore compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: IntPoly,
    den: IntPoly,
}

fn exact_quot(a: &IntPoly, b: &IntPoly) -> IntPoly {
    try_divexact(a, b).expect("gcd divides its arguments")
}

impl RatFun {
    pub fn reduce(num: IntPoly, den: IntPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (exact_quot(&num, &g), exact_quot(&den, &g))
        };
        Ok(Self::normalize_content(num, den))
    }

    /// Canonical form of a pair the caller knows to be coprime as polynomials.
    pub(crate) fn from_coprime(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        Self::normalize_content(num, den)
    }

    /// Content/sign normalization for a pair already coprime as polynomials.
    fn normalize_content(num: IntPoly, den: IntPoly) -> Self {
        let mut c = num.content().gcd(&den.content());
        if den.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        if c.is_one() {
            Self { num, den }
        } else {
            Self {
                num: num.div_scalar_exact(&c),
                den: den.div_scalar_exact(&c),
            }
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_poly(IntPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(IntPoly::zero())
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn into_parts(self) -> (IntPoly, IntPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant() && self.den.leading().is_some_and(|c| c.is_one())
    }

    /// Exact value; fails where the reduced denominator vanishes.
    pub fn eval(&self, x: &BigRat) -> Result<BigRat, PolyError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(PolyError::PoleAt {
                point: x.to_string(),
            });
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn derivative(&self) -> Self {
        if self.den.is_constant() {
            return Self::normalize_content(self.num.derivative(), self.den.clone());
        }
        // (n/d)' = (n' d - n d') / d^2; with g = gcd(d, d') the result is
        // (n' (d/g) - n (d'/g)) / (d * d/g), which only needs a content pass
        // plus a gcd against g.
        let dd = self.den.derivative();
        let g = poly_gcd(&self.den, &dd);
        let dg = exact_quot(&self.den, &g);
        let ddg = exact_quot(&dd, &g);
        let top = &(&self.num.derivative() * &dg) - &(&self.num * &ddg);
        let bottom = &self.den * &dg;
        Self::reduce(top, bottom).expect("nonzero denominator")
    }

    /// `f(1/q)`, via reversal of numerator and denominator at a common bound.
    pub fn substitute_reciprocal(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let d = dn.max(dd);
        let num = self.num.reversal(d).expect("bound ≥ degree");
        let den = self.den.reversal(d).expect("bound ≥ degree");
        Self::reduce(num, den).expect("reversed denominator is nonzero")
    }

    /// `f(-1/q)`.
    pub fn substitute_neg_reciprocal(&self) -> Self {
        let r = self.substitute_reciprocal();
        Self::normalize_content(r.num.negate_variable(), r.den.negate_variable())
    }

    /// `f(-q)`.
    pub fn negate_variable(&self) -> Self {
        Self::normalize_content(self.num.negate_variable(), self.den.negate_variable())
    }

    /// `q^k f(q)`, `k` may be negative.
    pub fn mul_monomial(&self, k: i64) -> Self {
        if k >= 0 {
            self * &Self::from_poly(IntPoly::monomial(1, k as usize))
        } else {
            let m = Self {
                num: IntPoly::one(),
                den: IntPoly::monomial(1, (-k) as usize),
            };
            self * &m
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self * &Self::constant(c.clone())
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Henrici: g = gcd(b, d); a/b + c/d = (a d' + c b') / (b d') with
        // b = g b', d = g d'; any common factor of the sum divides g.
        let g = poly_gcd(&self.den, &other.den);
        if g.is_constant() {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            let den = &self.den * &other.den;
            return Self::normalize_content(num, den);
        }
        let b1 = exact_quot(&self.den, &g);
        let d1 = exact_quot(&other.den, &g);
        let num = &(&self.num * &d1) + &(&other.num * &b1);
        if num.is_zero() {
            return Self::zero();
        }
        let h = poly_gcd(&num, &g);
        let den = &self.den * &d1;
        if h.is_constant() {
            Self::normalize_content(num, den)
        } else {
            Self::normalize_content(exact_quot(&num, &h), exact_quot(&den, &h))
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = exact_quot(&self.num, &g1);
        let d2 = exact_quot(&other.den, &g1);
        let n2 = exact_quot(&other.num, &g2);
        let d1 = exact_quot(&self.den, &g2);
        Self::normalize_content(&n1 * &n2, &d1 * &d2)
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalize_content(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self * &other.recip()?)
    }
}

impl From<IntPoly> for RatFun {
    fn from(p: IntPoly) -> Self {
        Self::from_poly(p)
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, rhs: &'a RatFun) -> RatFun {
        self.add_impl(rhs)
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &'a RatFun) -> RatFun {
        self.add_impl(&-rhs)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &'a RatFun) -> RatFun {
        self.mul_impl(rhs)
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        self.add_impl(&rhs)
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        self.add_impl(&-rhs)
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        self.mul_impl(&rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, rat_int};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::reduce(p(n), p(d)).unwrap()
    }

    #[test]
    fn canonical_reduction() {
        let r = rf(&[0, 2, 0, -2], &[1, 0, 0, 0, -1]);
        assert_eq!(r.num(), &p(&[0, 2]));
        assert_eq!(r.den(), &p(&[1, 0, 1]));
        let r = rf(&[1, 0, -1], &[2, -2]);
        assert_eq!(r.num(), &p(&[1, 1]));
        assert_eq!(r.den(), &p(&[2]));
        assert_eq!(rf(&[3, 1], &[1]), RatFun::from_poly(p(&[3, 1])));
        assert_eq!(
            RatFun::reduce(p(&[1]), IntPoly::zero()),
            Err(PolyError::ZeroDenominator)
        );
    }

    #[test]
    fn sign_normalized_on_denominator() {
        let r = rf(&[1], &[1, -1]); // 1/(1-q) = -1/(q-1)
        assert_eq!(r.num(), &p(&[-1]));
        assert_eq!(r.den(), &p(&[-1, 1]));
    }

    #[test]
    fn derivatives() {
        let f = rf(&[0, 2], &[1, 0, 1]);
        let expected = rf(&[2, 0, -2], &[1, 0, 2, 0, 1]);
        assert_eq!(f.derivative(), expected);
        assert!(RatFun::constant(7).derivative().is_zero());
        let g = rf(&[1], &[1, -1]);
        assert_eq!(g.derivative(), rf(&[1], &[1, -2, 1]));
    }

    #[test]
    fn arithmetic_matches_evaluation() {
        let a = rf(&[1, 2], &[1, 0, 1]);
        let b = rf(&[0, 3, -1], &[1, -1]);
        let x = rat(2, 7);
        let ev = |f: &RatFun| f.eval(&x).unwrap();
        assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
        assert_eq!(ev(&(&a - &b)), ev(&a) - ev(&b));
        assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        assert_eq!(ev(&a.div(&b).unwrap()), ev(&a) / ev(&b));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn henrici_cancels_through_shared_factor() {
        // 1/(1-q) - 1/(1-q^2) = q/(1-q^2)
        let s = &rf(&[1], &[1, -1]) - &rf(&[1], &[1, 0, -1]);
        assert_eq!(s, rf(&[0, 1], &[1, 0, -1]));
        // 1/(1-q) + 1/(1+q) ... - 2/(1-q^2) = 0
        let z = &(&rf(&[1], &[1, -1]) + &rf(&[1], &[1, 1])) - &rf(&[2], &[1, 0, -1]);
        assert!(z.is_zero());
    }

    #[test]
    fn reciprocal_substitution() {
        let f = rf(&[0, 2], &[1, 0, 1]); // 2q/(1+q^2) is invariant under q -> 1/q
        assert_eq!(f.substitute_reciprocal(), f);
        let g = rf(&[1, 1], &[1, 0, 0, 1]);
        let x = rat(3, 5);
        assert_eq!(
            g.substitute_reciprocal().eval(&x).unwrap(),
            g.eval(&(rat_int(1) / &x)).unwrap()
        );
        assert_eq!(
            g.substitute_neg_reciprocal().eval(&x).unwrap(),
            g.eval(&(-rat_int(1) / &x)).unwrap()
        );
    }

    #[test]
    fn pole_reported() {
        let f = rf(&[1], &[1, 0, -1]);
        assert!(matches!(f.eval(&rat_int(1)), Err(PolyError::PoleAt { .. })));
    }

    #[test]
    fn monomial_multiplication() {
        let f = rf(&[0, 0, 1], &[1, 1]);
        assert_eq!(f.mul_monomial(-2), rf(&[1], &[1, 1]));
        assert_eq!(f.mul_monomial(1), rf(&[0, 0, 0, 1], &[1, 1]));
    }
}
