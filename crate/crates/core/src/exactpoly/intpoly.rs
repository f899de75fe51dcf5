use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{gcd, sign_of, BigRat, PolyError};

/// Dense univariate polynomial with big-integer coefficients.
///
/// `coeffs[i]` is the coefficient of `q^i`. The highest stored coefficient is
/// never zero; the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `c * q^k`
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c.into());
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    /// `1 - q^k`
    pub fn one_minus_pow(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[0] += 1;
        coeffs[k] -= 1;
        Self::new(coeffs)
    }

    /// `1 + q^k`
    pub fn one_plus_pow(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[0] += 1;
        coeffs[k] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Order of vanishing at `q = 0`, `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at `x = a/b`, carried in integers and divided once.
    pub fn eval(&self, x: &BigRat) -> BigRat {
        let (acc, den) = self.eval_scaled(x);
        BigRat::new(acc, den)
    }

    /// Returns `(b^d p(a/b), b^d)` with `d = deg p`.
    fn eval_scaled(&self, x: &BigRat) -> (BigInt, BigInt) {
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for (k, c) in self.coeffs.iter().rev().enumerate() {
            if k == 0 {
                acc = c.clone();
            } else {
                bpow *= b;
                acc = acc * a + c * &bpow;
            }
        }
        (acc, bpow)
    }

    /// Sign (-1, 0, 1) of `p(x)`.
    pub fn sign_at(&self, x: &BigRat) -> i8 {
        sign_of(&self.eval_scaled(x).0)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Divide by `q^k`; `None` if `q^k` does not divide.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// `q -> -q`
    pub fn negate_variable(&self) -> Self {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// `q -> q^k`
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly { coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `q^d p(1/q)`; requires `d >= deg p`.
    pub fn reversal(&self, d: usize) -> Result<Self, PolyError> {
        let Some(deg) = self.degree() else {
            return Ok(Self::zero());
        };
        if d < deg {
            return Err(PolyError::DegreeBoundTooSmall { bound: d, degree: deg });
        }
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[d - i] = c.clone();
        }
        Ok(Self::new(coeffs))
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides by the positive content; signs are preserved.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_scalar_exact(&c)
    }

    pub(crate) fn div_scalar_exact(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    /// Exact quotient `a / b` with integer coefficients.
    ///
    /// Distinguishes a nonzero remainder over the rationals (`NotDivisible`)
    /// from a rational but non-integral quotient (`NotIntegral`).
    pub fn divexact(&self, b: &IntPoly) -> Result<IntPoly, PolyError> {
        let Some(db) = b.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let Some(da) = self.degree() else {
            return Ok(Self::zero());
        };
        if da < db {
            return Err(PolyError::NotDivisible);
        }
        let lc = b.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); da - db + 1];
        let unit = lc.abs().is_one();
        for k in (0..=da - db).rev() {
            let top = &rem[k + db];
            if top.is_zero() {
                continue;
            }
            let qk = if unit {
                if lc.is_positive() {
                    top.clone()
                } else {
                    -top
                }
            } else {
                let (qk, r) = top.div_rem(lc);
                if !r.is_zero() {
                    return Err(self.classify_failed_division(b));
                }
                qk
            };
            for (j, bc) in b.coeffs.iter().enumerate() {
                if !bc.is_zero() {
                    rem[k + j] -= &qk * bc;
                }
            }
            quot[k] = qk;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::NotDivisible);
        }
        Ok(Self::new(quot))
    }

    fn classify_failed_division(&self, b: &IntPoly) -> PolyError {
        if gcd::pseudo_rem(self, b).is_zero() {
            PolyError::NotIntegral
        } else {
            PolyError::NotDivisible
        }
    }

    /// Largest `m` with `(den*q - num)^m` dividing `self`, where `r = num/den`,
    /// together with the cofactor.
    pub fn deflate_rational_root(&self, r: &BigRat) -> (usize, IntPoly) {
        let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let mut cur = self.clone();
        let mut m = 0;
        if cur.is_zero() {
            return (0, cur);
        }
        while let Ok(next) = cur.divexact(&lin) {
            cur = next;
            m += 1;
        }
        (m, cur)
    }

    /// Largest absolute coefficient, as bit length (0 for the zero polynomial).
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    fn small_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    fn mul_impl(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (n, m) = (self.coeffs.len(), other.coeffs.len());
        // i128 accumulation when the worst-case coefficient provably fits.
        let bits = self.max_coeff_bits() + other.max_coeff_bits() + 64 - (n.min(m) as u64).leading_zeros() as u64;
        if bits < 126 {
            if let (Some(a), Some(b)) = (self.small_coeffs(), other.small_coeffs()) {
                let mut out = vec![0i128; n + m - 1];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let x = x as i128;
                    for (j, &y) in b.iter().enumerate() {
                        out[i + j] += x * y as i128;
                    }
                }
                return Self::new(out.into_iter().map(BigInt::from).collect());
            }
        }
        let mut out = vec![BigInt::zero(); n + m - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Self::new(out)
    }

    fn add_impl(&self, other: &IntPoly, negate_other: bool) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            let v = match (a, b) {
                (Some(a), Some(b)) => {
                    if negate_other {
                        a - b
                    } else {
                        a + b
                    }
                }
                (Some(a), None) => a.clone(),
                (None, Some(b)) => {
                    if negate_other {
                        -b
                    } else {
                        b.clone()
                    }
                }
                (None, None) => unreachable!(),
            };
            out.push(v);
        }
        Self::new(out)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}*q^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &'a IntPoly) -> IntPoly {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &'a IntPoly) -> IntPoly {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &'a IntPoly) -> IntPoly {
        self.mul_impl(rhs)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: IntPoly) -> IntPoly {
        self.add_impl(&rhs, false)
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: IntPoly) -> IntPoly {
        self.add_impl(&rhs, true)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: IntPoly) -> IntPoly {
        self.mul_impl(&rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, rat_int};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn products() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, -1]), p(&[1, 0, -1]));
        assert_eq!(&p(&[3, 0, 2]) * &IntPoly::one(), p(&[3, 0, 2]));
        assert_eq!(&p(&[1, 0, 1]) * &p(&[1, 0, 0, 1]), p(&[1, 0, 1, 1, 0, 1]));
        assert!((&p(&[1, 2]) * &IntPoly::zero()).is_zero());
    }

    #[test]
    fn big_coefficient_product_matches_small_path() {
        let big = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
        let a = IntPoly::new(vec![big.clone(), BigInt::from(1)]);
        let b = p(&[1, 1]);
        let prod = &a * &b;
        assert_eq!(prod.coeffs()[0], big);
        assert_eq!(prod.coeffs()[1], &big + 1);
        assert_eq!(prod.coeffs()[2], BigInt::from(1));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p(&[1, 0, 1]).derivative(), p(&[0, 2]));
        assert!(p(&[5]).derivative().is_zero());
        let c3 = p(&[1, 0, 1, 1, 1, 0, 1]);
        assert_eq!(c3.derivative(), p(&[0, 2, 3, 4, 0, 6]));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(&[1, 0, 0, 0, -1]).divexact(&p(&[1, 0, -1])), Ok(p(&[1, 0, 1])));
        assert_eq!(
            p(&[1, 0, 0, 1, 0, -1, 0, 0, -1]).divexact(&p(&[1, 0, -1])),
            Ok(p(&[1, 0, 1, 1, 1, 0, 1]))
        );
        assert_eq!(p(&[1, 1]).divexact(&p(&[1, -1])), Err(PolyError::NotDivisible));
        assert_eq!(p(&[1, 1]).divexact(&p(&[2, 2])), Err(PolyError::NotIntegral));
        assert_eq!(p(&[1, 1]).divexact(&IntPoly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[1, 0, 1]).eval(&rat_int(0)), rat_int(1));
        let c3 = p(&[1, 0, 1, 1, 1, 0, 1]);
        assert_eq!(c3.eval(&rat_int(1)), rat_int(5));
        assert_eq!(c3.eval(&rat_int(-1)), rat_int(3));
        assert_eq!(p(&[0, 0, 4]).eval(&rat(1, 2)), rat_int(1));
        assert_eq!(p(&[-1, 0, 4]).sign_at(&rat(1, 2)), 0);
        assert_eq!(p(&[-1, 0, 4]).sign_at(&rat(-1, 3)), -1);
    }

    #[test]
    fn reversals() {
        assert_eq!(p(&[1, 0, 1]).reversal(2), Ok(p(&[1, 0, 1])));
        assert_eq!(p(&[1, 2]).reversal(1), Ok(p(&[2, 1])));
        assert_eq!(p(&[1, 2]).reversal(3), Ok(p(&[0, 0, 2, 1])));
        assert_eq!(
            p(&[1, 2, 3]).reversal(1),
            Err(PolyError::DegreeBoundTooSmall { bound: 1, degree: 2 })
        );
        assert!(p(&[1, 0, 1, 1, 1, 0, 1]).is_palindromic());
    }

    #[test]
    fn rational_root_deflation() {
        // 2q^2 (1 - q^2) = -2 q^2 (q-1)(q+1)
        let n2 = p(&[0, 0, 2, 0, -2]);
        let (m0, c0) = n2.deflate_rational_root(&rat_int(0));
        assert_eq!(m0, 2);
        assert_eq!(c0, p(&[2, 0, -2]));
        let (m1, _) = c0.deflate_rational_root(&rat_int(1));
        assert_eq!(m1, 1);
        let (mh, _) = p(&[-1, 2]).pow(3).deflate_rational_root(&rat(1, 2));
        assert_eq!(mh, 3);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, 0, 3]).to_string(), "1 - q + 3*q^3");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }
}
