//! Basis changes: Taylor shifts and the Möbius maps used by Descartes counting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BigRat, IntPoly};

/// `p(x + c)` by repeated synthetic division (Horner shift), `O(d^2)` additions.
pub fn taylor_shift_int(p: &IntPoly, c: &BigInt) -> IntPoly {
    if p.is_constant() || c.is_zero() {
        return p.clone();
    }
    let mut a = p.coeffs().to_vec();
    let n = a.len();
    let unit = if c.is_one() {
        Some(true)
    } else if (-c).is_one() {
        Some(false)
    } else {
        None
    };
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let (lo, hi) = a.split_at_mut(j + 1);
            match unit {
                Some(true) => lo[j] += &hi[0],
                Some(false) => lo[j] -= &hi[0],
                None => lo[j] += c * &hi[0],
            }
        }
    }
    IntPoly::new(a)
}

/// Positive multiple of `p(a + h*y)` as an integer polynomial in `y`.
fn affine_image(p: &IntPoly, a: &BigRat, h: &BigRat) -> (IntPoly, BigInt) {
    let Some(d) = p.degree() else {
        return (IntPoly::zero(), BigInt::one());
    };
    let den = a.denom().lcm(h.denom());
    let big_a = a.numer() * (&den / a.denom());
    let big_h = h.numer() * (&den / h.denom());
    // r(x) = den^d p(x/den)
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut dpow = BigInt::one();
    let mut tmp = vec![BigInt::zero(); d + 1];
    for i in (0..=d).rev() {
        tmp[i] = &p.coeffs()[i] * &dpow;
        dpow *= &den;
    }
    coeffs.extend(tmp);
    let shifted = taylor_shift_int(&IntPoly::new(coeffs), &big_a);
    let mut hpow = BigInt::one();
    let mut out = Vec::with_capacity(d + 1);
    for c in shifted.coeffs() {
        out.push(c * &hpow);
        hpow *= &big_h;
    }
    // den^d, the positive factor dropped from the result
    let scale = num_traits::pow(den, d);
    (IntPoly::new(out), scale)
}

/// Coefficients `u_j` with `p(t) = sum_j u_j (t - c)^j`, exactly.
pub fn shift_basis(p: &IntPoly, c: &BigRat) -> Vec<BigRat> {
    let (img, scale) = affine_image(p, c, &BigRat::one());
    img.coeffs()
        .iter()
        .map(|u| BigRat::new(u.clone(), scale.clone()))
        .collect()
}

/// Inverse of [`shift_basis`]: monomial coefficients of `sum_j u_j (t - c)^j`.
pub fn shift_basis_back(u: &[BigRat], c: &BigRat) -> Vec<BigRat> {
    // Horner in the shifted basis: acc = acc*(t - c) + u_j
    let mut acc: Vec<BigRat> = Vec::new();
    for uj in u.iter().rev() {
        let mut next = vec![BigRat::zero(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * c;
        }
        next[0] += uj;
        acc = next;
    }
    while acc.last().is_some_and(|x| x.is_zero()) {
        acc.pop();
    }
    acc
}

/// Which side of a finite point a half-line extends to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Above,
    Below,
}

/// Integer polynomial `R` whose positive roots correspond one-to-one to the
/// roots of `p` in the open interval `(lo, hi)`, where `None` stands for an
/// infinite endpoint. At least one endpoint must be finite.
///
/// Finite interval: `R(x) = (1+x)^d p1(1/(1+x))` with `p1(y) = p(lo + (hi-lo)y)`.
/// Half-lines: `p(lo + x)` or `p(hi - x)`. Each result is a positive multiple,
/// so sign variations of its coefficients bound the root count (Descartes).
pub fn mobius_to_positive_axis(
    p: &IntPoly,
    lo: Option<&BigRat>,
    hi: Option<&BigRat>,
) -> Option<IntPoly> {
    match (lo, hi) {
        (Some(a), Some(b)) => {
            let (p1, _) = affine_image(p, a, &(b - a));
            let d = p.degree()?;
            let rev = p1.reversal(d).ok()?;
            Some(taylor_shift_int(&rev, &BigInt::one()))
        }
        (Some(a), None) => Some(half_line_image(p, a, HalfLine::Above)),
        (None, Some(b)) => Some(half_line_image(p, b, HalfLine::Below)),
        (None, None) => None,
    }
}

fn half_line_image(p: &IntPoly, at: &BigRat, side: HalfLine) -> IntPoly {
    let h = match side {
        HalfLine::Above => BigRat::one(),
        HalfLine::Below => -BigRat::one(),
    };
    affine_image(p, at, &h).0
}

/// Number of sign changes in the coefficient sequence, zeros skipped.
pub fn sign_variations(coeffs: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let s = if c.is_positive() { 1 } else { -1 };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, rat_int};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn rats(v: &[i64]) -> Vec<BigRat> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn shifts() {
        assert_eq!(shift_basis(&p(&[0, 0, 1]), &rat_int(1)), rats(&[1, 2, 1]));
        assert_eq!(shift_basis(&p(&[-1, 1]), &rat_int(1)), rats(&[0, 1]));
        assert_eq!(taylor_shift_int(&p(&[0, 0, 1]), &BigInt::from(-3)), p(&[9, -6, 1]));
    }

    #[test]
    fn rational_shift_roundtrip() {
        let poly = p(&[3, -1, 4, 1, -5, 9]);
        let c = rat(-2, 3);
        let u = shift_basis(&poly, &c);
        let back = shift_basis_back(&u, &c);
        assert_eq!(back, rats(&[3, -1, 4, 1, -5, 9]));
    }

    #[test]
    fn mobius_counts() {
        // (q - 1/2)(q + 1/2)(q - 3): one root in (0,1), two in (-1,1)
        let poly = &(&p(&[-1, 2]) * &p(&[1, 2])) * &p(&[-3, 1]);
        let img = mobius_to_positive_axis(&poly, Some(&rat_int(0)), Some(&rat_int(1))).unwrap();
        assert_eq!(sign_variations(img.coeffs()), 1);
        let img = mobius_to_positive_axis(&poly, Some(&rat_int(-1)), Some(&rat_int(1))).unwrap();
        assert_eq!(sign_variations(img.coeffs()), 2);
        let img = mobius_to_positive_axis(&poly, Some(&rat_int(4)), None).unwrap();
        assert_eq!(sign_variations(img.coeffs()), 0);
        let img = mobius_to_positive_axis(&poly, None, Some(&rat(-1, 2))).unwrap();
        assert_eq!(sign_variations(img.coeffs()), 0);
    }
}
