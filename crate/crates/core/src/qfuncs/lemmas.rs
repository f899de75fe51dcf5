//! Polynomials and constants from the positivity arguments for `Q_n'` on
//! `(0,1)` and for `K_n`: the split `R_n = R^(1) + R^(2)`, the coefficients
//! `alpha_j` of `U_n^(1)`, the auxiliary `5q^{3m} - (2m+1)q + 2m - 1` with
//! its bound sequence `x_m`, and the thirteen constants `a_k`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{domain, mismatch, q2_qprime_by_derivative, QfuncsError};
use crate::certify::{certify_positive, Interval};
use crate::exactpoly::{binomial, rat_int, shift_basis, BigRat, IntPoly, RatFun};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnRecord {
    pub n: usize,
    pub r1: RatFun,
    pub r2: RatFun,
    /// `(1 - q^{n+1})^2 (1 - q^{2n+1})^2`, the common denominator of `R^(1)` as displayed.
    pub r1_raw_den: IntPoly,
    /// `q^{n+1}(R1 + R2) = q^2 Q_{n+1}' - q^2 Q_n'`.
    pub identity_ok: bool,
}

/// `a (q^b + c) q^s / (1 - q^k)^2` as a reduced rational function.
fn sq_term(a: i64, s: usize, b: usize, c: i64, k: usize) -> RatFun {
    let num = &IntPoly::monomial(a, s + b) + &IntPoly::monomial(a * c, s);
    RatFun::reduce(num, IntPoly::one_minus_pow(k).pow(2)).expect("nonzero denominator")
}

pub fn build_rn(n: usize) -> Result<RnRecord, QfuncsError> {
    domain(n >= 2, || format!("build_rn needs n >= 2, got {n}"))?;
    let ni = n as i64;
    let r1 = &sq_term(ni + 1, 0, n + 1, ni, n + 1) - &sq_term(2 * ni + 1, n, 2 * n + 1, 2 * ni, 2 * n + 1);
    let r2 = &sq_term(ni + 2, 1, n + 2, ni + 1, n + 2)
        - &sq_term(2 * ni + 2, n + 1, 2 * n + 2, 2 * ni + 1, 2 * n + 2);
    let lhs = (&r1 + &r2).mul_monomial(ni + 1);
    let rhs = &q2_qprime_by_derivative(n + 1) - &q2_qprime_by_derivative(n);
    Ok(RnRecord {
        n,
        r1_raw_den: &IntPoly::one_minus_pow(n + 1).pow(2) * &IntPoly::one_minus_pow(2 * n + 1).pow(2),
        identity_ok: lhs == rhs,
        r1,
        r2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct U1AlphaRecord {
    pub n: usize,
    pub u1: IntPoly,
    pub alpha: Vec<BigInt>,
    pub matches: bool,
    pub pairing_ok: bool,
}

/// Expanded `U_n^(1)`: the displayed numerator divided exactly by `(1 - q)^4`.
pub fn u1_polynomial(n: usize) -> Result<IntPoly, QfuncsError> {
    let nb = BigInt::from(n);
    // (n+1)(q^{n+1} + n)(1 - q^{2n+1})^2
    let a = &(&IntPoly::monomial(&nb + 1, n + 1) + &IntPoly::constant(&nb * (&nb + 1)))
        * &IntPoly::one_minus_pow(2 * n + 1).pow(2);
    // (2n+1) q^n (q^{2n+1} + 2n)(1 - q^{n+1})^2
    let two_n1 = BigInt::from(2 * n + 1);
    let b = &(&IntPoly::monomial(two_n1.clone(), 3 * n + 1)
        + &IntPoly::monomial(&two_n1 * (2 * n), n))
        * &IntPoly::one_minus_pow(n + 1).pow(2);
    Ok((&a - &b).divexact(&IntPoly::one_minus_pow(1).pow(4))?)
}

/// `alpha_j` for `0 <= j <= 5n-1` from the eight-term binomial formula,
/// with `binom(a, 3) = 0` whenever `a < 3`.
pub fn alpha_coefficients(n: usize) -> Vec<BigInt> {
    let n = n as i64;
    let b3 = |a: i64| binomial(a, 3);
    (0..5 * n)
        .map(|j| {
            BigInt::from(n * (n + 1)) * b3(j + 3)
                - BigInt::from(2 * n * (2 * n + 1)) * b3(j - n + 3)
                + BigInt::from(n + 1) * b3(j - n + 2)
                + BigInt::from(2 * n * (3 * n + 1)) * b3(j - 2 * n + 2)
                - BigInt::from(2 * n + 1) * b3(j - 3 * n + 2)
                - BigInt::from(4 * n * n + 4 * n + 2) * b3(j - 3 * n + 1)
                + BigInt::from(n * n + 5 * n + 2) * b3(j - 4 * n + 1)
                - BigInt::from(n) * b3(j - 5 * n)
        })
        .collect()
}

pub fn u1_alpha_check(n: usize) -> Result<U1AlphaRecord, QfuncsError> {
    domain(n >= 2, || format!("u1_alpha_check needs n >= 2, got {n}"))?;
    let u1 = u1_polynomial(n)?;
    let alpha = alpha_coefficients(n);
    let matches = (0..alpha.len()).all(|j| u1.coeff(j) == alpha[j])
        && u1.degree() == Some(5 * n - 1);
    let top = 5 * n - 1;
    let paired = (0..2 * n).all(|j| alpha[j] >= -alpha[top - j].clone());
    let positive = (0..=3 * n - 2).all(|j| alpha[j].is_positive());
    Ok(U1AlphaRecord {
        n,
        u1,
        alpha,
        matches,
        pairing_ok: paired && positive,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct K3XmRecord {
    pub m: usize,
    pub k3: IntPoly,
    pub k3_positive: bool,
    pub x_m: BigRat,
    pub x_m_approx: f64,
    /// `x_m < 15/2`.
    pub below_bound: bool,
    /// `x_m > x_{m-1}`; `None` at `m = 1`.
    pub increasing: Option<bool>,
    /// `(3m(2m-1)/((2m+1)(3m-1)))^{3m-1} > (2m+1)/(15m)`, the inequality the
    /// bound on `x_m` is meant to imply.
    pub direct_inequality: bool,
}

pub fn x_m(m: usize) -> BigRat {
    let mi = BigInt::from(m);
    let base = BigRat::new(
        (&mi * 2 + 1) * (&mi * 3 - 1),
        &mi * 3 * (&mi * 2 - 1),
    );
    num_traits::pow(base, 3 * m)
}

pub fn k3_xm_check(m: usize) -> Result<K3XmRecord, QfuncsError> {
    domain(m >= 1, || "k3_xm_check needs m >= 1".to_string())?;
    let mi = m as i64;
    let mut c = vec![BigInt::zero(); 3 * m + 1];
    c[0] = BigInt::from(2 * mi - 1);
    c[1] = BigInt::from(-(2 * mi + 1));
    c[3 * m] += 5;
    let k3 = IntPoly::new(c);
    let cert = certify_positive(&k3, &Interval::open(rat_int(0), rat_int(1)), &[], "K3")
        .map_err(|e| mismatch("K3 certification", e.to_string()))?;
    let x = x_m(m);
    let increasing = (m > 1).then(|| x > x_m(m - 1));
    let mb = BigInt::from(m);
    let lhs = num_traits::pow(
        BigRat::new(&mb * 3 * (&mb * 2 - 1), (&mb * 2 + 1) * (&mb * 3 - 1)),
        3 * m - 1,
    );
    let direct = lhs > BigRat::new(&mb * 2 + 1, &mb * 15);
    Ok(K3XmRecord {
        m,
        k3,
        k3_positive: cert.is_positive(),
        x_m_approx: crate::exactpoly::rat_to_f64(&x),
        below_bound: x < BigRat::new(BigInt::from(15), BigInt::from(2)),
        x_m: x,
        increasing,
        direct_inequality: direct,
    })
}

pub const AK_PUBLISHED: [i64; 13] = [
    2225214522,
    9975561651,
    19501465967,
    22337785440,
    16851826471,
    8872479001,
    3355972074,
    921381440,
    182598704,
    25512480,
    2388160,
    134592,
    3456,
];

/// `T(m) (2m+3)(3m+2) / ((3m+3)(2m+1)) - 1` times `18 (m+1)^4 (2m+1)^7 (3m-1)^3`,
/// expanded in powers of `m - 3`. Must be a polynomial with the published coefficients.
pub fn ak_identity_check() -> Result<Vec<BigInt>, QfuncsError> {
    let m = IntPoly::from_i64s(&[0, 1]);
    let lin = |a: i64, b: i64| IntPoly::from_i64s(&[b, a]); // a m + b
    let w = RatFun::reduce(
        IntPoly::from_i64s(&[-1, 4, 8]),
        &(&lin(2, 1).pow(2) * &lin(1, 1)) * &lin(3, -1),
    )?;
    let poly = |p: IntPoly| RatFun::from_poly(p);
    let m_c1 = poly(m.clone());
    let m_c2 = RatFun::reduce(&m * &lin(1, -1), IntPoly::constant(2))?;
    let m_c3 = RatFun::reduce(&(&m * &lin(1, -1)) * &lin(1, -2), IntPoly::constant(6))?;
    let w2 = &w * &w;
    let w3 = &w2 * &w;
    let t = &(&(&RatFun::constant(1) - &(&m_c1 * &w)) + &(&m_c2 * &w2)) - &(&m_c3 * &w3);
    let ratio = RatFun::reduce(&lin(2, 3) * &lin(3, 2), &lin(3, 3) * &lin(2, 1))?;
    let expr = &(&t * &ratio) - &RatFun::constant(1);
    let clear = (&(&lin(1, 1).pow(4) * &lin(2, 1).pow(7)) * &lin(3, -1).pow(3)).scale(&BigInt::from(18));
    let cleared = &expr * &poly(clear);
    if !cleared.is_polynomial() {
        return Err(mismatch(
            "a_k identity",
            format!("cleared expression keeps denominator {}", cleared.den()),
        ));
    }
    let shifted = shift_basis(cleared.num(), &rat_int(3));
    let mut out = Vec::with_capacity(shifted.len());
    for (k, u) in shifted.iter().enumerate() {
        if !u.is_integer() {
            return Err(mismatch("a_k identity", format!("a_{k} = {u} is not an integer")));
        }
        out.push(u.to_integer());
    }
    if out.len() != AK_PUBLISHED.len() {
        return Err(mismatch(
            "a_k identity",
            format!("expected 13 coefficients, found {}", out.len()),
        ));
    }
    for (k, (got, want)) in out.iter().zip(AK_PUBLISHED).enumerate() {
        if *got != BigInt::from(want) {
            return Err(mismatch("a_k identity", format!("a_{k}: computed {got}, published {want}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct series oracle: coefficients of numerator * sum_k binom(k+3,3) q^k.
    fn u1_by_series(n: usize) -> Vec<BigInt> {
        let ni = n as i64;
        let mut num = vec![0i64; 5 * n + 4];
        num[0] += ni * (ni + 1);
        num[n] -= 2 * ni * (2 * ni + 1);
        num[n + 1] += ni + 1;
        num[2 * n + 1] += 2 * ni * (3 * ni + 1);
        num[3 * n + 1] -= 2 * ni + 1;
        num[3 * n + 2] -= 4 * ni * ni + 4 * ni + 2;
        num[4 * n + 2] += ni * ni + 5 * ni + 2;
        num[5 * n + 3] -= ni;
        (0..5 * n)
            .map(|j| {
                (0..=j)
                    .map(|i| BigInt::from(num[i]) * binomial((j - i) as i64 + 3, 3))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn u1_small() {
        let r = u1_alpha_check(2).unwrap();
        assert_eq!(r.u1.degree(), Some(9));
        assert_eq!(r.alpha[0], BigInt::from(6));
        assert!(r.matches && r.pairing_ok);
        for n in 2..6 {
            assert_eq!(alpha_coefficients(n), u1_by_series(n));
        }
    }

    #[test]
    fn rn_identity() {
        for n in 2..=4 {
            assert!(build_rn(n).unwrap().identity_ok);
        }
    }

    #[test]
    fn k3_m1() {
        let r = k3_xm_check(1).unwrap();
        assert_eq!(r.k3, IntPoly::from_i64s(&[1, -3, 0, 5]));
        assert!(r.k3_positive);
        assert_eq!(r.x_m, BigRat::from_integer(BigInt::from(8)));
        assert!(r.direct_inequality);
    }

    #[test]
    fn published_ak() {
        let a = ak_identity_check().unwrap();
        assert_eq!(a[0], BigInt::from(2225214522i64));
        assert_eq!(a[12], BigInt::from(3456));
    }
}
