//! q-binomials, the MacMahon q-Catalan polynomial (product formula and Dyck
//! path enumeration), its special values and central-coefficient parity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{binomial, BigRat, IntPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcoreError {
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("special value {field} mismatch: computed {computed}, closed form {expected}")]
    MismatchError {
        field: &'static str,
        computed: String,
        expected: String,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `p * (1 - q^k)` without a general multiplication.
pub(crate) fn mul_one_minus_pow(p: &IntPoly, k: usize) -> IntPoly {
    p - &p.shift_up(k)
}

/// Gaussian binomial `[m choose k]_q`.
pub fn q_binomial(m: i64, k: i64) -> Result<IntPoly, QcoreError> {
    if k < 0 || m < 0 || k > m {
        return Err(QcoreError::DomainError(format!(
            "q_binomial needs 0 <= k <= m, got m = {m}, k = {k}"
        )));
    }
    let k = k.min(m - k) as usize;
    let m = m as usize;
    // After step i the running value is [m-k+i choose i]_q, always a polynomial.
    let mut acc = IntPoly::one();
    for i in 1..=k {
        acc = mul_one_minus_pow(&acc, m - k + i).divexact(&IntPoly::one_minus_pow(i))?;
    }
    Ok(acc)
}

/// Catalan numbers `C_0..=C_max` by the convolution recurrence.
pub fn catalan_numbers(max: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for m in 0..max {
        let next = (0..=m).fold(BigInt::zero(), |acc, i| acc + &c[i] * &c[m - i]);
        c.push(next);
    }
    c
}

pub fn catalan(n: usize) -> BigInt {
    catalan_numbers(n).pop().unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCatalanRecord {
    pub n: usize,
    pub poly: IntPoly,
    pub degree: usize,
    pub palindromic: bool,
    pub catalan_at_1: BigInt,
}

/// The q-Catalan polynomial `prod_{j=2}^n (1 - q^{n+j}) / (1 - q^j)`.
///
/// All numerator factors are multiplied first; every prefix of the
/// denominator product then divides exactly (cyclotomic counting).
pub fn qcatalan_poly(n: usize) -> Result<IntPoly, PolyError> {
    let mut acc = IntPoly::one();
    for j in 2..=n {
        acc = mul_one_minus_pow(&acc, n + j);
    }
    for j in 2..=n {
        acc = acc.divexact(&IntPoly::one_minus_pow(j))?;
    }
    Ok(acc)
}

pub fn qcatalan(n: usize) -> Result<QCatalanRecord, QcoreError> {
    let poly = qcatalan_poly(n)?;
    let degree = poly.degree().unwrap_or(0);
    let palindromic = poly.is_palindromic();
    let catalan_at_1 = poly.eval_int(&BigInt::one());
    let rec = QCatalanRecord {
        n,
        poly,
        degree,
        palindromic,
        catalan_at_1,
    };
    check_record(&rec)?;
    Ok(rec)
}

fn mismatch(field: &'static str, computed: impl ToString, expected: impl ToString) -> QcoreError {
    QcoreError::MismatchError {
        field,
        computed: computed.to_string(),
        expected: expected.to_string(),
    }
}

fn check_record(rec: &QCatalanRecord) -> Result<(), QcoreError> {
    let n = rec.n;
    if n >= 2 && rec.degree != n * (n - 1) {
        return Err(mismatch("degree", rec.degree, n * (n - 1)));
    }
    if !rec.palindromic {
        return Err(mismatch("palindromic", false, true));
    }
    if rec.poly.coeffs().iter().any(|c| c < &BigInt::zero()) {
        return Err(mismatch("nonnegative", false, true));
    }
    if n >= 2 {
        let zeros: Vec<usize> = (0..=rec.degree)
            .filter(|&i| rec.poly.coeff(i).is_zero())
            .collect();
        let mut expected = vec![1, rec.degree - 1];
        expected.dedup();
        if zeros != expected {
            return Err(mismatch("zero_coefficients", format!("{zeros:?}"), format!("{expected:?}")));
        }
    }
    let cat = binomial(2 * n as i64, n as i64) / BigInt::from(n + 1);
    if rec.catalan_at_1 != cat {
        return Err(mismatch("catalan_at_1", &rec.catalan_at_1, cat));
    }
    Ok(())
}

const DYCK_MAX: usize = 12;

/// Sum of `q^maj(w)` over Dyck words of length `2n`, where `maj` adds the
/// 1-indexed position `i` of every descent `w_i = D, w_{i+1} = U`.
pub fn qcatalan_dyck_oracle(n: usize) -> Result<IntPoly, QcoreError> {
    if !(2..=DYCK_MAX).contains(&n) {
        return Err(QcoreError::DomainError(format!(
            "Dyck enumeration supports 2 <= n <= {DYCK_MAX}, got {n}"
        )));
    }
    let mut counts = vec![0u64; n * (n - 1) + 1];
    // (position filled so far, ups, downs, last step was down, maj)
    fn walk(n: usize, len: usize, ups: usize, downs: usize, last_down: bool, maj: usize, counts: &mut [u64]) {
        if len == 2 * n {
            counts[maj] += 1;
            return;
        }
        if ups < n {
            // a valley sits at position `len` when the previous step was D
            let add = if last_down { len } else { 0 };
            walk(n, len + 1, ups + 1, downs, false, maj + add, counts);
        }
        if downs < ups {
            walk(n, len + 1, ups, downs + 1, true, maj, counts);
        }
    }
    walk(n, 0, 0, 0, false, 0, &mut counts);
    Ok(IntPoly::new(counts.into_iter().map(BigInt::from).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialValues {
    pub at0: BigInt,
    pub d1_at0: BigInt,
    pub d2_at0: BigInt,
    pub at1: BigInt,
    pub d1_at1: BigInt,
    pub at_neg1: BigInt,
    pub d1_at_neg1: BigInt,
    pub d2_at_neg1: BigInt,
}

/// The eight special values, each checked against its closed form.
pub fn special_values(n: usize) -> Result<SpecialValues, QcoreError> {
    if n < 2 {
        return Err(QcoreError::DomainError(format!("special_values needs n >= 2, got {n}")));
    }
    let c = qcatalan_poly(n)?;
    let d1 = c.derivative();
    let d2 = d1.derivative();
    let one = BigInt::one();
    let m1 = -BigInt::one();
    let zero = BigInt::zero();
    let sv = SpecialValues {
        at0: c.eval_int(&zero),
        d1_at0: d1.eval_int(&zero),
        d2_at0: d2.eval_int(&zero),
        at1: c.eval_int(&one),
        d1_at1: d1.eval_int(&one),
        at_neg1: c.eval_int(&m1),
        d1_at_neg1: d1.eval_int(&m1),
        d2_at_neg1: d2.eval_int(&m1),
    };

    let ni = n as i64;
    let cat = catalan(n);
    let b2 = binomial(ni, 2);
    let mid = binomial(ni, ni / 2);
    let nb = BigInt::from(ni);
    let poly_factor: BigInt = if n % 2 == 0 {
        &nb * &nb * (&nb + 1) * (&nb * 3 - 5)
    } else {
        (&nb * &nb - 1) * (&nb * &nb * 3 - &nb * 2 - 2)
    };
    let twelfth: BigInt = &mid * poly_factor;
    let (d2m1, rem) = twelfth.div_rem(&BigInt::from(12));
    if !rem.is_zero() {
        return Err(mismatch("d2_at_neg1", &sv.d2_at_neg1, format!("{twelfth}/12")));
    }
    let expected = [
        ("at0", &sv.at0, BigInt::one()),
        ("d1_at0", &sv.d1_at0, BigInt::zero()),
        ("d2_at0", &sv.d2_at0, BigInt::from(2)),
        ("at1", &sv.at1, cat.clone()),
        ("d1_at1", &sv.d1_at1, &b2 * &cat),
        ("at_neg1", &sv.at_neg1, mid.clone()),
        ("d1_at_neg1", &sv.d1_at_neg1, -(&b2 * &mid)),
        ("d2_at_neg1", &sv.d2_at_neg1, d2m1),
    ];
    for (field, got, want) in expected {
        if *got != want {
            return Err(mismatch(field, got, want));
        }
    }
    Ok(sv)
}

/// `(1 - q^{n+1}) C_n = (1 + q^n)(1 - q^{2n-1}) C_{n-1}` as polynomials.
pub fn f_recurrence_check(n: usize) -> Result<bool, QcoreError> {
    if n < 1 {
        return Err(QcoreError::DomainError("f_recurrence_check needs n >= 1".into()));
    }
    let cn = qcatalan_poly(n)?;
    let cprev = qcatalan_poly(n - 1)?;
    let lhs = mul_one_minus_pow(&cn, n + 1);
    let rhs = mul_one_minus_pow(&(&cprev + &cprev.shift_up(n)), 2 * n - 1);
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralParity {
    pub n: usize,
    pub central_coeff_odd: bool,
    pub is_mersenne: bool,
    pub nu_catalan: u32,
    pub s_binary: u32,
    /// 2-adic valuation of `Catalan(n)` read off the integer itself.
    pub nu_direct: u32,
    /// Parity of `C_n(1)`, which matches the central coefficient by palindromy.
    pub catalan_odd: bool,
}

pub fn two_adic_valuation(x: &BigInt) -> u32 {
    x.trailing_zeros().map(|z| z as u32).unwrap_or(0)
}

pub fn central_parity(n: usize) -> Result<CentralParity, QcoreError> {
    if n < 2 {
        return Err(QcoreError::DomainError(format!("central_parity needs n >= 2, got {n}")));
    }
    let c = qcatalan_poly(n)?;
    let central = c.coeff(n * (n - 1) / 2);
    let cat = c.eval_int(&BigInt::one());
    let s_binary = (n + 1).count_ones();
    Ok(CentralParity {
        n,
        central_coeff_odd: central.is_odd(),
        is_mersenne: (n + 1).is_power_of_two(),
        nu_catalan: s_binary - 1,
        s_binary,
        nu_direct: two_adic_valuation(&cat),
        catalan_odd: cat.is_odd(),
    })
}

/// `C_n(x)` at a rational point, handy for reporting.
pub fn qcatalan_value(n: usize, x: &BigRat) -> Result<BigRat, QcoreError> {
    Ok(qcatalan_poly(n)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn q_binomials() {
        assert_eq!(q_binomial(2, 1).unwrap(), p(&[1, 1]));
        assert_eq!(q_binomial(4, 2).unwrap(), p(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(7, 0).unwrap(), IntPoly::one());
        assert!(matches!(q_binomial(3, 4), Err(QcoreError::DomainError(_))));
        assert!(matches!(q_binomial(3, -1), Err(QcoreError::DomainError(_))));
    }

    #[test]
    fn small_catalans() {
        assert_eq!(qcatalan(2).unwrap().poly, p(&[1, 0, 1]));
        assert_eq!(qcatalan(3).unwrap().poly, p(&[1, 0, 1, 1, 1, 0, 1]));
        assert_eq!(qcatalan(4).unwrap().catalan_at_1, BigInt::from(14));
        assert_eq!(qcatalan(0).unwrap().poly, IntPoly::one());
        assert_eq!(qcatalan(1).unwrap().poly, IntPoly::one());
    }

    #[test]
    fn matches_binomial_quotient() {
        // C_n = [2n choose n]_q / [n+1]_q
        for n in 2..8 {
            let b = q_binomial(2 * n as i64, n as i64).unwrap();
            let qint = IntPoly::new(vec![BigInt::one(); n + 1]);
            assert_eq!(b.divexact(&qint).unwrap(), qcatalan_poly(n).unwrap());
        }
    }

    #[test]
    fn dyck_small_cases() {
        assert_eq!(qcatalan_dyck_oracle(2).unwrap(), p(&[1, 0, 1]));
        assert_eq!(qcatalan_dyck_oracle(3).unwrap(), p(&[1, 0, 1, 1, 1, 0, 1]));
        assert!(qcatalan_dyck_oracle(1).is_err());
        assert!(qcatalan_dyck_oracle(13).is_err());
    }

    #[test]
    fn catalan_recurrence() {
        let c = catalan_numbers(10);
        let want = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        assert_eq!(c, want.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    }

    #[test]
    fn special_value_examples() {
        assert_eq!(special_values(2).unwrap().d2_at_neg1, BigInt::from(2));
        assert_eq!(special_values(3).unwrap().d2_at_neg1, BigInt::from(38));
        assert_eq!(special_values(4).unwrap().d1_at1, BigInt::from(84));
    }

    #[test]
    fn recurrence() {
        for n in [1, 2, 3, 10] {
            assert!(f_recurrence_check(n).unwrap());
        }
    }

    #[test]
    fn parity_examples() {
        let r = central_parity(3).unwrap();
        assert!(r.central_coeff_odd && r.is_mersenne);
        let r = central_parity(4).unwrap();
        assert!(!r.central_coeff_odd && !r.is_mersenne);
        assert_eq!(r.nu_catalan, 1);
        let r = central_parity(7).unwrap();
        assert!(r.central_coeff_odd && r.is_mersenne);
    }
}
