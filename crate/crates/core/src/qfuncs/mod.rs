//! The logarithmic derivative `Q_n = C_n'/C_n` and the rational functions
//! derived from it, plus the exact identities tying them together.

mod conjecture;
mod lemmas;

pub use conjecture::{conjecture_x_expansion, l3_t_expansion, L3Expansion, XExpansion};
pub use lemmas::{
    ak_identity_check, alpha_coefficients, build_rn, k3_xm_check, u1_alpha_check, K3XmRecord,
    RnRecord, U1AlphaRecord, AK_PUBLISHED,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactpoly::{binomial, BigRat, CycloDen, CycloSum, IntPoly, PolyError, RatFun};
use crate::qcore::{catalan, qcatalan_poly, QcoreError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QfuncsError {
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("{which} is defined for {expected} n only, got n = {n}")]
    ParityError {
        which: &'static str,
        expected: &'static str,
        n: usize,
    },
    #[error("{what}: {detail}")]
    MismatchError { what: &'static str, detail: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

fn domain(cond: bool, msg: impl FnOnce() -> String) -> Result<(), QfuncsError> {
    if cond {
        Ok(())
    } else {
        Err(QfuncsError::DomainError(msg()))
    }
}

fn mismatch(what: &'static str, detail: impl Into<String>) -> QfuncsError {
    QfuncsError::MismatchError {
        what,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QnBundle {
    pub n: usize,
    pub qn: RatFun,
    pub fn_: RatFun,
    pub q2_qn_prime: RatFun,
    pub nn_num: IntPoly,
    pub nn_den: IntPoly,
}

/// `Q_n` from its partial fractions `j q^{j-1} / (1 - q^j)`.
pub fn qn_from_partial_fractions(n: usize) -> RatFun {
    let mut sum = CycloSum::new();
    let term = |j: usize| IntPoly::monomial(j as i64, j - 1);
    for j in 2..=n {
        sum.add(term(j), &CycloDen::one_minus_pow(j));
    }
    for j in n + 2..=2 * n {
        sum.sub(term(j), &CycloDen::one_minus_pow(j));
    }
    sum.finish()
}

/// `F_n = binom(n,2) - q Q_n`.
pub fn fn_from_qn(n: usize, qn: &RatFun) -> RatFun {
    &RatFun::constant(binomial(n as i64, 2)) - &qn.mul_monomial(1)
}

pub fn build_qn(n: usize) -> Result<QnBundle, QfuncsError> {
    domain(n >= 2, || format!("build_qn needs n >= 2, got {n}"))?;
    let qn = qn_from_partial_fractions(n);
    let c = qcatalan_poly(n)?;
    let dc = c.derivative();
    if &dc * qn.den() != &c * qn.num() {
        return Err(mismatch("C_n' = C_n Q_n", format!("fails at n = {n}")));
    }
    let fn_ = fn_from_qn(n, &qn);
    let q2_qn_prime = qn.derivative().mul_monomial(2);
    // Q_n' = (C_n'' C_n - C_n'^2) / C_n^2, cleared
    let lhs = &(&(&c * &dc.derivative()) - &(&dc * &dc)) * q2_qn_prime.den();
    let rhs = &(&c * &c) * &q2_qn_prime.num().clone();
    if lhs.shift_up(2) != rhs {
        return Err(mismatch("Q_n' via C_n'' C_n - C_n'^2", format!("fails at n = {n}")));
    }
    for x in [-1, 0, 1] {
        if q2_qn_prime.den().eval_int(&BigInt::from(x)).is_zero() {
            return Err(mismatch("N_n denominator", format!("vanishes at {x} for n = {n}")));
        }
    }
    Ok(QnBundle {
        n,
        nn_num: q2_qn_prime.num().clone(),
        nn_den: q2_qn_prime.den().clone(),
        qn,
        fn_,
        q2_qn_prime,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialQValues {
    pub q_at_neg1: BigRat,
    pub qprime_at_neg1: BigRat,
    /// The closed form `-binom(n,2)`; must agree.
    pub q_expected: BigRat,
    /// The constant `2/Catalan(n)` claimed for `Q_n'(-1)`; reported, not asserted.
    pub qprime_claimed: BigRat,
    pub qprime_matches_claim: bool,
}

pub fn special_q_values(n: usize) -> Result<SpecialQValues, QfuncsError> {
    domain(n >= 2, || format!("special_q_values needs n >= 2, got {n}"))?;
    let qn = qn_from_partial_fractions(n);
    let m1 = -BigRat::one();
    let q_at = qn.eval(&m1)?;
    let qp_at = qn.derivative().eval(&m1)?;
    let q_expected = BigRat::from_integer(-binomial(n as i64, 2));
    if q_at != q_expected {
        return Err(mismatch("Q_n(-1)", format!("{q_at} != {q_expected}")));
    }
    let qprime_claimed = BigRat::new(BigInt::from(2), catalan(n));
    Ok(SpecialQValues {
        qprime_matches_claim: qp_at == qprime_claimed,
        q_at_neg1: q_at,
        qprime_at_neg1: qp_at,
        q_expected,
        qprime_claimed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityResults {
    /// `q Q_n(q) + q^{-1} Q_n(1/q) = N`.
    pub lemma22: bool,
    /// `q^{N-3} C_n''(1/q) = q C_n''(q) + (N-1)(N q^{-1} C_n - 2 C_n')`.
    pub lemma23: bool,
    /// `q^{N-2} C_n''(1/q) = q^2 C_n''(q) + 2(N-1) C_n F_n`.
    pub eq22: bool,
}

impl IdentityResults {
    pub fn all(&self) -> bool {
        self.lemma22 && self.lemma23 && self.eq22
    }
}

pub fn identity_suite(n: usize) -> Result<IdentityResults, QfuncsError> {
    domain(n >= 2, || format!("identity_suite needs n >= 2, got {n}"))?;
    let big_n = n * (n - 1);
    let c = qcatalan_poly(n)?;
    let d1 = c.derivative();
    let d2 = d1.derivative();
    let qn = qn_from_partial_fractions(n);

    let lhs22 = &qn.mul_monomial(1) + &qn.substitute_reciprocal().mul_monomial(-1);
    let lemma22 = lhs22 == RatFun::constant(big_n as i64);

    // q^{N-2} C''(1/q) is the reversal of C'' at its degree N-2.
    let rev = d2.reversal(big_n - 2)?;
    let nm1 = BigInt::from(big_n as i64 - 1);
    // Second reflection identity, multiplied through by q.
    let rhs23 = &d2.shift_up(2)
        + &(&c.scale(&BigInt::from(big_n as i64)) - &d1.shift_up(1).scale(&BigInt::from(2)))
            .scale(&nm1);
    let lemma23 = rev == rhs23;

    let fn_ = fn_from_qn(n, &qn);
    let rhs = &RatFun::from_poly(d2.shift_up(2))
        + &(&RatFun::from_poly(c.scale(&(&nm1 * 2))) * &fn_);
    let eq22 = RatFun::from_poly(rev) == rhs;
    Ok(IdentityResults {
        lemma22,
        lemma23,
        eq22,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiFamily {
    pub j: usize,
    pub phi: RatFun,
}

fn phi_numerator(j: usize) -> IntPoly {
    // j q^j (q^j + j - 1)
    let jb = BigInt::from(j);
    &IntPoly::monomial(jb.clone(), 2 * j) + &IntPoly::monomial(&jb * (j - 1), j)
}

fn phi_den(j: usize) -> CycloDen {
    CycloDen::one_minus_pow(j).pow(2)
}

/// `phi_j = j q^j (q^j + j - 1) / (1 - q^j)^2`, with `q^2 Q_n' = sum_{2}^{n} phi_j - sum_{n+2}^{2n} phi_j`.
pub fn build_phi(j: usize) -> Result<PhiFamily, QfuncsError> {
    domain(j >= 2, || format!("build_phi needs j >= 2, got {j}"))?;
    let phi = RatFun::reduce(phi_numerator(j), IntPoly::one_minus_pow(j).pow(2))?;
    Ok(PhiFamily { j, phi })
}

/// `sum_i sign_i * phi_{j_i}` over a cyclotomic common denominator.
pub fn phi_combination(terms: &[(i64, usize)]) -> RatFun {
    let mut sum = CycloSum::new();
    for &(coef, j) in terms {
        sum.add(phi_numerator(j).scale(&BigInt::from(coef)), &phi_den(j));
    }
    sum.finish()
}

/// `q^2 Q_n'` as the `phi` partial-fraction sum; zero for `n <= 1`.
pub fn q2_qprime_phi_sum(n: usize) -> RatFun {
    if n < 2 {
        return RatFun::zero();
    }
    let mut terms: Vec<(i64, usize)> = (2..=n).map(|j| (1, j)).collect();
    terms.extend((n + 2..=2 * n).map(|j| (-1, j)));
    phi_combination(&terms)
}

/// `K_n = phi_n + phi_{n+1} - phi_{2n-1} - phi_{2n}` for even `n`.
pub fn build_kn(n: usize) -> Result<RatFun, QfuncsError> {
    if n % 2 != 0 {
        return Err(QfuncsError::ParityError {
            which: "K_n",
            expected: "even",
            n,
        });
    }
    domain(n >= 2, || format!("build_kn needs n >= 2, got {n}"))?;
    Ok(phi_combination(&[(1, n), (1, n + 1), (-1, 2 * n - 1), (-1, 2 * n)]))
}

/// `L_n = 2 phi_n + phi_{n-1} + phi_{n+1} - phi_{2n-3} - phi_{2n-2} - phi_{2n-1} - phi_{2n}` for odd `n`.
pub fn build_ln(n: usize) -> Result<RatFun, QfuncsError> {
    if n % 2 != 1 {
        return Err(QfuncsError::ParityError {
            which: "L_n",
            expected: "odd",
            n,
        });
    }
    domain(n >= 3, || format!("build_ln needs n >= 3, got {n}"))?;
    Ok(phi_combination(&[
        (2, n),
        (1, n - 1),
        (1, n + 1),
        (-1, 2 * n - 3),
        (-1, 2 * n - 2),
        (-1, 2 * n - 1),
        (-1, 2 * n),
    ]))
}

/// `q^2 Q_n'` from the reduced `Q_n` by the quotient rule (independent of the phi sums).
pub fn q2_qprime_by_derivative(n: usize) -> RatFun {
    if n < 2 {
        return RatFun::zero();
    }
    qn_from_partial_fractions(n).derivative().mul_monomial(2)
}

/// `K_n = q^2 Q_n' - q^2 Q_{n-1}'` (even n) or `L_n = q^2 Q_n' - q^2 Q_{n-2}'` (odd n).
pub fn telescoping_check(n: usize) -> Result<bool, QfuncsError> {
    let (target, prev) = if n % 2 == 0 {
        (build_kn(n)?, n - 1)
    } else {
        (build_ln(n)?, n - 2)
    };
    let diff = &q2_qprime_by_derivative(n) - &q2_qprime_by_derivative(prev);
    Ok(diff == target)
}

/// Term inequality `2j/(t^{-j} - t^j) > 2(n+j)/(t^{-(n+j)} - t^{n+j})` at `0 < t < 1`.
pub fn term_inequality_holds(n: usize, j: usize, t: &BigRat) -> bool {
    let term = |k: usize| {
        let tk = num_traits::pow(t.clone(), k);
        BigRat::from_integer(BigInt::from(2 * k)) / (tk.recip() - &tk)
    };
    term(j) > term(n + j)
}

/// `F_n(-q) - F_n(q)`, nonnegative on `(0,1)` per the parity split.
pub fn parity_split(n: usize) -> Result<RatFun, QfuncsError> {
    domain(n >= 2, || format!("parity_split needs n >= 2, got {n}"))?;
    let f = fn_from_qn(n, &qn_from_partial_fractions(n));
    Ok(&f.negate_variable() - &f)
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
    fn bundle_n2() {
        let b = build_qn(2).unwrap();
        assert_eq!(b.qn, rf(&[0, 2], &[1, 0, 1]));
        assert_eq!(b.fn_, rf(&[1, 0, -1], &[1, 0, 1]));
        assert_eq!(b.fn_.eval(&rat_int(0)).unwrap(), rat_int(1));
        assert_eq!(b.q2_qn_prime, rf(&[0, 0, 2, 0, -2], &[1, 0, 2, 0, 1]));
    }

    #[test]
    fn special_q() {
        let s = special_q_values(2).unwrap();
        assert_eq!(s.q_at_neg1, rat_int(-1));
        assert_eq!(s.qprime_at_neg1, rat_int(0));
        assert!(!s.qprime_matches_claim);
        assert_eq!(special_q_values(3).unwrap().q_at_neg1, rat_int(-3));
    }

    #[test]
    fn identities_small() {
        for n in 2..=6 {
            assert!(identity_suite(n).unwrap().all(), "n = {n}");
        }
    }

    #[test]
    fn phi_forms() {
        assert_eq!(build_phi(2).unwrap().phi, rf(&[0, 0, 2, 0, 2], &[1, 0, -2, 0, 1]));
        assert_eq!(
            build_phi(3).unwrap().phi,
            rf(&[0, 0, 0, 6, 0, 0, 3], &[1, 0, 0, -2, 0, 0, 1])
        );
        assert_eq!(phi_combination(&[(1, 5)]), build_phi(5).unwrap().phi);
    }

    #[test]
    fn k2_and_parity_errors() {
        assert_eq!(build_kn(2).unwrap(), rf(&[0, 0, 2, 0, -2], &[1, 0, 2, 0, 1]));
        assert!(matches!(build_kn(3), Err(QfuncsError::ParityError { .. })));
        assert!(matches!(build_ln(4), Err(QfuncsError::ParityError { .. })));
    }

    #[test]
    fn k2_in_t() {
        // K_2(-1/t) = 2(t^2 - 1)/(t^2 + 1)^2
        let k = build_kn(2).unwrap().substitute_neg_reciprocal();
        assert_eq!(k, rf(&[-2, 0, 2], &[1, 0, 2, 0, 1]));
    }

    #[test]
    fn telescoping_small() {
        for n in 3..=7 {
            assert!(telescoping_check(n).unwrap(), "n = {n}");
        }
        assert_eq!(build_ln(3).unwrap(), q2_qprime_by_derivative(3));
    }

    #[test]
    fn phi_sum_is_q2_qprime() {
        for n in 2..=6 {
            assert_eq!(q2_qprime_phi_sum(n), q2_qprime_by_derivative(n));
        }
    }

    #[test]
    fn term_inequality_samples() {
        for t in [rat(1, 10), rat(1, 2), rat(9, 10)] {
            for n in 2..=6 {
                for j in (3..=n).step_by(2) {
                    assert!(term_inequality_holds(n, j, &t));
                }
            }
        }
    }
}
