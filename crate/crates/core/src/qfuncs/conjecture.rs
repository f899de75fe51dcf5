//! The odd-`n` function `L_n` seen through `t = -1/q`: the five-term
//! function `Y_{2m+1}(t) = L_n(t) + phi_{2n-1}(t)`, its cleared polynomial
//! `X_{2m+1}` expanded in powers of `t - 1`, and the `n = 3` expansion.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{build_ln, build_phi, domain, mismatch, QfuncsError};
use crate::exactpoly::{rat_int, shift_basis, BigRat, CycloDen, CycloSum, IntPoly, RatFun};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XExpansion {
    pub m: usize,
    pub x: IntPoly,
    /// Coefficients of `X` in powers of `t - 1`.
    pub u: Vec<BigRat>,
    /// Order of vanishing of `X` at `t = 1`.
    pub zero_order_at_one: usize,
    /// Every coefficient from index `zero_order_at_one` on is positive.
    pub all_positive: bool,
    pub all_nonnegative: bool,
    /// `Y_{2m+1}(t)` equals `L_n(-1/t) + phi_{2n-1}(-1/t)` exactly.
    pub matches_ln: bool,
}

/// `a t^k + b` as a polynomial.
fn binom_poly(a: i64, k: usize, b: i64) -> IntPoly {
    &IntPoly::monomial(a, k) + &IntPoly::constant(b)
}

/// `Y_{2m+1}(t)` from its five displayed summands.
pub fn y_function(m: usize) -> RatFun {
    let mi = m as i64;
    let mut s = CycloSum::new();
    s.add(
        binom_poly(4 * mi - 2, 4 * m - 1, -1).scale(&BigInt::from(4 * mi - 1)),
        &CycloDen::one_plus_pow(4 * m - 1).pow(2),
    );
    s.add(
        binom_poly(2 * mi - 1, 2 * m, -1).scale(&BigInt::from(2 * mi)),
        &CycloDen::one_plus_pow(2 * m).pow(2),
    );
    s.add(
        binom_poly(2 * mi + 1, 2 * m + 2, 1).scale(&BigInt::from(2 * mi + 2)),
        &CycloDen::one_minus_pow(2 * m + 2).pow(2),
    );
    s.sub(
        binom_poly(2 * mi, 2 * m + 1, -1).scale(&BigInt::from(2 * mi + 1)),
        &CycloDen::one_plus_pow(2 * m + 1).pow(2),
    );
    s.sub(
        binom_poly(2 * mi, 2 * m + 1, 1).scale(&BigInt::from(2 * mi + 1)),
        &CycloDen::one_minus_pow(2 * m + 1).pow(2),
    );
    s.finish()
}

fn clearing_factor(m: usize) -> IntPoly {
    let sq = |p: IntPoly| p.pow(2);
    let a = sq(IntPoly::one_plus_pow(4 * m - 1));
    let b = sq(IntPoly::one_minus_pow(4 * m + 2));
    let c = sq(IntPoly::one_minus_pow(2 * m + 2));
    let d = sq(IntPoly::one_plus_pow(2 * m));
    &(&a * &b) * &(&c * &d)
}

const X_MAX_M: usize = 20;

pub fn conjecture_x_expansion(m: usize) -> Result<XExpansion, QfuncsError> {
    domain((2..=X_MAX_M).contains(&m), || {
        format!("X expansion supports 2 <= m <= {X_MAX_M}, got {m}")
    })?;
    x_expansion_unchecked(m)
}

pub(crate) fn x_expansion_unchecked(m: usize) -> Result<XExpansion, QfuncsError> {
    let y = y_function(m);
    let n = 2 * m + 1;
    let via_ln = &build_ln(n)?.substitute_neg_reciprocal()
        + &build_phi(2 * n - 1)?.phi.substitute_neg_reciprocal();
    let cleared = &y * &RatFun::from_poly(clearing_factor(m));
    if !cleared.is_polynomial() {
        return Err(QfuncsError::Poly(crate::exactpoly::PolyError::NotDivisible));
    }
    let x = cleared.num().clone();
    let u = shift_basis(&x, &rat_int(1));
    let zero_order = u.iter().take_while(|c| c.is_zero()).count();
    let all_positive = u[zero_order..].iter().all(|c| c.is_positive());
    let all_nonnegative = u.iter().all(|c| !c.is_negative());
    Ok(XExpansion {
        m,
        x,
        u,
        zero_order_at_one: zero_order,
        all_positive,
        all_nonnegative,
        matches_ln: via_ln == y,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L3Expansion {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
    pub shifted: Vec<BigRat>,
}

/// `L_3(-1/t)` in canonical form and its numerator in powers of `t - 1`.
pub fn l3_t_expansion() -> Result<L3Expansion, QfuncsError> {
    let l3 = build_ln(3)?.substitute_neg_reciprocal();
    let shifted = shift_basis(l3.num(), &rat_int(1));
    if shifted.iter().any(|c| !c.is_positive()) {
        return Err(mismatch("L_3 expansion", "nonpositive coefficient in powers of t - 1"));
    }
    let (numerator, denominator) = l3.into_parts();
    Ok(L3Expansion {
        numerator,
        denominator,
        shifted,
    })
}
