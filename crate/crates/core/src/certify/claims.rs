//! Certificates for the concrete positivity claims about `C_n` and the
//! functions built from its logarithmic derivative.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::descartes::isolate;
use super::{certify_positive, CertifyError, Interval, PositivityCert};
use crate::exactpoly::{rat, rat_int, squarefree_part, BigRat, IntPoly, RatFun};
use crate::qcore::{q_binomial, qcatalan_poly};
use crate::qfuncs::{build_kn, build_ln, build_qn, build_rn, parity_split};

fn need_n(n: usize) -> Result<(), CertifyError> {
    if n >= 2 {
        Ok(())
    } else {
        Err(CertifyError::DomainError(format!("n must be at least 2, got {n}")))
    }
}

fn build_err(e: impl std::fmt::Display) -> CertifyError {
    CertifyError::Build(e.to_string())
}

/// Multiplicity of the root `r` of `p` (0 if not a root).
fn multiplicity(p: &IntPoly, r: &BigRat) -> usize {
    p.deflate_rational_root(r).0
}

/// Certifies a rational function positive on the interval. The denominator
/// must have no roots there; the numerator is certified after multiplying by
/// the denominator's sign. Zeros of the numerator at finite open endpoints
/// are measured and listed automatically, in front of `extra_zeros`.
pub fn certify_ratfun_positive(
    f: &RatFun,
    interval: &Interval,
    extra_zeros: &[(BigRat, usize)],
    target: &str,
) -> Result<PositivityCert, CertifyError> {
    let den = f.den();
    let den_roots = isolate(&squarefree_part(den), interval).count;
    if den_roots > 0 {
        return Err(CertifyError::DenominatorVanishes { target: target.to_string() });
    }
    let sample = interval.sample_point(&[]);
    let num = if den.sign_at(&sample) < 0 { -f.num().clone() } else { f.num().clone() };
    let mut zeros = Vec::new();
    for (end, open) in [(&interval.lo, interval.lo_open), (&interval.hi, interval.hi_open)] {
        if let (Some(x), true) = (end, open) {
            let m = multiplicity(&num, x);
            if m > 0 {
                zeros.push((x.clone(), m));
            }
        }
    }
    zeros.extend(extra_zeros.iter().cloned());
    certify_positive(&num, interval, &zeros, target)
}

/// `C_n'' > 0` on the whole real line.
pub fn certify_convexity(n: usize) -> Result<PositivityCert, CertifyError> {
    need_n(n)?;
    let c = qcatalan_poly(n).map_err(build_err)?;
    certify_positive(&c.nth_derivative(2), &Interval::real_line(), &[], &format!("Cn_second_derivative/{n}"))
}

/// `F_n > 0` on `(-1, 1)`; the numerator's zeros at `+-1` are factored out
/// with their measured multiplicities.
pub fn certify_fn(n: usize) -> Result<PositivityCert, CertifyError> {
    need_n(n)?;
    let b = build_qn(n).map_err(build_err)?;
    certify_ratfun_positive(
        &b.fn_,
        &Interval::open(rat_int(-1), rat_int(1)),
        &[],
        &format!("Fn/{n}"),
    )
}

/// `q^2 Q_n' > 0` on `(0, 1)` via its numerator `N_n`, the factor `q^2` listed.
pub fn certify_qprime(n: usize) -> Result<PositivityCert, CertifyError> {
    need_n(n)?;
    let b = build_qn(n).map_err(build_err)?;
    certify_ratfun_positive(
        &b.q2_qn_prime,
        &Interval::open(rat_int(0), rat_int(1)),
        &[],
        &format!("Qprime/{n}"),
    )
}

/// Both parts `R^(1)`, `R^(2)` of the split of `q^2 Q_{n+1}' - q^2 Q_n'` positive on `(0, 1)`.
pub fn certify_r_parts(n: usize) -> Result<(PositivityCert, PositivityCert), CertifyError> {
    need_n(n)?;
    let r = build_rn(n).map_err(build_err)?;
    let iv = Interval::open(rat_int(0), rat_int(1));
    Ok((
        certify_ratfun_positive(&r.r1, &iv, &[], &format!("R1/{n}"))?,
        certify_ratfun_positive(&r.r2, &iv, &[], &format!("R2/{n}"))?,
    ))
}

/// `K_n` (even `n`) or `L_n` (odd `n`) positive on `(-1, 0)`, the zero at
/// `q = 0` factored out.
pub fn certify_kn_ln(n: usize) -> Result<PositivityCert, CertifyError> {
    need_n(n)?;
    let (f, name) = if n % 2 == 0 {
        (build_kn(n).map_err(build_err)?, "Kn")
    } else {
        (build_ln(n).map_err(build_err)?, "Ln")
    };
    certify_ratfun_positive(&f, &Interval::open(rat_int(-1), rat_int(0)), &[], &format!("{name}/{n}"))
}

/// `-C_n' > 0` on `(-inf, -1)`, so `C_n` decreases there.
pub fn certify_decreasing_left(n: usize) -> Result<PositivityCert, CertifyError> {
    need_n(n)?;
    let c = qcatalan_poly(n).map_err(build_err)?;
    certify_positive(&-c.derivative(), &Interval::below(rat_int(-1)), &[], &format!("neg_Cn_prime/{n}"))
}

/// `F_n(-t) - F_n(t) > 0` on `(0, 1)`. `None` when the difference is
/// identically zero (`F_2` is even), which settles `>= 0` trivially.
pub fn certify_parity_split(n: usize) -> Result<Option<PositivityCert>, CertifyError> {
    need_n(n)?;
    let f = parity_split(n).map_err(build_err)?;
    if f.is_zero() {
        return Ok(None);
    }
    let iv = Interval::open(rat_int(0), rat_int(1));
    certify_ratfun_positive(&f, &iv, &[], &format!("parity_split/{n}")).map(Some)
}

const GRID_LEVELS: [i64; 5] = [16, 64, 256, 1024, 4096];

/// Rational `q` in `(-1, 0)` with `d^2/dq^2 [2n choose n]_q < 0`, found by
/// sampling ever finer dyadic grids, then walking toward the most negative
/// neighbour by bisection. `None` if no grid point is negative.
pub fn qbinomial_nonconvexity_witness(n: usize) -> Option<BigRat> {
    if n < 2 {
        return None;
    }
    let d2 = q_binomial(2 * n as i64, n as i64).ok()?.nth_derivative(2);
    for &den in &GRID_LEVELS {
        let hit = (1..den).map(|k| rat(-k, den)).find(|x| d2.sign_at(x) < 0);
        if let Some(x) = hit {
            return Some(refine_down(&d2, x, den));
        }
    }
    None
}

/// Bisects between `x` and its grid neighbours, keeping the smaller value.
fn refine_down(p: &IntPoly, mut x: BigRat, den: i64) -> BigRat {
    let mut step = BigRat::new(BigInt::one(), BigInt::from(den));
    let two = BigRat::from_integer(BigInt::from(2));
    for _ in 0..16 {
        step = step / &two;
        let best = [&x - &step, x.clone(), &x + &step]
            .into_iter()
            .filter(|c| *c > rat_int(-1) && *c < BigRat::zero())
            .min_by(|a, b| p.eval(a).cmp(&p.eval(b)))
            .expect("x itself qualifies");
        x = best;
    }
    debug_assert!(p.eval(&x).is_negative());
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::Verdict;

    #[test]
    fn convexity_small() {
        for n in 2..=6 {
            let c = certify_convexity(n).unwrap();
            assert_eq!(c.verdict, Verdict::PositiveStrict, "n = {n}");
            assert!(c.replay());
        }
        assert_eq!(
            certify_convexity(3).unwrap().poly,
            IntPoly::from_i64s(&[2, 6, 12, 0, 30])
        );
    }

    #[test]
    fn fn_measures_endpoint_zeros() {
        let c = certify_fn(2).unwrap();
        assert_eq!(c.verdict, Verdict::PositiveStrict);
        assert_eq!(c.factored_zeros, vec![(rat_int(-1), 1), (rat_int(1), 1)]);
        assert!(c.replay());
    }

    #[test]
    fn qprime_and_kn_small() {
        let c = certify_qprime(2).unwrap();
        // N_2 = 2q^2(1 - q^2) also vanishes at the upper end
        assert_eq!(c.factored_zeros, vec![(rat_int(0), 2), (rat_int(1), 1)]);
        assert!(c.is_positive());
        let c = certify_kn_ln(2).unwrap();
        assert!(c.is_positive());
        assert_eq!(certify_kn_ln(3).unwrap().verdict, Verdict::PositiveStrict);
    }

    #[test]
    fn decreasing_left_small() {
        for n in 2..=5 {
            assert!(certify_decreasing_left(n).unwrap().replay());
        }
    }

    #[test]
    fn parity_split_small() {
        assert!(certify_parity_split(2).unwrap().is_none());
        for n in 3..=6 {
            assert!(certify_parity_split(n).unwrap().unwrap().replay(), "n = {n}");
        }
    }

    #[test]
    fn binomial_two_is_convex() {
        assert_eq!(qbinomial_nonconvexity_witness(2), None);
    }

    #[test]
    fn some_binomial_not_convex() {
        let found = (3..=6).find_map(qbinomial_nonconvexity_witness).unwrap();
        assert!(found > rat_int(-1) && found < rat_int(0));
    }
}
