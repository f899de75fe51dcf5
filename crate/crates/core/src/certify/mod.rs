//! Exact positivity certificates on real intervals.
//!
//! Root counts come from Descartes' rule with dyadic bisection (falling back
//! to a Sturm chain for stubborn cells); every certificate can be replayed
//! independently through [`SturmChain`].

mod claims;
mod descartes;
mod sturm;

pub use claims::{
    certify_convexity, certify_decreasing_left, certify_fn, certify_kn_ln, certify_parity_split,
    certify_qprime, certify_r_parts, certify_ratfun_positive, qbinomial_nonconvexity_witness,
};
pub use sturm::{count_real_roots, sturm_chain, SturmChain};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactpoly::{squarefree_part, BigRat, IntPoly};
use descartes::{isolate, isolate_open, Cell};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("cannot certify the zero polynomial")]
    ZeroPolynomial,
    #[error("listed zero {root} has odd multiplicity {multiplicity} inside the interval")]
    OddMultiplicityZero { root: String, multiplicity: usize },
    #[error("listed zero {root} does not divide with multiplicity {multiplicity}")]
    NotDivisible { root: String, multiplicity: usize },
    #[error("interval endpoint {point} is a root")]
    EndpointIsRoot { point: String },
    #[error("denominator of {target} vanishes in the interval")]
    DenominatorVanishes { target: String },
    #[error("{target} touches zero at an irrational point; no rational witness")]
    NoRationalWitness { target: String },
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("building the target failed: {0}")]
    Build(String),
}

pub(crate) fn ser_rat<S: Serializer>(x: &BigRat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rat<S: Serializer>(x: &Option<BigRat>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_zeros<S: Serializer>(z: &[(BigRat, usize)], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<(String, usize)> = z.iter().map(|(r, m)| (r.to_string(), *m)).collect();
    v.serialize(s)
}

/// Real interval; `None` marks an infinite end, which is always open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval {
    #[serde(serialize_with = "ser_opt_rat")]
    pub lo: Option<BigRat>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub hi: Option<BigRat>,
    pub lo_open: bool,
    pub hi_open: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Below,
    Lower { open: bool },
    Inside,
    Upper { open: bool },
    Above,
}

impl Interval {
    pub fn open(lo: BigRat, hi: BigRat) -> Self {
        Interval { lo: Some(lo), hi: Some(hi), lo_open: true, hi_open: true }
    }

    pub fn closed(lo: BigRat, hi: BigRat) -> Self {
        Interval { lo: Some(lo), hi: Some(hi), lo_open: false, hi_open: false }
    }

    pub fn real_line() -> Self {
        Interval { lo: None, hi: None, lo_open: true, hi_open: true }
    }

    /// `(lo, +inf)`
    pub fn above(lo: BigRat) -> Self {
        Interval { lo: Some(lo), hi: None, lo_open: true, hi_open: true }
    }

    /// `(-inf, hi)`
    pub fn below(hi: BigRat) -> Self {
        Interval { lo: None, hi: Some(hi), lo_open: true, hi_open: true }
    }

    fn place(&self, x: &BigRat) -> Place {
        if let Some(lo) = &self.lo {
            if x < lo {
                return Place::Below;
            }
            if x == lo {
                return Place::Lower { open: self.lo_open };
            }
        }
        if let Some(hi) = &self.hi {
            if x > hi {
                return Place::Above;
            }
            if x == hi {
                return Place::Upper { open: self.hi_open };
            }
        }
        Place::Inside
    }

    pub fn contains(&self, x: &BigRat) -> bool {
        matches!(
            self.place(x),
            Place::Inside | Place::Lower { open: false } | Place::Upper { open: false }
        )
    }

    pub fn contains_interior(&self, x: &BigRat) -> bool {
        self.place(x) == Place::Inside
    }

    fn default_sample(&self) -> BigRat {
        let two = BigRat::from_integer(BigInt::from(2));
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => (a + b) / two,
            (Some(a), None) => a + BigRat::one(),
            (None, Some(b)) => b - BigRat::one(),
            (None, None) => BigRat::from_integer(BigInt::from(0)),
        }
    }

    /// Interior rational point different from every listed one.
    pub fn sample_point(&self, avoid: &[BigRat]) -> BigRat {
        let mut x = self.default_sample();
        let two = BigRat::from_integer(BigInt::from(2));
        while avoid.contains(&x) {
            // walk toward the lower end (or down) until free
            x = match &self.lo {
                Some(a) => (a + &x) / &two,
                None => &x - BigRat::one(),
            };
        }
        x
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        let lo = self.lo.as_ref().map_or("-inf".to_string(), |x| x.to_string());
        let hi = self.hi.as_ref().map_or("+inf".to_string(), |x| x.to_string());
        write!(f, "{l}{lo}, {hi}{r}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    PositiveStrict,
    PositiveExceptListedZeros,
    Failed {
        #[serde(serialize_with = "ser_rat")]
        witness: BigRat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Descartes,
    /// Descartes bisection with some cells settled by Sturm.
    DescartesSturm,
    Sturm,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityCert {
    pub target: String,
    pub interval: Interval,
    #[serde(serialize_with = "ser_zeros")]
    pub factored_zeros: Vec<(BigRat, usize)>,
    /// Distinct roots of the cofactor in the interval.
    pub root_count_interior: usize,
    /// Signs of the target at the lower and upper ends (limits at infinite ends).
    pub endpoint_signs: (i8, i8),
    pub verdict: Verdict,
    pub method: CountMethod,
    #[serde(serialize_with = "ser_rat")]
    pub sample_point: BigRat,
    pub sample_sign: i8,
    pub degree: usize,
    pub cofactor_degree: usize,
    #[serde(skip)]
    pub poly: IntPoly,
    /// Target with listed zeros removed, multiplied by the sign those factors
    /// take on the interval.
    #[serde(skip)]
    pub cofactor: IntPoly,
}

impl PositivityCert {
    pub fn is_positive(&self) -> bool {
        matches!(self.verdict, Verdict::PositiveStrict | Verdict::PositiveExceptListedZeros)
    }

    pub fn witness(&self) -> Option<&BigRat> {
        match &self.verdict {
            Verdict::Failed { witness } => Some(witness),
            _ => None,
        }
    }

    /// Independent check of a positive verdict: a fresh Sturm count of the
    /// cofactor on the interval is zero and the sample value is positive.
    /// For a failed verdict, checks that the witness value is `<= 0`.
    pub fn replay(&self) -> bool {
        match &self.verdict {
            Verdict::Failed { witness } => {
                self.interval.contains(witness) && self.poly.sign_at(witness) <= 0
            }
            _ => {
                let Ok(chain) = sturm_chain(&self.cofactor) else {
                    return false;
                };
                chain.count_real_roots(&self.interval) == 0
                    && self.interval.contains_interior(&self.sample_point)
                    && self.poly.sign_at(&self.sample_point) > 0
            }
        }
    }
}

/// `den*q - num` for `r = num/den`.
fn linear_factor(r: &BigRat) -> IntPoly {
    IntPoly::new(vec![-r.numer().clone(), r.denom().clone()])
}

fn limit_sign(p: &IntPoly, positive: bool) -> i8 {
    let s: i8 = if p.leading().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
    if !positive && p.degree().unwrap_or(0) % 2 == 1 {
        -s
    } else {
        s
    }
}

fn endpoint_signs(p: &IntPoly, iv: &Interval) -> (i8, i8) {
    let lo = iv.lo.as_ref().map_or_else(|| limit_sign(p, false), |x| p.sign_at(x));
    let hi = iv.hi.as_ref().map_or_else(|| limit_sign(p, true), |x| p.sign_at(x));
    (lo, hi)
}

/// Certifies `p > 0` on the interval, except at listed rational zeros.
///
/// Listed zeros are divided out exactly. A listed zero strictly inside the
/// interval must have even multiplicity. The cofactor, multiplied by the sign
/// the removed factors take on the interval, must have no roots there and the
/// target must be positive at an interior sample. Otherwise the verdict is
/// `Failed` with a rational witness where `p <= 0`.
pub fn certify_positive(
    p: &IntPoly,
    interval: &Interval,
    known_zeros: &[(BigRat, usize)],
    target: &str,
) -> Result<PositivityCert, CertifyError> {
    if p.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    let mut cof = p.clone();
    let mut sign = 1i8;
    let mut listed_inside = false;
    for (r, m) in known_zeros {
        let lin = linear_factor(r);
        for _ in 0..*m {
            cof = cof.divexact(&lin).map_err(|_| CertifyError::NotDivisible {
                root: r.to_string(),
                multiplicity: *m,
            })?;
        }
        match interval.place(r) {
            Place::Inside => {
                if m % 2 == 1 {
                    return Err(CertifyError::OddMultiplicityZero {
                        root: r.to_string(),
                        multiplicity: *m,
                    });
                }
                listed_inside = true;
            }
            Place::Lower { open } => listed_inside |= !open && *m > 0,
            Place::Upper { open } => {
                listed_inside |= !open && *m > 0;
                if m % 2 == 1 {
                    sign = -sign;
                }
            }
            Place::Above => {
                if m % 2 == 1 {
                    sign = -sign;
                }
            }
            Place::Below => {}
        }
    }
    if sign < 0 {
        cof = -cof;
    }
    let sqf = squarefree_part(&cof);
    let iso = isolate(&sqf, interval);
    let avoid: Vec<BigRat> = known_zeros.iter().map(|(r, _)| r.clone()).collect();
    let sample = interval.sample_point(&avoid);
    let sample_sign = p.sign_at(&sample);
    let verdict = if iso.count == 0 && sample_sign > 0 {
        if listed_inside {
            Verdict::PositiveExceptListedZeros
        } else {
            Verdict::PositiveStrict
        }
    } else {
        let witness = find_witness(p, &sqf, &iso.cells, interval, &sample).ok_or_else(|| {
            CertifyError::NoRationalWitness { target: target.to_string() }
        })?;
        Verdict::Failed { witness }
    };
    Ok(PositivityCert {
        target: target.to_string(),
        interval: interval.clone(),
        factored_zeros: known_zeros.to_vec(),
        root_count_interior: iso.count,
        endpoint_signs: endpoint_signs(p, interval),
        verdict,
        method: if iso.used_sturm { CountMethod::DescartesSturm } else { CountMethod::Descartes },
        sample_point: sample,
        sample_sign,
        degree: p.degree().unwrap_or(0),
        cofactor_degree: cof.degree().unwrap_or(0),
        poly: p.clone(),
        cofactor: cof,
    })
}

const WITNESS_STEPS: usize = 256;

/// Rational point of the interval where `p <= 0`, searched inside the cells
/// that hold the roots of the squarefree cofactor `sqf`. Points with `p < 0`
/// are preferred; a rational zero is returned only if none turns up.
fn find_witness(
    p: &IntPoly,
    sqf: &IntPoly,
    cells: &[Cell],
    iv: &Interval,
    sample: &BigRat,
) -> Option<BigRat> {
    let two = BigRat::from_integer(BigInt::from(2));
    let neg = |x: &BigRat| iv.contains_interior(x) && p.sign_at(x) < 0;
    if neg(sample) {
        return Some(sample.clone());
    }
    let mut zero = (p.sign_at(sample) == 0).then(|| sample.clone());
    // nearby points on both sides of a rational root
    let around = |x: &BigRat| {
        let mut eps = BigRat::one();
        for _ in 0..64 {
            eps = eps / &two;
            for y in [x - &eps, x + &eps] {
                if neg(&y) {
                    return Some(y);
                }
            }
        }
        None
    };
    for cell in cells {
        match cell {
            Cell::Point(x) => {
                if let Some(w) = around(x) {
                    return Some(w);
                }
                if iv.contains(x) && zero.is_none() {
                    zero = Some(x.clone());
                }
            }
            Cell::Open { lo, hi, .. } => {
                if let Some(x) = [lo, hi].into_iter().find(|x| neg(x)) {
                    return Some(x.clone());
                }
                // shrink around one root; an odd-order root exposes a negative side
                let (mut a, mut b) = (lo.clone(), hi.clone());
                for _ in 0..WITNESS_STEPS {
                    let m = (&a + &b) / &two;
                    if neg(&m) {
                        return Some(m);
                    }
                    if sqf.sign_at(&m) == 0 {
                        let sides = [(&a + &m) / &two, (&m + &b) / &two];
                        if let Some(x) = sides.into_iter().find(|x| neg(x)) {
                            return Some(x);
                        }
                        if zero.is_none() {
                            zero = Some(m);
                        }
                        break;
                    }
                    if isolate_open(sqf, &a, &m).count > 0 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
            }
        }
    }
    zero
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, rat_int};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn simple_verdicts() {
        let c = certify_positive(&p(&[1, 0, 1]), &Interval::real_line(), &[], "t").unwrap();
        assert_eq!(c.verdict, Verdict::PositiveStrict);
        assert!(c.replay());

        let n2 = p(&[0, 0, 2, 0, -2]);
        let iv = Interval::open(rat_int(-1), rat_int(1));
        let c = certify_positive(&n2, &iv, &[(rat_int(0), 2)], "N2").unwrap();
        assert_eq!(c.verdict, Verdict::PositiveExceptListedZeros);
        assert!(c.replay());

        let c = certify_positive(&p(&[0, -1, 0, 1]), &Interval::open(rat_int(0), rat_int(2)), &[], "t")
            .unwrap();
        let w = c.witness().unwrap().clone();
        assert!(w > rat_int(0) && w < rat_int(1));
        assert!(c.replay());
    }

    #[test]
    fn listed_zero_errors() {
        let iv = Interval::open(rat_int(-1), rat_int(1));
        let e = certify_positive(&p(&[0, 1]), &iv, &[(rat_int(0), 1)], "t").unwrap_err();
        assert!(matches!(e, CertifyError::OddMultiplicityZero { .. }));
        let e = certify_positive(&p(&[0, 1]), &iv, &[(rat_int(0), 2)], "t").unwrap_err();
        assert!(matches!(e, CertifyError::NotDivisible { .. }));
        assert!(matches!(
            certify_positive(&IntPoly::zero(), &iv, &[], "t"),
            Err(CertifyError::ZeroPolynomial)
        ));
    }

    #[test]
    fn endpoint_zero_sign_bookkeeping() {
        // (1 - q)(2 + q) on (-1, 1): zero at the open upper end, odd order
        let f = p(&[2, -1, -1]);
        let c = certify_positive(&f, &Interval::open(rat_int(-1), rat_int(1)), &[(rat_int(1), 1)], "t")
            .unwrap();
        assert_eq!(c.verdict, Verdict::PositiveStrict);
        assert!(c.replay());
        // same polynomial, closed upper end
        let c = certify_positive(&f, &Interval::closed(rat(-1, 2), rat_int(1)), &[(rat_int(1), 1)], "t")
            .unwrap();
        assert_eq!(c.verdict, Verdict::PositiveExceptListedZeros);
    }

    #[test]
    fn touching_irrational_root_has_no_witness() {
        // (q^2 - 2)^2 on (0, 2)
        let f = p(&[-2, 0, 1]).pow(2);
        let e = certify_positive(&f, &Interval::open(rat_int(0), rat_int(2)), &[], "t").unwrap_err();
        assert!(matches!(e, CertifyError::NoRationalWitness { .. }));
    }
}
