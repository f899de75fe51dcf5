//! Sums of rational functions whose denominators are products of
//! cyclotomic polynomials, such as `1 - q^j` and `1 + q^j`.
//!
//! The common denominator is known factor by factor, so the sum is formed
//! over it directly and reduced by trial division with each `Phi_d`;
//! since the `Phi_d` are irreducible the result is already coprime and
//! only needs the content/sign normalization of [`RatFun`].

use std::collections::BTreeMap;

use super::gcd::try_divexact;
use super::{IntPoly, RatFun};

fn mobius(mut n: usize) -> i8 {
    let mut mu = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// The `d`-th cyclotomic polynomial, `prod_{e | d} (q^e - 1)^{mu(d/e)}`.
pub fn cyclotomic(d: usize) -> IntPoly {
    assert!(d >= 1, "cyclotomic index starts at 1");
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for e in divisors(d) {
        let f = -IntPoly::one_minus_pow(e);
        match mobius(d / e) {
            1 => num = &num * &f,
            -1 => den = &den * &f,
            _ => {}
        }
    }
    num.divexact(&den).expect("cyclotomic quotient is exact")
}

/// `sign * prod_d Phi_d^{e_d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloDen {
    sign: i8,
    exps: BTreeMap<usize, u32>,
}

impl CycloDen {
    pub fn one() -> Self {
        Self {
            sign: 1,
            exps: BTreeMap::new(),
        }
    }

    /// `1 - q^j = -prod_{d | j} Phi_d`.
    pub fn one_minus_pow(j: usize) -> Self {
        assert!(j >= 1);
        Self {
            sign: -1,
            exps: divisors(j).into_iter().map(|d| (d, 1)).collect(),
        }
    }

    /// `1 + q^j = prod_{d | 2j, d ∤ j} Phi_d`.
    pub fn one_plus_pow(j: usize) -> Self {
        assert!(j >= 1);
        Self {
            sign: 1,
            exps: divisors(2 * j)
                .into_iter()
                .filter(|d| j % d != 0)
                .map(|d| (d, 1))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        Self {
            sign: if k % 2 == 0 { 1 } else { self.sign },
            exps: self.exps.iter().map(|(&d, &e)| (d, e * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps.clone();
        for (&d, &e) in &other.exps {
            *exps.entry(d).or_insert(0) += e;
        }
        Self {
            sign: self.sign * other.sign,
            exps,
        }
    }

    pub fn to_poly(&self) -> IntPoly {
        let mut cache = BTreeMap::new();
        let p = expand(&self.exps, &mut cache);
        if self.sign < 0 {
            -p
        } else {
            p
        }
    }
}

fn phi<'a>(d: usize, cache: &'a mut BTreeMap<usize, IntPoly>) -> &'a IntPoly {
    cache.entry(d).or_insert_with(|| cyclotomic(d))
}

fn expand(exps: &BTreeMap<usize, u32>, cache: &mut BTreeMap<usize, IntPoly>) -> IntPoly {
    let mut acc = IntPoly::one();
    for (&d, &e) in exps {
        if e > 0 {
            let f = phi(d, cache).pow(e);
            acc = &acc * &f;
        }
    }
    acc
}

/// Accumulates `sum num_i / den_i` and reduces once at the end.
#[derive(Debug, Default)]
pub struct CycloSum {
    terms: Vec<(IntPoly, BTreeMap<usize, u32>)>,
}

impl CycloSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, num: IntPoly, den: &CycloDen) {
        let num = if den.sign < 0 { -num } else { num };
        self.terms.push((num, den.exps.clone()));
    }

    pub fn sub(&mut self, num: IntPoly, den: &CycloDen) {
        self.add(-num, den);
    }

    pub fn finish(self) -> RatFun {
        let mut common: BTreeMap<usize, u32> = BTreeMap::new();
        for (_, exps) in &self.terms {
            for (&d, &e) in exps {
                let slot = common.entry(d).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        let mut cache = BTreeMap::new();
        let mut num = IntPoly::zero();
        for (n, exps) in &self.terms {
            let cof: BTreeMap<usize, u32> = common
                .iter()
                .map(|(&d, &e)| (d, e - exps.get(&d).copied().unwrap_or(0)))
                .collect();
            num = &num + &(n * &expand(&cof, &mut cache));
        }
        if num.is_zero() {
            return RatFun::zero();
        }
        for (&d, e) in common.iter_mut() {
            while *e > 0 {
                match try_divexact(&num, phi(d, &mut cache)) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        let den = expand(&common, &mut cache);
        RatFun::from_coprime(num, den)
    }
}
