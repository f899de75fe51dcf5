//! Partition numbers and the limit function `F(q) = prod_{k>=2} 1/(1-q^k)`,
//! with exact truncated values of `F`, `F'`, `F''` at rational points.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::certify::ser_rat;
use crate::exactpoly::{rat_to_f64, BigRat};
use crate::qcore::qcatalan_poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionsError {
    #[error("argument out of domain: {0}")]
    DomainError(String),
}

/// `P(0..=max_n)` by Euler's pentagonal recurrence.
pub fn partition_numbers(max_n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); max_n + 1];
    p[0] = BigInt::one();
    for n in 1..=max_n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let plus = k % 2 == 1;
            let mut add = |i: usize| {
                if plus {
                    acc += &p[n - i];
                } else {
                    acc -= &p[n - i];
                }
            };
            add(g1);
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                add(g2);
            }
        }
        p[n] = acc;
    }
    p
}

/// Power series truncated after `q^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTrunc {
    pub order: usize,
    pub coeffs: Vec<BigInt>,
}

/// `prod_{k=2}^{order} 1/(1 - q^k)` modulo `q^{order+1}`.
pub fn f_series(order: usize) -> SeriesTrunc {
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    for k in 2..=order {
        for i in k..=order {
            let (lo, hi) = c.split_at_mut(i);
            hi[0] += &lo[i - k];
        }
    }
    SeriesTrunc { order, coeffs: c }
}

/// `log P(n) / n` for `n = 1..=max_n`.
pub fn log_growth(max_n: usize) -> Vec<f64> {
    partition_numbers(max_n)
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, p)| big_ln(p) / n as f64)
        .collect()
}

fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// First index from which `log P(n)/n` decreases strictly through `max_n`.
pub fn growth_decreasing_from(max_n: usize) -> usize {
    let g = log_growth(max_n);
    let mut start = 1;
    for i in 1..g.len() {
        if g[i] >= g[i - 1] {
            start = i + 1;
        }
    }
    start
}

/// Fraction kept unreduced while summing; denominators stay positive.
#[derive(Debug, Clone)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    fn int(n: BigInt) -> Self {
        Frac { num: n, den: BigInt::one() }
    }

    fn add(&self, o: &Frac) -> Frac {
        if self.den == o.den {
            return Frac { num: &self.num + &o.num, den: self.den.clone() };
        }
        Frac { num: &self.num * &o.den + &o.num * &self.den, den: &self.den * &o.den }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    /// Unreduced: reducing these values costs more than computing them.
    fn to_rat(&self) -> BigRat {
        BigRat::new_raw(self.num.clone(), self.den.clone())
    }
}

fn ser_approx<S: serde::Serializer>(x: &BigRat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(rat_to_f64(x))
}

/// `a - b` as a float, without reducing the exact difference.
fn diff_f64(a: &BigRat, b: &BigRat) -> f64 {
    let num = a.numer() * b.denom() - b.numer() * a.denom();
    rat_to_f64(&BigRat::new_raw(num, a.denom() * b.denom()))
}

/// Exact values of the truncated sums at one point. The rationals are kept
/// unreduced (equality and ordering still work); reports carry float
/// approximations.
#[derive(Debug, Clone, Serialize)]
pub struct FDerivatives {
    #[serde(serialize_with = "ser_rat")]
    pub q: BigRat,
    pub kmax: usize,
    #[serde(serialize_with = "ser_approx")]
    pub f: BigRat,
    #[serde(serialize_with = "ser_approx")]
    pub fprime: BigRat,
    #[serde(serialize_with = "ser_approx")]
    pub fsecond: BigRat,
    /// `sum_{k=2}^{kmax} k q^{k-1} / (1 - q^k)`, the truncated `F'/F`.
    #[serde(serialize_with = "ser_approx")]
    pub log_derivative: BigRat,
    /// `sum_{k>kmax} k|q|^{k-1} / (1-|q|)`.
    pub tail_bound: f64,
}

/// `sum_{k>K} k r^{k-1} / (1 - r)` in closed form.
fn tail_bound(r: f64, kmax: usize) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let k = kmax as f64;
    let rk = r.powi(kmax as i32);
    ((k + 1.0) * rk - k * rk * r) / ((1.0 - r) * (1.0 - r) * (1.0 - r))
}

/// Smallest `kmax >= 2` whose tail bound is below `2^-60` times the partial
/// sum of `|k q^{k-1} / (1 - q^k)|`.
pub fn choose_kmax(q: &BigRat) -> usize {
    let r = rat_to_f64(q).abs();
    let mut partial = 0.0;
    let mut k = 2usize;
    loop {
        partial += k as f64 * r.powi(k as i32 - 1) / (1.0 - r.powi(k as i32));
        if tail_bound(r, k) <= partial * 2f64.powi(-60) || k > 100_000 {
            return k;
        }
        k += 1;
    }
}

/// `F`, `F'`, `F''` at `q` from the product and the three sums
/// `F'' = F (S1^2 + S2 + S3)` with
/// `S1 = sum_{k>=2} k q^{k-1}/(1-q^k)`, `S2 = sum_{k>=2} (k q^{k-1}/(1-q^k))^2`,
/// `S3 = sum_{k>=1} 2 q^{2k-2}/(1-q^k)^3`, all truncated at `kmax`.
pub fn f_derivatives_at(q: &BigRat, kmax: usize) -> Result<FDerivatives, PartitionsError> {
    if q.abs() >= BigRat::one() {
        return Err(PartitionsError::DomainError(format!("need |q| < 1, got {q}")));
    }
    if kmax < 2 {
        return Err(PartitionsError::DomainError(format!("kmax must be at least 2, got {kmax}")));
    }
    // q = a/b; every factor 1 - q^k becomes D_k / b^k with D_k = b^k - a^k > 0
    let (a, b) = (q.numer().clone(), q.denom().clone());
    let mut f = Frac::int(BigInt::one());
    let mut s1 = Frac::int(BigInt::zero());
    let mut s2 = Frac::int(BigInt::zero());
    let mut s3 = Frac::int(BigInt::zero());
    let mut ak = BigInt::one(); // a^{k-1}
    let mut bk = BigInt::one(); // b^k after the update
    for k in 1..=kmax {
        let a_prev = ak.clone();
        ak *= &a;
        bk *= &b;
        let dk = &bk - &ak;
        // 2 q^{2k-2}/(1-q^k)^3 = 2 a^{2k-2} b^{k+2} / D_k^3
        let t3 = Frac {
            num: 2 * &a_prev * &a_prev * &bk * &b * &b,
            den: &dk * &dk * &dk,
        };
        s3 = s3.add(&t3);
        if k >= 2 {
            f = f.mul(&Frac { num: bk.clone(), den: dk.clone() });
            // k q^{k-1}/(1-q^k) = k a^{k-1} b / D_k
            let t1 = Frac { num: BigInt::from(k) * &a_prev * &b, den: dk.clone() };
            s2 = s2.add(&t1.mul(&t1));
            s1 = s1.add(&t1);
        }
    }
    // s1, s2 share the denominator P = prod_{k>=2} D_k (resp. P^2), s3 has D_1^3 P^3;
    // combine over D_1^3 P^3 instead of multiplying denominators blindly
    let d1_cubed = &s3.den / (&s1.den * &s1.den * &s1.den);
    let inner = Frac {
        num: (&s1.num * &s1.num + &s2.num) * &d1_cubed * &s1.den + &s3.num,
        den: s3.den.clone(),
    };
    let fprime = f.mul(&s1);
    let fsecond = f.mul(&inner);
    Ok(FDerivatives {
        q: q.clone(),
        kmax,
        f: f.to_rat(),
        fprime: fprime.to_rat(),
        fsecond: fsecond.to_rat(),
        log_derivative: s1.to_rat(),
        tail_bound: tail_bound(rat_to_f64(q).abs(), kmax),
    })
}

/// `count` equally spaced rationals from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: &BigRat, hi: &BigRat, count: usize) -> Vec<BigRat> {
    if count == 1 {
        return vec![lo.clone()];
    }
    let step = (hi - lo) / BigRat::from_integer(BigInt::from(count - 1));
    (0..count).map(|i| lo + &step * BigRat::from_integer(BigInt::from(i))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub sup_error: f64,
    #[serde(serialize_with = "ser_rat")]
    pub argmax: BigRat,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ProbeRow>,
    /// `sup_error` strictly decreasing along `n_list`.
    pub strictly_decreasing: bool,
    pub kmax: Vec<usize>,
}

/// `sup_grid |C_n''(q) - F''(q)|` for each `n`. With `kmax = None` the
/// truncation is chosen per point by [`choose_kmax`].
pub fn convergence_probe(
    grid: &[BigRat],
    n_list: &[usize],
    kmax: Option<usize>,
) -> Result<ConvergenceTable, PartitionsError> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) || n_list.first().is_some_and(|&n| n < 2) {
        return Err(PartitionsError::DomainError("n_list must be increasing and start at n >= 2".into()));
    }
    let mut limits = Vec::with_capacity(grid.len());
    let mut ks = Vec::with_capacity(grid.len());
    for q in grid {
        let k = kmax.unwrap_or_else(|| choose_kmax(q));
        ks.push(k);
        limits.push(f_derivatives_at(q, k)?.fsecond);
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let d2 = qcatalan_poly(n).expect("product formula divides exactly").nth_derivative(2);
        let mut best = (0.0f64, grid.first().cloned().unwrap_or_else(BigRat::zero));
        for (q, lim) in grid.iter().zip(&limits) {
            let err = diff_f64(&d2.eval(q), lim).abs();
            if err > best.0 {
                best = (err, q.clone());
            }
        }
        rows.push(ProbeRow { n, sup_error: best.0, argmax: best.1 });
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error);
    Ok(ConvergenceTable { rows, strictly_decreasing, kmax: ks })
}
