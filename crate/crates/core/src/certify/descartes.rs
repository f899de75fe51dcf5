//! Root isolation by Descartes' rule of signs with dyadic bisection, with a
//! Sturm fallback for cells that refuse to resolve.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::sturm::{sturm_chain, SturmChain};
use super::Interval;
use crate::exactpoly::{shift_basis, sign_variations, taylor_shift_int, BigRat, IntPoly};

const MAX_DEPTH: u32 = 48;

/// Part of the real line holding roots of the squarefree polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Cell {
    Point(BigRat),
    /// Open interval with `count` roots inside.
    Open { lo: BigRat, hi: BigRat, count: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Isolation {
    pub count: usize,
    pub cells: Vec<Cell>,
    pub used_sturm: bool,
}

/// Strict bound `B` with every real root in `(-B, B)`.
pub(crate) fn cauchy_bound(p: &IntPoly) -> BigInt {
    let lc = p.leading().map(|c| c.abs()).unwrap_or_else(BigInt::one);
    let m = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
    BigInt::from(2) + m / lc
}

/// `2^d p(y/2)`, divided by its content.
fn left_half(p: &IntPoly, d: usize) -> IntPoly {
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c << (d - i))
        .collect();
    IntPoly::new(coeffs).primitive_part()
}

fn descartes_bound(p: &IntPoly, d: usize) -> usize {
    let rev = p.reversal(d).expect("degree bound holds");
    sign_variations(taylor_shift_int(&rev, &BigInt::one()).coeffs())
}

struct Isolator<'a> {
    p: &'a IntPoly,
    lo: BigRat,
    width: BigRat,
    chain: Option<SturmChain>,
    used_sturm: bool,
}

impl Isolator<'_> {
    fn to_x(&self, k: &BigInt, depth: u32) -> BigRat {
        let y = BigRat::new(k.clone(), BigInt::one() << depth);
        &self.lo + &self.width * y
    }

    fn sturm_count(&mut self, a: &BigRat, b: &BigRat) -> usize {
        self.used_sturm = true;
        let chain = self
            .chain
            .get_or_insert_with(|| sturm_chain(self.p).expect("nonzero polynomial"));
        chain.count_real_roots(&Interval::open(a.clone(), b.clone()))
    }

    fn run(&mut self) -> (usize, Vec<Cell>) {
        let d = self.p.degree().unwrap_or(0);
        let mut cells = Vec::new();
        let mut count = 0;
        if d == 0 {
            return (0, cells);
        }
        let root = {
            // positive multiple of p(lo + width*y)
            let u = shift_basis(self.p, &self.lo);
            let mut acc = Vec::with_capacity(u.len());
            let mut wpow = BigRat::one();
            for c in u {
                acc.push(c * &wpow);
                wpow *= &self.width;
            }
            rat_vec_to_int(&acc)
        };
        let mut stack = vec![(root, BigInt::zero(), 0u32)];
        while let Some((poly, k, depth)) = stack.pop() {
            let v = descartes_bound(&poly, d);
            if v == 0 {
                continue;
            }
            let a = self.to_x(&k, depth);
            let b = self.to_x(&(&k + 1), depth);
            if v == 1 {
                count += 1;
                cells.push(Cell::Open { lo: a, hi: b, count: 1 });
                continue;
            }
            if depth >= MAX_DEPTH {
                let c = self.sturm_count(&a, &b);
                if c > 0 {
                    count += c;
                    cells.push(Cell::Open { lo: a, hi: b, count: c });
                }
                continue;
            }
            let left = left_half(&poly, d);
            let right = taylor_shift_int(&left, &BigInt::one());
            if right.coeffs().first().is_none_or(|c| c.is_zero()) {
                count += 1;
                cells.push(Cell::Point(self.to_x(&(2 * &k + 1), depth + 1)));
            }
            stack.push((right, 2 * &k + 1, depth + 1));
            stack.push((left, 2 * k, depth + 1));
        }
        (count, cells)
    }
}

fn rat_vec_to_int(v: &[BigRat]) -> IntPoly {
    let mut l = BigInt::one();
    for c in v {
        l = num_integer::Integer::lcm(&l, c.denom());
    }
    IntPoly::new(v.iter().map(|c| c.numer() * (&l / c.denom())).collect()).primitive_part()
}

/// Roots of the squarefree `p` in the open interval `(lo, hi)`.
pub(crate) fn isolate_open(p: &IntPoly, lo: &BigRat, hi: &BigRat) -> Isolation {
    if lo >= hi {
        return Isolation { count: 0, cells: Vec::new(), used_sturm: false };
    }
    let mut iso = Isolator {
        p,
        lo: lo.clone(),
        width: hi - lo,
        chain: None,
        used_sturm: false,
    };
    let (count, cells) = iso.run();
    Isolation { count, cells, used_sturm: iso.used_sturm }
}

/// Roots of the squarefree `p` in an arbitrary interval.
pub(crate) fn isolate(p: &IntPoly, interval: &Interval) -> Isolation {
    let bound = BigRat::from_integer(cauchy_bound(p));
    let lo = interval.lo.clone().unwrap_or_else(|| -bound.clone());
    let hi = interval.hi.clone().unwrap_or(bound);
    let mut iso = isolate_open(p, &lo, &hi);
    for (end, open) in [(&interval.lo, interval.lo_open), (&interval.hi, interval.hi_open)] {
        if let Some(x) = end {
            if !open && p.sign_at(x) == 0 {
                iso.count += 1;
                iso.cells.push(Cell::Point(x.clone()));
            }
        }
    }
    iso
}
