use num_traits::Signed;

use super::{CertifyError, Interval};
use crate::exactpoly::{pseudo_rem, BigRat, IntPoly};

/// Primitive signed remainder sequence `p, p', -prem(p, p'), ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmChain {
    polys: Vec<IntPoly>,
    /// The chain divided by its last element, a Sturm sequence for the
    /// squarefree part whose members never vanish together.
    reduced: Vec<IntPoly>,
}

/// Remainder with the sign of the true Euclidean remainder.
fn signed_prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let r = pseudo_rem(a, b);
    let lc_neg = b.leading().is_some_and(|c| c.is_negative());
    let delta = a.degree().unwrap_or(0) + 1 - b.degree().unwrap_or(0);
    if lc_neg && delta % 2 == 1 {
        -r
    } else {
        r
    }
}

pub fn sturm_chain(p: &IntPoly) -> Result<SturmChain, CertifyError> {
    if p.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    let mut polys = vec![p.primitive_part()];
    let d = p.derivative();
    if !d.is_zero() {
        polys.push(d.primitive_part());
        loop {
            let n = polys.len();
            let r = signed_prem(&polys[n - 2], &polys[n - 1]);
            if r.is_zero() {
                break;
            }
            polys.push((-r).primitive_part());
        }
    }
    let last = polys.last().unwrap().clone();
    let reduced = if last.is_constant() {
        polys.clone()
    } else {
        polys
            .iter()
            .map(|f| f.divexact(&last).expect("last chain element divides the chain"))
            .collect()
    };
    Ok(SturmChain { polys, reduced })
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

impl SturmChain {
    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn var_at(&self, x: &BigRat) -> usize {
        variations(self.reduced.iter().map(|f| f.sign_at(x)))
    }

    /// Sign variations at `+inf` (`positive = true`) or `-inf`.
    fn var_at_infinity(&self, positive: bool) -> usize {
        variations(self.reduced.iter().map(|f| {
            let s = if f.leading().is_some_and(|c| c.is_negative()) { -1 } else { 1 };
            let odd = f.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    fn is_root(&self, x: &BigRat) -> bool {
        self.polys[0].sign_at(x) == 0
    }

    /// Distinct real roots in the interval, honouring open/closed ends.
    pub fn count_real_roots(&self, interval: &Interval) -> usize {
        // V(a) - V(b) counts roots in (a, b].
        let va = match &interval.lo {
            Some(a) => self.var_at(a),
            None => self.var_at_infinity(false),
        };
        let vb = match &interval.hi {
            Some(b) => self.var_at(b),
            None => self.var_at_infinity(true),
        };
        let mut count = va.saturating_sub(vb);
        if let Some(b) = &interval.hi {
            if interval.hi_open && self.is_root(b) {
                count -= 1;
            }
        }
        if let Some(a) = &interval.lo {
            if !interval.lo_open && self.is_root(a) {
                count += 1;
            }
        }
        count
    }
}

pub fn count_real_roots(chain: &SturmChain, interval: &Interval) -> usize {
    chain.count_real_roots(interval)
}
