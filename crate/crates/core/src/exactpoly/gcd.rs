//! Polynomial gcd over the integers.
//!
//! [`poly_gcd`] first tries the heuristic evaluation/interpolation gcd
//! (Char–Geddes–Gonnet), which is very fast on the dense, small-coefficient
//! polynomials met here, and falls back to the primitive pseudo-remainder
//! sequence [`prs_gcd`]. Both return the same canonical answer: the gcd with
//! positive leading coefficient whose content is the gcd of the input contents.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntPoly;

const HEURISTIC_ATTEMPTS: usize = 6;

/// `lc(b)^(deg a - deg b + 1) * a mod b`, computed without fractions.
pub fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.degree().expect("pseudo_rem by zero polynomial");
    let Some(da) = a.degree() else {
        return IntPoly::zero();
    };
    if da < db {
        return a.clone();
    }
    let lc = b.leading().unwrap().clone();
    let mut r: Vec<BigInt> = a.coeffs().to_vec();
    let mut steps = 0u32;
    let total = (da - db + 1) as u32;
    let mut top = da;
    while top >= db && r.iter().any(|c| !c.is_zero()) {
        let lead = r[top].clone();
        if lead.is_zero() {
            for c in r.iter_mut() {
                *c *= &lc;
            }
        } else {
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let off = top - db;
            for (j, bc) in b.coeffs().iter().enumerate() {
                if !bc.is_zero() {
                    r[off + j] -= &lead * bc;
                }
            }
        }
        steps += 1;
        if top == 0 {
            break;
        }
        top -= 1;
        r.truncate(top + 1);
    }
    let mut rem = IntPoly::new(r);
    if steps < total {
        rem = rem.scale(&num_traits::pow(lc, (total - steps) as usize));
    }
    rem
}

fn normalize_sign(p: IntPoly) -> IntPoly {
    if p.leading().is_some_and(|c| c.is_negative()) {
        -p
    } else {
        p
    }
}

/// Gcd by the primitive pseudo-remainder sequence.
pub fn prs_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let content = a.content().gcd(&b.content());
    let (mut x, mut y) = (a.primitive_part(), b.primitive_part());
    if x.degree() < y.degree() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = r.primitive_part();
    }
    normalize_sign(x.primitive_part()).scale(&content)
}

/// Quotient when `b` divides `a` with integral quotient, else `None`.
pub(crate) fn try_divexact(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let db = b.degree()?;
    let Some(da) = a.degree() else {
        return Some(IntPoly::zero());
    };
    if da < db {
        return None;
    }
    let lc = b.leading().unwrap();
    let mut rem = a.coeffs().to_vec();
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        if rem[k + db].is_zero() {
            continue;
        }
        let (qk, r) = rem[k + db].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        for (j, bc) in b.coeffs().iter().enumerate() {
            if !bc.is_zero() {
                rem[k + j] -= &qk * bc;
            }
        }
        quot[k] = qk;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(IntPoly::new(quot))
}

fn max_norm(p: &IntPoly) -> BigInt {
    p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default()
}

fn interpolate_symmetric(mut h: BigInt, xi: &BigInt) -> IntPoly {
    let half = xi / 2;
    let mut coeffs = Vec::new();
    while !h.is_zero() {
        let mut g = h.mod_floor(xi);
        if g > half {
            g -= xi;
        }
        h = (h - &g) / xi;
        coeffs.push(g);
    }
    IntPoly::new(coeffs)
}

/// Heuristic gcd of two primitive, nonconstant polynomials.
fn heuristic_gcd(f: &IntPoly, g: &IntPoly) -> Option<IntPoly> {
    let fnorm = max_norm(f);
    let gnorm = max_norm(g);
    let b: BigInt = BigInt::from(2) * (&fnorm).min(&gnorm) + 29;
    let flc = f.leading()?.abs();
    let glc = g.leading()?.abs();
    let lower: BigInt = BigInt::from(2) * (&fnorm / flc).min(&gnorm / glc) + 2;
    let cap: BigInt = b.sqrt() * 99;
    let mut xi = b.min(cap).max(lower);
    for _ in 0..HEURISTIC_ATTEMPTS {
        let ff = f.eval_int(&xi);
        let gg = g.eval_int(&xi);
        if !ff.is_zero() && !gg.is_zero() {
            let h = ff.gcd(&gg);
            let cand = normalize_sign(interpolate_symmetric(h, &xi).primitive_part());
            if !cand.is_zero()
                && try_divexact(f, &cand).is_some()
                && try_divexact(g, &cand).is_some()
            {
                return Some(cand);
            }
        }
        xi = &xi * BigInt::from(73794) * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Canonical gcd: positive leading coefficient, content = gcd of the contents.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let content = a.content().gcd(&b.content());
    let (pa, pb) = (a.primitive_part(), b.primitive_part());
    if pa.is_constant() || pb.is_constant() {
        return IntPoly::constant(content);
    }
    if pa == pb || pa == -&pb {
        return normalize_sign(pa).scale(&content);
    }
    let g = heuristic_gcd(&pa, &pb).unwrap_or_else(|| prs_gcd(&pa, &pb));
    g.scale(&content)
}

/// Squarefree decomposition (Yun): primitive factors `f_i` with
/// `pp(p) = ± prod f_i^i`; factors equal to 1 are omitted.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(IntPoly, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.primitive_part();
    let df = f.derivative();
    let b = poly_gcd(&f, &df).primitive_part();
    let mut c = try_divexact(&f, &b).expect("gcd divides f").primitive_part();
    // b is primitive, so it divides f' over Z as well (Gauss).
    let mut d = &try_divexact(&df, &b).expect("gcd divides f'") - &c.derivative();
    let mut i = 1;
    while !c.is_constant() {
        let a = poly_gcd(&c, &d).primitive_part();
        let a = normalize_sign(a);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        c = try_divexact(&c, &a).expect("Yun step").primitive_part();
        d = match try_divexact(&d, &a) {
            Some(x) => &x - &c.derivative(),
            None => break,
        };
        i += 1;
    }
    out
}

/// Primitive squarefree part `pp(p / gcd(p, p'))` with positive leading coefficient.
pub fn squarefree_part(p: &IntPoly) -> IntPoly {
    if p.is_constant() {
        return normalize_sign(p.primitive_part());
    }
    let g = poly_gcd(p, &p.derivative());
    normalize_sign(try_divexact(&p.primitive_part(), &g.primitive_part())
        .expect("gcd divides p")
        .primitive_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn gcd_of_coprime_and_common_factor() {
        assert_eq!(poly_gcd(&p(&[1, 1]), &p(&[1, -1])), IntPoly::one());
        let common = p(&[1, 0, 1]);
        let a = &common * &p(&[2, 3]);
        let b = &common * &p(&[-5, 0, 7]);
        assert_eq!(poly_gcd(&a, &b), common);
        assert_eq!(prs_gcd(&a, &b), common);
    }

    #[test]
    fn gcd_keeps_common_content() {
        let a = p(&[2, 2]); // 2(1+q)
        let b = p(&[4, 0, -4]); // 4(1-q)(1+q)
        assert_eq!(poly_gcd(&a, &b), p(&[2, 2]));
        assert_eq!(prs_gcd(&a, &b), p(&[2, 2]));
    }

    #[test]
    fn gcd_sign_normalized() {
        let a = p(&[-1, 0, 0, 1]);
        let b = p(&[1, -1]);
        assert_eq!(poly_gcd(&a, &b), p(&[-1, 1]));
    }

    #[test]
    fn pseudo_remainder_matches_definition() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[1, 0, 2]);
        let r = pseudo_rem(&a, &b);
        // 2^2 * a = q_ * b + r with deg r < 2
        assert!(r.degree().unwrap_or(0) < 2);
        let diff = &a.scale(&BigInt::from(4)) - &r;
        assert!(try_divexact(&diff, &b).is_some());
    }

    #[test]
    fn squarefree() {
        // (q-1)^3 (q+2)^2 (q^2+1)
        let f = &(&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2)) * &p(&[1, 0, 1]);
        let dec = squarefree_decomposition(&f);
        assert_eq!(
            dec,
            vec![(p(&[1, 0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]
        );
        assert_eq!(squarefree_part(&f), &(&p(&[-1, 1]) * &p(&[2, 1])) * &p(&[1, 0, 1]));
    }
}
