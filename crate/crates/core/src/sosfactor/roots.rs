//! Complex roots of integer polynomials: Aberth iteration in `f64`, then
//! Newton polishing in big-integer fixed point.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SosError;
use crate::exactpoly::{BigRat, IntPoly};

/// Fractional bits of the fixed-point representation.
pub(crate) const PREC: u64 = 320;
const ABERTH_ITERS: usize = 2000;
const FX_SWEEPS: usize = 60;

/// Complex number `(re + i im) / 2^PREC`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fx {
    pub re: BigInt,
    pub im: BigInt,
}

fn fx_real(x: f64) -> BigInt {
    let r = BigRat::from_float(x).expect("finite");
    (r * BigRat::from_integer(BigInt::one() << PREC)).to_integer()
}

fn big_to_f64_scaled(x: &BigInt, shift: u64) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap() * 2f64.powi(-(shift as i32));
    }
    let drop = bits - 64;
    (x >> drop).to_f64().unwrap() * 2f64.powi(drop as i32 - shift as i32)
}

impl Fx {
    pub fn zero() -> Self {
        Fx { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one() -> Self {
        Fx { re: BigInt::one() << PREC, im: BigInt::zero() }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Fx { re: fx_real(z.re), im: fx_real(z.im) }
    }

    pub fn from_int(c: &BigInt) -> Self {
        Fx { re: c << PREC, im: BigInt::zero() }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(big_to_f64_scaled(&self.re, PREC), big_to_f64_scaled(&self.im, PREC))
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> PREC,
            im: (&self.re * &o.im + &self.im * &o.re) >> PREC,
        }
    }

    pub fn div(&self, o: &Fx) -> Option<Fx> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << PREC;
        let im = (&self.im * &o.re - &self.re * &o.im) << PREC;
        Some(Fx { re: re / &den, im: im / &den })
    }

    /// `ln |z|`, accurate also when `|z|` is far below `f64` range.
    pub fn ln_abs(&self) -> f64 {
        let bits = self.re.bits().max(self.im.bits());
        let drop = bits.saturating_sub(64);
        let re = (&self.re >> drop).to_f64().unwrap();
        let im = (&self.im >> drop).to_f64().unwrap();
        re.hypot(im).ln() + (drop as f64 - PREC as f64) * std::f64::consts::LN_2
    }

    /// Largest absolute component in units of `2^-PREC`.
    fn max_component_bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }
}

/// `p(z)` and `p'(z)` by Horner in fixed point.
fn horner2(p: &IntPoly, z: &Fx) -> (Fx, Fx) {
    let c = p.coeffs();
    let mut v = Fx::from_int(c.last().unwrap());
    let mut dv = Fx::zero();
    for a in c.iter().rev().skip(1) {
        dv = dv.mul(z).add(&v);
        v = v.mul(z).add(&Fx::from_int(a));
    }
    (v, dv)
}

pub(crate) fn eval_fx(p: &IntPoly, z: &Fx) -> Fx {
    horner2(p, z).0
}

/// `p(z) / p'(z)` in floating point, through the reversed polynomial when
/// `|z| > 1` so that nothing overflows.
fn newton_ratio(c: &[f64], z: Complex64) -> Complex64 {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let mut v = Complex64::new(c[d], 0.0);
        let mut dv = Complex64::zero();
        for &a in c.iter().rev().skip(1) {
            dv = dv * z + v;
            v = v * z + a;
        }
        v / dv
    } else {
        let y = z.inv();
        let mut r = Complex64::new(c[0], 0.0);
        let mut dr = Complex64::zero();
        for &a in c.iter().skip(1) {
            dr = dr * y + r;
            r = r * y + a;
        }
        // p(z) = z^d r(y), p'(z) = z^(d-1) (d r(y) - y r'(y))
        z * r / (r * d as f64 - y * dr)
    }
}

/// Coefficients as floats, scaled by a common power of two.
fn scaled_coeffs(p: &IntPoly) -> Vec<f64> {
    let top = p.max_coeff_bits();
    let shift = top.saturating_sub(900);
    p.coeffs().iter().map(|c| big_to_f64_scaled(c, shift)).collect()
}

/// Simultaneous root approximation (Aberth-Ehrlich, Gauss-Seidel sweep).
fn aberth(p: &IntPoly) -> Vec<Complex64> {
    let c = scaled_coeffs(p);
    let d = c.len() - 1;
    let r0 = (c[0].abs() / c[d].abs()).powf(1.0 / d as f64).clamp(1e-3, 1e3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..ABERTH_ITERS {
        let mut worst = 0.0f64;
        for i in 0..d {
            let ratio = newton_ratio(&c, z[i]);
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-14 {
            return z;
        }
    }
    // not fully converged in floats; Newton in fixed point gets a chance
    z
}

/// Aberth sweeps in fixed point from float starting values. `None` if the
/// corrections do not settle.
fn refine(p: &IntPoly, start: &[Complex64]) -> Option<Vec<Fx>> {
    let mut z: Vec<Fx> = start.iter().map(|&c| Fx::from_c64(c)).collect();
    let one = Fx::one();
    let mut best = u64::MAX;
    let mut stalls = 0;
    for _ in 0..FX_SWEEPS {
        let mut worst = 0u64;
        for i in 0..z.len() {
            let (v, dv) = horner2(p, &z[i]);
            let Some(ratio) = v.div(&dv) else {
                // exact root or critical point; nudge off it unless v = 0
                if v.re.is_zero() && v.im.is_zero() {
                    continue;
                }
                return None;
            };
            let mut s = Fx::zero();
            for j in 0..z.len() {
                if j != i {
                    s = s.add(&one.div(&z[i].sub(&z[j]))?);
                }
            }
            let w = ratio.div(&one.sub(&ratio.mul(&s)))?;
            z[i] = z[i].sub(&w);
            // step size relative to max(1, |z|), in bits above 2^-PREC
            let slack = z[i].max_component_bits().saturating_sub(PREC);
            worst = worst.max(w.max_component_bits().saturating_sub(slack));
        }
        if worst <= 40 {
            return Some(z);
        }
        if worst >= best {
            stalls += 1;
            if stalls >= 3 && worst < PREC / 2 {
                return Some(z);
            }
        } else {
            stalls = 0;
            best = worst;
        }
    }
    None
}

/// High-precision roots of a squarefree integer polynomial.
pub(crate) fn precise_roots(p: &IntPoly) -> Result<Vec<Fx>, SosError> {
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        let c = p.coeffs();
        let num = -BigRat::new(c[0].clone(), c[1].clone());
        let re = (num * BigRat::from_integer(BigInt::one() << PREC)).to_integer();
        return Ok(vec![Fx { re, im: BigInt::zero() }]);
    }
    let fail = SosError::ConvergenceFailure { worst_residual: f64::INFINITY };
    let out = refine(p, &aberth(p)).ok_or(fail.clone())?;
    // two approximations settling on the same root means one root was lost
    for i in 0..out.len() {
        for j in 0..i {
            if out[i].sub(&out[j]).max_component_bits() < PREC / 2 {
                return Err(fail);
            }
        }
    }
    Ok(out)
}

/// Backward-style residual `|p(z)| / (max|c_i| * max(1,|z|)^d)`.
pub(crate) fn scaled_residual(p: &IntPoly, z: &Fx) -> f64 {
    let v = eval_fx(p, z);
    if v.re.is_zero() && v.im.is_zero() {
        return 0.0;
    }
    let norm = p.coeffs().iter().map(|c| c.abs()).max().unwrap();
    let ln_norm = Fx::from_int(&norm).ln_abs();
    let d = p.degree().unwrap_or(0) as f64;
    let ln_den = ln_norm + d * z.ln_abs().max(0.0);
    (v.ln_abs() - ln_den).exp()
}
