//! Numerical witness `N_n = A^2 + (1 - q^2) B^2` on `[-1, 1]`, built from
//! the roots of the cosine lift `G(z) = (2z)^d p((z + 1/z)/2)`.

mod roots;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{rat_int, squarefree_decomposition, IntPoly};
use crate::qfuncs::build_qn;
use roots::{precise_roots, scaled_residual, Fx};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SosError {
    #[error("grid residual {achieved:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { achieved: f64, tol: f64 },
    #[error("roots on the unit circle or their partners could not be paired: {0}")]
    PairingAmbiguity(String),
    #[error("root iteration failed to converge (worst residual {worst_residual:e})")]
    ConvergenceFailure { worst_residual: f64 },
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("argument out of domain: {0}")]
    DomainError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    /// Coefficients of `T_0, T_1, ...` (Chebyshev polynomials of the first kind).
    Chebyshev,
}

/// Real polynomial with double-precision coefficients in a stated basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatPoly {
    coeffs: Vec<f64>,
    basis: Basis,
}

impl FloatPoly {
    pub fn new(mut coeffs: Vec<f64>, basis: Basis) -> Result<Self, SosError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(SosError::NonFinite);
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Ok(FloatPoly { coeffs, basis })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Monomial => self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Basis::Chebyshev => {
                // Clenshaw
                let (mut b1, mut b2) = (0.0, 0.0);
                for c in self.coeffs.iter().skip(1).rev() {
                    let b0 = 2.0 * x * b1 - b2 + c;
                    b2 = b1;
                    b1 = b0;
                }
                let c0 = self.coeffs.first().copied().unwrap_or(0.0);
                x * b1 - b2 + c0
            }
        }
    }

    /// `x * self`, staying in the same basis.
    pub fn times_x(&self) -> FloatPoly {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        match self.basis {
            Basis::Monomial => out[1..].copy_from_slice(&self.coeffs),
            Basis::Chebyshev => {
                for (k, &c) in self.coeffs.iter().enumerate() {
                    // x T_k = (T_{k+1} + T_{|k-1|}) / 2, x T_0 = T_1
                    if k == 0 {
                        out[1] += c;
                    } else {
                        out[k + 1] += c / 2.0;
                        out[k - 1] += c / 2.0;
                    }
                }
            }
        }
        FloatPoly::new(out, self.basis).expect("finite input")
    }

    /// Monomial coefficients. Lossy for high Chebyshev degree.
    pub fn to_monomial(&self) -> FloatPoly {
        if self.basis == Basis::Monomial {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        // T_{k+1} = 2x T_k - T_{k-1}
        let mut prev: Vec<f64> = vec![1.0];
        let mut cur: Vec<f64> = vec![0.0, 1.0];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let t = if k == 0 { &prev } else { &cur };
            for (i, v) in t.iter().enumerate() {
                out[i] += c * v;
            }
            if k >= 1 {
                let mut next = vec![0.0; cur.len() + 1];
                for (i, v) in cur.iter().enumerate() {
                    next[i + 1] += 2.0 * v;
                }
                for (i, v) in prev.iter().enumerate() {
                    next[i] -= v;
                }
                prev = std::mem::replace(&mut cur, next);
            }
        }
        FloatPoly::new(out, Basis::Monomial).expect("finite input")
    }
}

/// `G(z) = (2z)^d p((z + 1/z)/2) = sum_i c_i 2^(d-i) z^(d-i) (z^2 + 1)^i`.
pub fn cosine_lift(p: &IntPoly) -> IntPoly {
    let Some(d) = p.degree() else {
        return IntPoly::zero();
    };
    let sq = IntPoly::from_i64s(&[1, 0, 1]);
    let mut pw = IntPoly::one();
    let mut out = IntPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let scale: BigInt = c << (d - i);
            out = &out + &pw.shift_up(d - i).scale(&scale);
        }
        pw = &pw * &sq;
    }
    out
}

/// All complex roots of `g`, repeated by multiplicity. Each root's residual
/// `|g(z)| / (max|g_i| max(1,|z|)^deg)` must be at most `tol`.
pub fn numeric_roots(g: &IntPoly, tol: f64) -> Result<Vec<Complex64>, SosError> {
    if g.is_zero() {
        return Err(SosError::DomainError("zero polynomial has no finite root set".into()));
    }
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for (f, mult) in squarefree_decomposition(g) {
        for z in precise_roots(&f)? {
            worst = worst.max(scaled_residual(g, &z).max(scaled_residual(&f, &z)));
            out.extend(std::iter::repeat_n(z.to_c64(), mult));
        }
    }
    if worst > tol {
        return Err(SosError::ConvergenceFailure { worst_residual: worst });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Partner {
    /// Root inside the unit disk; `1/conj(root)` found at this distance.
    Reflected { distance: f64 },
    /// Root on the unit circle; `h` takes half its multiplicity.
    UnitCircle { multiplicity: usize },
    /// `z = +-1`, from a zero of the target at `x = +-1`; `h` takes it fully.
    Endpoint { multiplicity: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingEntry {
    pub re: f64,
    pub im: f64,
    pub partner: Partner,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SosDecomposition {
    pub n: usize,
    pub a: FloatPoly,
    pub b: FloatPoly,
    pub grid_residual_sup: f64,
    pub grid_points: usize,
    pub root_pairing_log: Vec<PairingEntry>,
}

impl SosDecomposition {
    /// `A(q)^2 + (1 - q^2) B(q)^2`.
    pub fn eval(&self, q: f64) -> f64 {
        let a = self.a.eval(q);
        let b = self.b.eval(q);
        a * a + (1.0 - q * q) * b * b
    }
}

pub const GRID_POINTS: usize = 4096;

/// `p(x)` for an `f64` point, evaluated exactly and rounded once.
pub(crate) fn eval_exact_f64(p: &IntPoly, x: f64) -> f64 {
    let r = crate::exactpoly::BigRat::from_float(x).expect("finite");
    crate::exactpoly::rat_to_f64(&p.eval(&r))
}

/// Roots assigned to `h` for the squarefree factor `f` of multiplicity `mult`
/// in the polynomial being decomposed; the pairing log grows as a side effect.
fn assign_roots(
    f: &IntPoly,
    mult: usize,
    tol: f64,
    h_roots: &mut Vec<Fx>,
    log: &mut Vec<PairingEntry>,
) -> Result<(), SosError> {
    let lifted = cosine_lift(f);
    let zs = precise_roots(&lifted)?;
    let worst = zs.iter().map(|z| scaled_residual(&lifted, z)).fold(0.0, f64::max);
    if worst > tol {
        return Err(SosError::ConvergenceFailure { worst_residual: worst });
    }
    let circle_gap = 2f64.powi(-(roots::PREC as i32) / 4);
    for z in &zs {
        let c = z.to_c64();
        let ln_r = z.ln_abs();
        if ln_r.abs() < circle_gap {
            if mult % 2 == 1 {
                return Err(SosError::PairingAmbiguity(format!(
                    "unit-circle root {c} has odd multiplicity {mult}"
                )));
            }
            h_roots.extend(std::iter::repeat_n(z.clone(), mult / 2));
            log.push(PairingEntry { re: c.re, im: c.im, partner: Partner::UnitCircle { multiplicity: mult } });
        } else if ln_r < 0.0 {
            let target = c.conj().inv();
            let distance = zs
                .iter()
                .map(|w| (w.to_c64() - target).norm() / target.norm().max(1.0))
                .fold(f64::INFINITY, f64::min);
            if distance > 10.0 * tol {
                return Err(SosError::PairingAmbiguity(format!(
                    "no reflected partner for {c} (nearest at {distance:e})"
                )));
            }
            h_roots.extend(std::iter::repeat_n(z.clone(), mult));
            log.push(PairingEntry { re: c.re, im: c.im, partner: Partner::Reflected { distance } });
        }
    }
    Ok(())
}

/// Positive real `mant * 2^exp`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mant: f64,
    exp: i64,
}

impl Scaled {
    fn from_big(x: &BigInt) -> Scaled {
        let drop = x.bits().saturating_sub(64);
        let mant = (x >> drop).to_f64().expect("64 bits fit");
        Scaled { mant, exp: drop as i64 }.normalized()
    }

    fn normalized(self) -> Scaled {
        if self.mant == 0.0 {
            return self;
        }
        let e = self.mant.log2().floor() as i64;
        Scaled { mant: self.mant * 2f64.powi(-e as i32), exp: self.exp + e }
    }

    fn times_pow2(self, k: i64) -> Scaled {
        Scaled { mant: self.mant, exp: self.exp + k }
    }

    fn div(self, o: &Scaled) -> Scaled {
        Scaled { mant: self.mant / o.mant, exp: self.exp - o.exp }.normalized()
    }

    fn fourth_root(self) -> f64 {
        let r = self.exp.rem_euclid(4);
        let q = (self.exp - r) / 4;
        (self.mant * 2f64.powi(r as i32)).sqrt().sqrt() * 2f64.powi(q as i32)
    }
}

/// Real coefficients of `prod (z - r)` over `roots`, ascending.
fn real_poly_from_roots(roots: &[Fx]) -> Result<Vec<f64>, SosError> {
    let mut c = vec![Fx::one()];
    for r in roots {
        let mut next = vec![Fx::zero(); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a);
            next[i] = next[i].sub(&a.mul(r));
        }
        c = next;
    }
    let out: Vec<Complex64> = c.iter().map(Fx::to_c64).collect();
    let scale = out.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if out.iter().any(|z| z.im.abs() > 1e-20 * scale) {
        return Err(SosError::PairingAmbiguity("selected roots are not closed under conjugation".into()));
    }
    Ok(out.iter().map(|z| z.re).collect())
}

/// `U_j = 2 (T_j + T_{j-2} + ...)`, the last term halved when `j` is even.
fn second_kind_to_first(u: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; u.len()];
    for (j, &c) in u.iter().enumerate() {
        for k in (j % 2..=j).step_by(2) {
            t[k] += if k == 0 { c } else { 2.0 * c };
        }
    }
    t
}

/// Decomposes `p = A^2 + (1 - x^2) B^2` on `[-1, 1]` for a polynomial `p`
/// nonnegative there. Even-order zeros at `x = 0` are factored out first
/// and reattached to both `A` and `B`.
pub fn decompose(p: &IntPoly, tol: f64) -> Result<(FloatPoly, FloatPoly, Vec<PairingEntry>), SosError> {
    let v = p.valuation().ok_or_else(|| SosError::DomainError("zero polynomial".into()))?;
    if v % 2 == 1 {
        return Err(SosError::PairingAmbiguity(format!("zero of odd order {v} at the origin")));
    }
    let m_poly = p.shift_down(v).expect("valuation divides");
    let m = m_poly.degree().unwrap_or(0);
    let lc = m_poly.leading().unwrap().abs();

    let mut h_roots = Vec::with_capacity(m);
    let mut log = Vec::new();
    // x = +-1 lift to double roots z = +-1; they go into h directly
    let mut rest = m_poly.clone();
    for e in [1i64, -1] {
        let (mult, cof) = rest.deflate_rational_root(&rat_int(e));
        rest = cof;
        if mult > 0 {
            h_roots.extend(std::iter::repeat_n(Fx::from_int(&BigInt::from(e)), mult));
            log.push(PairingEntry { re: e as f64, im: 0.0, partner: Partner::Endpoint { multiplicity: mult } });
        }
    }
    for (f, mult) in squarefree_decomposition(&rest) {
        assign_roots(&f, mult, tol, &mut h_roots, &mut log)?;
    }
    if h_roots.len() != m {
        return Err(SosError::PairingAmbiguity(format!(
            "selected {} roots for a factor of degree {m}",
            h_roots.len()
        )));
    }
    // |p(cos t)| = kappa |h(e^{it})|^2 with kappa = |lc| / (2^m prod |root|);
    // kappa^2 is carried as mantissa and binary exponent to keep it exact-ish
    let mut k2 = Scaled::from_big(&(&lc * &lc)).times_pow2(-2 * m as i64);
    for r in &h_roots {
        k2 = k2.div(&Scaled::from_big(&(&r.re * &r.re + &r.im * &r.im)).times_pow2(-2 * roots::PREC as i64));
    }
    let root_kappa = k2.fourth_root();
    let h: Vec<f64> = real_poly_from_roots(&h_roots)?.iter().map(|c| c * root_kappa).collect();

    // e^{-ist} h(e^{it}) = A(cos t) + i sin t B(cos t), s = floor(m/2)
    let s = m / 2;
    let mut a = vec![0.0; m - s + 1];
    let mut b = vec![0.0; (m - s).max(s)];
    for (k, &hk) in h.iter().enumerate() {
        let j = k.abs_diff(s);
        a[j] += hk;
        if k > s {
            b[j - 1] += hk;
        } else if k < s {
            b[j - 1] -= hk;
        }
    }
    // sin(jt) = sin t U_{j-1}(cos t), so b holds second-kind coefficients
    let mut a = FloatPoly::new(a, Basis::Chebyshev)?;
    let mut b = FloatPoly::new(second_kind_to_first(&b), Basis::Chebyshev)?;
    for _ in 0..v / 2 {
        a = a.times_x();
        b = b.times_x();
    }
    Ok((a, b, log))
}

/// The decomposition for `N_n`, the numerator of `q^2 Q_n'`, with the
/// residual sup over a uniform grid of [`GRID_POINTS`] points on `[-1, 1]`.
pub fn build_ab(n: usize, tol: f64) -> Result<SosDecomposition, SosError> {
    if n < 2 {
        return Err(SosError::DomainError(format!("n must be at least 2, got {n}")));
    }
    let nn = build_qn(n).map_err(|e| SosError::DomainError(e.to_string()))?.nn_num;
    let (a, b, log) = decompose(&nn, tol)?;
    let mut dec = SosDecomposition {
        n,
        a,
        b,
        grid_residual_sup: 0.0,
        grid_points: GRID_POINTS,
        root_pairing_log: log,
    };
    dec.grid_residual_sup = grid_residual(&nn, &dec, GRID_POINTS);
    if dec.grid_residual_sup > tol {
        return Err(SosError::ResidualTooLarge { achieved: dec.grid_residual_sup, tol });
    }
    Ok(dec)
}

/// `max |p - A^2 - (1-q^2) B^2| / (1 + |p|)` over `points` equally spaced
/// points of `[-1, 1]`, with `p` evaluated exactly.
pub fn grid_residual(p: &IntPoly, dec: &SosDecomposition, points: usize) -> f64 {
    (0..points)
        .map(|i| {
            let q = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
            let exact = eval_exact_f64(p, q);
            (exact - dec.eval(q)).abs() / (1.0 + exact.abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifts() {
        assert_eq!(cosine_lift(&IntPoly::from_i64s(&[1, 0, 1])), IntPoly::from_i64s(&[1, 0, 6, 0, 1]));
        assert_eq!(cosine_lift(&IntPoly::from_i64s(&[0, 1])), IntPoly::from_i64s(&[1, 0, 1]));
        assert_eq!(cosine_lift(&IntPoly::constant(7)), IntPoly::constant(7));
        assert!(cosine_lift(&IntPoly::from_i64s(&[3, -1, 4, 1, 5])).is_palindromic());
    }

    #[test]
    fn roots_of_published_lift() {
        let g = IntPoly::from_i64s(&[1, 0, 6, 0, 1]);
        let mut r = numeric_roots(&g, 1e-12).unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        let s2 = 2f64.sqrt();
        let want = [-(1.0 + s2), -(s2 - 1.0), s2 - 1.0, 1.0 + s2];
        for (z, w) in r.iter().zip(want) {
            assert!(z.re.abs() < 1e-12 && (z.im - w).abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn n2_exact_shape() {
        let d = build_ab(2, 1e-8).unwrap();
        assert!(d.a.coeffs().iter().all(|c| c.abs() < 1e-15));
        let b = d.b.to_monomial();
        assert_eq!(b.degree(), Some(1));
        assert!((b.coeffs()[1] - 2f64.sqrt()).abs() < 1e-15, "{:?}", b.coeffs());
        assert!(b.coeffs()[0].abs() < 1e-15);
        assert!(d.grid_residual_sup < 1e-15);
    }

    #[test]
    fn chebyshev_evaluation() {
        // T_3 = 4x^3 - 3x
        let t3 = FloatPoly::new(vec![0.0, 0.0, 0.0, 1.0], Basis::Chebyshev).unwrap();
        assert!((t3.eval(0.3) - (4.0 * 0.027 - 0.9)).abs() < 1e-15);
        let m = t3.to_monomial();
        assert_eq!(m.coeffs(), &[0.0, -3.0, 0.0, 4.0]);
        let xt = t3.times_x().to_monomial();
        assert_eq!(xt.coeffs(), &[0.0, 0.0, -3.0, 0.0, 4.0]);
        assert!(FloatPoly::new(vec![f64::NAN], Basis::Monomial).is_err());
    }

    #[test]
    fn n4_lift_roots_symmetric() {
        let nn = build_qn(4).unwrap().nn_num;
        let m = nn.shift_down(2).unwrap();
        let g = cosine_lift(&m);
        assert!(g.is_palindromic());
        let tol = 1e-10;
        let roots = numeric_roots(&g, tol).unwrap();
        assert_eq!(roots.len(), g.degree().unwrap());
        let near = |w: Complex64| roots.iter().any(|z| (z - w).norm() <= 10.0 * tol * w.norm().max(1.0));
        for z in &roots {
            assert!(near(z.conj()), "conjugate of {z}");
            assert!(near(z.conj().inv()), "reflection of {z}");
        }
    }

    #[test]
    fn small_n_invariants() {
        for n in 3..=5 {
            let nn = build_qn(n).unwrap().nn_num;
            let d = build_ab(n, 1e-8).unwrap();
            let half = nn.degree().unwrap().div_ceil(2);
            assert!(d.a.degree().unwrap() <= half && d.b.degree().unwrap() <= half);
            for e in [-1.0, 1.0] {
                let exact = eval_exact_f64(&nn, e);
                assert!((d.a.eval(e).powi(2) - exact).abs() <= 1e-8 * (1.0 + exact.abs()));
            }
            assert!(d.root_pairing_log.iter().all(|p| match p.partner {
                Partner::Reflected { distance } => distance <= 1e-7,
                _ => true,
            }));
        }
    }
}
