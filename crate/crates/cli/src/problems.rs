//! Two open problems: convexity of the log-ratio `W_n` on `(0, 1)`, and the
//! decrease of `E_t` on the real line.

use num_traits::Signed;

use qconvex_core::certify::{certify_ratfun_positive, Interval, PositivityCert};
use qconvex_core::exactpoly::{rat, rat_int, BigRat, IntPoly, RatFun};

use crate::commands::{internal, per_n};
use crate::report::{Outcome, VerdictEntry};
use crate::CliError;

/// Second derivative of `log(1 + s x^k)`:
/// `s k x^(k-2) (k - 1 - s x^k) / (1 + s x^k)^2`.
fn log_second_derivative(k: usize, s: i64) -> RatFun {
    let ki = k as i64;
    let num = &IntPoly::monomial(s * ki, k - 2) * &(&IntPoly::constant(ki - 1) + &IntPoly::monomial(-s, k));
    let base = if s > 0 { IntPoly::one_plus_pow(k) } else { IntPoly::one_minus_pow(k) };
    RatFun::reduce(num, &base * &base).expect("nonzero denominator")
}

/// `W_n''` with `W_n = log[(1+x^{4n-1})(1+x^{2n})(1-x^{2n+1}) / ((1+x^{2n+1})(1-x^{2n+2}))]`.
pub fn w_second_derivative(n: usize) -> RatFun {
    let g = log_second_derivative;
    let up = &(&g(4 * n - 1, 1) + &g(2 * n, 1)) + &g(2 * n + 1, -1);
    let down = &g(2 * n + 1, 1) + &g(2 * n + 2, -1);
    &up - &down
}

/// `W_n(x)` in floating point, for cross-checks.
pub fn w_value(n: usize, x: f64) -> f64 {
    let p = |k: usize| x.powi(k as i32);
    ((1.0 + p(4 * n - 1)) * (1.0 + p(2 * n)) * (1.0 - p(2 * n + 1)) / ((1.0 + p(2 * n + 1)) * (1.0 - p(2 * n + 2)))).ln()
}

pub fn w_scan(ns: &[usize], grid_size: usize, jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    if ns.iter().any(|&n| n < 2) {
        return Err(CliError::Usage("W_n needs n >= 2".into()));
    }
    per_n(ns, jobs, |n| {
        let w2 = w_second_derivative(n);
        let iv = Interval::open(rat_int(0), rat_int(1));
        match certify_ratfun_positive(&w2, &iv, &[], &format!("W_second_derivative/{n}")) {
            Ok(cert) => Ok(certified(n, &cert)),
            Err(e) => sampled(n, &w2, grid_size).map(|v| v.with("certify_error", e.to_string())),
        }
    })
}

fn certified(n: usize, cert: &PositivityCert) -> VerdictEntry {
    let mut e = VerdictEntry::pass_if(n, cert.is_positive())
        .with("method", "certified")
        .with("factored_zeros", cert.factored_zeros.iter().map(|(r, m)| (r.to_string(), *m)).collect::<Vec<_>>())
        .with("degree", cert.degree);
    if let Some(w) = cert.witness() {
        e = e.witness(w);
    }
    e
}

fn sampled(n: usize, f: &RatFun, grid_size: usize) -> Result<VerdictEntry, CliError> {
    let den = (grid_size + 1) as i64;
    for k in 1..den {
        let x = rat(k, den);
        let v = f.eval(&x).map_err(internal)?;
        if !v.is_positive() {
            return Ok(VerdictEntry::new(n, Outcome::Fail).witness(x).with("method", "sampled"));
        }
    }
    Ok(VerdictEntry::new(n, Outcome::Pass).with("method", "sampled").with("grid_size", grid_size))
}

/// `x / (t^x - 1)`, continuous at `x = 0`.
fn first_term(t: f64, x: f64) -> f64 {
    let lt = t.ln();
    if x == 0.0 {
        1.0 / lt
    } else {
        x / (x * lt).exp_m1()
    }
}

fn second_term(t: f64, x: f64) -> f64 {
    (x + 1.0) / (t.powf(x + 1.0) + 1.0)
}

pub fn e_value(t: f64, x: f64) -> f64 {
    first_term(t, x).powi(2) + second_term(t, x).powi(2)
}

pub struct EScan {
    pub t_list: Vec<BigRat>,
    pub x_min: f64,
    pub x_max: f64,
    pub grid_size: usize,
}

pub fn e_scan(a: &EScan) -> Result<Vec<VerdictEntry>, CliError> {
    if a.grid_size < 3 || a.x_min >= a.x_max {
        return Err(CliError::Usage("E scan needs grid_size >= 3 and x_min < x_max".into()));
    }
    let xs: Vec<f64> =
        (0..a.grid_size).map(|i| a.x_min + (a.x_max - a.x_min) * i as f64 / (a.grid_size - 1) as f64).collect();
    let mut out = Vec::new();
    for (i, tr) in a.t_list.iter().enumerate() {
        if *tr <= rat_int(1) {
            return Err(CliError::Usage(format!("t must exceed 1, got {tr}")));
        }
        let t = qconvex_core::exactpoly::rat_to_f64(tr);
        let e: Vec<f64> = xs.iter().map(|&x| e_value(t, x)).collect();
        let rise = (1..e.len()).find(|&j| e[j] >= e[j - 1]);
        let y: Vec<f64> = xs.iter().map(|&x| second_term(t, x).powi(2)).collect();
        let peak = (1..y.len() - 1).find(|&j| y[j] > y[j - 1] && y[j] > y[j + 1]).map(|j| xs[j]);
        let mut v = VerdictEntry::pass_if(i, rise.is_none() && peak.is_some())
            .with("t", tr.to_string())
            .with("strictly_decreasing", rise.is_none())
            .with("second_summand_local_max_at", peak);
        if let Some(j) = rise {
            v = v.witness(format!("{}", xs[j]));
        } else if peak.is_none() {
            v = v.with("mismatch", "second summand found monotonic on the grid");
        }
        out.push(v);
    }
    Ok(out)
}
