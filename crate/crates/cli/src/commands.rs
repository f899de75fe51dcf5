//! Per-subcommand drivers. Each returns a report; per-n work fans out over
//! the thread pool and comes back in n order.

use rayon::prelude::*;

use qconvex_core::certify::{
    certify_convexity, certify_decreasing_left, certify_fn, certify_kn_ln, certify_parity_split, certify_qprime,
    qbinomial_nonconvexity_witness, PositivityCert,
};
use qconvex_core::exactpoly::{rat, rat_to_f64, BigRat};
use qconvex_core::partitions::{
    convergence_probe, f_derivatives_at, f_series, growth_decreasing_from, partition_numbers, uniform_grid,
};
use qconvex_core::qcore::{self, central_parity, f_recurrence_check, qcatalan_dyck_oracle, qcatalan_poly, QcoreError};
use qconvex_core::qfuncs::{
    ak_identity_check, conjecture_x_expansion, identity_suite, k3_xm_check, l3_t_expansion, special_q_values,
    u1_alpha_check, QfuncsError,
};
use qconvex_core::sosfactor::build_ab;

use crate::report::{Outcome, VerdictEntry};
use crate::CliError;

pub fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

/// Mismatch errors become failing verdicts; anything else is internal.
fn qfuncs_entry(n: usize, r: Result<VerdictEntry, QfuncsError>) -> Result<VerdictEntry, CliError> {
    match r {
        Ok(v) => Ok(v),
        Err(QfuncsError::MismatchError { what, detail }) => Ok(VerdictEntry::mismatch(n, format!("{what}: {detail}"))),
        Err(QfuncsError::Qcore(e @ QcoreError::MismatchError { .. })) => Ok(VerdictEntry::mismatch(n, e)),
        Err(e) => Err(internal(e)),
    }
}

pub fn per_n<F>(ns: &[usize], jobs: usize, f: F) -> Result<Vec<VerdictEntry>, CliError>
where
    F: Fn(usize) -> Result<VerdictEntry, CliError> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(internal)?;
    pool.install(|| ns.par_iter().map(|&n| f(n)).collect())
}

fn cert_entry(n: usize, cert: &PositivityCert, replay: bool) -> VerdictEntry {
    let mut e = VerdictEntry::pass_if(n, cert.is_positive());
    if let Some(w) = cert.witness() {
        e = e.witness(w);
    }
    e = e.with("certificate", cert);
    if replay {
        let ok = cert.replay();
        e = e.with("replay", ok);
        if !ok && e.verdict == Outcome::Pass {
            e = VerdictEntry::mismatch(n, "certificate replay failed").with("certificate", cert);
        }
    }
    e
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityChecks {
    pub identities: bool,
    pub special: bool,
    pub dyck_max: usize,
}

pub fn identities(ns: &[usize], checks: IdentityChecks, jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    per_n(ns, jobs, |n| {
        qfuncs_entry(n, (|| {
            let mut e = VerdictEntry::new(n, Outcome::Pass);
            let mut ok = true;
            if checks.identities {
                let ids = identity_suite(n)?;
                let rec = f_recurrence_check(n)?;
                ok &= ids.all() && rec;
                e = e
                    .with("lemma22", ids.lemma22)
                    .with("lemma23", ids.lemma23)
                    .with("eq22", ids.eq22)
                    .with("catalan_recurrence", rec);
            }
            if checks.special {
                let sv = qcore::special_values(n)?;
                let sq = special_q_values(n)?;
                e = e
                    .with("special_values", "pass")
                    .with("d2_at_neg1", sv.d2_at_neg1.to_string())
                    .with("q_at_neg1", sq.q_at_neg1.to_string())
                    .with("qprime_at_neg1", sq.qprime_at_neg1.to_string())
                    .with("qprime_claimed", sq.qprime_claimed.to_string())
                    .with("qprime_matches_claim", sq.qprime_matches_claim);
            }
            if n <= checks.dyck_max {
                let same = qcatalan_dyck_oracle(n)? == qcatalan_poly(n)?;
                ok &= same;
                e = e.with("dyck_oracle", same);
            }
            if !ok {
                e.verdict = Outcome::Fail;
                e = e.with("mismatch", "an exact identity failed");
            }
            Ok(e)
        })())
    })
}

pub fn convexity(ns: &[usize], replay: bool, jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    per_n(ns, jobs, |n| {
        let cert = certify_convexity(n).map_err(internal)?;
        Ok(cert_entry(n, &cert, replay))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    #[value(name = "Fn")]
    Fn,
    #[value(name = "Qprime")]
    Qprime,
    #[value(name = "Kn")]
    Kn,
    #[value(name = "Ln")]
    Ln,
    #[value(name = "decreasing-left")]
    DecreasingLeft,
    /// `F_n(-t) - F_n(t) > 0` on `(0, 1)`.
    #[value(name = "parity-split")]
    ParitySplit,
    /// A point of `(-1, 0)` where the central q-binomial is not convex.
    #[value(name = "qbinomial-nonconvex")]
    QbinomialNonconvex,
}

pub fn certify_target(target: Target, ns: &[usize], replay: bool, jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    per_n(ns, jobs, |n| {
        let wrong_parity = match target {
            Target::Kn => n % 2 == 1,
            Target::Ln => n % 2 == 0,
            _ => false,
        };
        if wrong_parity {
            return Ok(VerdictEntry::new(n, Outcome::Skipped).with("reason", "defined for the other parity"));
        }
        let cert = match target {
            Target::QbinomialNonconvex => return binomial_witness(n),
            Target::ParitySplit => match certify_parity_split(n).map_err(internal)? {
                Some(c) => Ok(c),
                None => return Ok(VerdictEntry::new(n, Outcome::Pass).with("identically_zero", true)),
            },
            Target::Fn => certify_fn(n),
            Target::Qprime => certify_qprime(n),
            Target::Kn | Target::Ln => certify_kn_ln(n),
            Target::DecreasingLeft => certify_decreasing_left(n),
        }
        .map_err(internal)?;
        Ok(cert_entry(n, &cert, replay))
    })
}

pub fn sos(ns: &[usize], tol: f64, with_coeffs: bool, jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    use qconvex_core::sosfactor::SosError;
    per_n(ns, jobs, |n| match build_ab(n, tol) {
        Ok(d) => {
            let mut e = VerdictEntry::new(n, Outcome::Pass)
                .with("grid_residual_sup", d.grid_residual_sup)
                .with("grid_points", d.grid_points)
                .with("deg_a", d.a.degree())
                .with("deg_b", d.b.degree())
                .with("paired_roots", d.root_pairing_log.len());
            if with_coeffs {
                e = e.with("a", &d.a).with("b", &d.b).with("root_pairing_log", &d.root_pairing_log);
            }
            Ok(e)
        }
        Err(SosError::ResidualTooLarge { achieved, tol }) => Ok(VerdictEntry::mismatch(
            n,
            format!("grid residual {achieved:e} above tolerance {tol:e}"),
        )
        .with("grid_residual_sup", achieved)),
        Err(e @ (SosError::PairingAmbiguity(_) | SosError::ConvergenceFailure { .. })) => {
            Ok(VerdictEntry::mismatch(n, e))
        }
        Err(e) => Err(internal(e)),
    })
}

pub fn parity(ns: &[usize], jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    per_n(ns, jobs, |n| {
        let p = central_parity(n).map_err(internal)?;
        let ok = p.central_coeff_odd == p.is_mersenne && p.nu_direct == p.nu_catalan && p.catalan_odd == p.central_coeff_odd;
        let mut e = VerdictEntry::pass_if(n, ok)
            .with("central_odd", p.central_coeff_odd)
            .with("is_mersenne", p.is_mersenne)
            .with("nu_catalan", p.nu_direct)
            .with("s_n_plus_1_minus_1", p.nu_catalan);
        if !ok {
            e = e.with("mismatch", "parity or valuation disagrees");
        }
        Ok(e)
    })
}

pub struct PartitionsArgs {
    pub order: usize,
    pub grid_points: usize,
    pub n_list: Vec<usize>,
    pub growth_max: usize,
}

pub fn partitions(a: &PartitionsArgs, jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    let mut out = Vec::new();

    let p = partition_numbers(a.order);
    let f = f_series(a.order);
    let series_ok = f.coeffs[0] == 1.into()
        && (a.order < 1 || f.coeffs[1] == 0.into())
        && (1..=a.order).all(|n| f.coeffs[n] == &p[n] - &p[n - 1]);
    let mut e = VerdictEntry::pass_if(a.order, series_ok)
        .with("check", "series_coefficients")
        .with("fsecond_at_0_from_series", f.coeffs.get(2).map(|c| (c * 2u32).to_string()));
    if !series_ok {
        e = e.with("mismatch", "F series coefficient differs from P(n) - P(n-1)");
    }
    out.push(e);

    let grid = uniform_grid(&rat(-9, 10), &rat(9, 10), a.grid_points);
    let vals: Vec<(BigRat, bool)> = {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(internal)?;
        pool.install(|| {
            grid.par_iter()
                .map(|q| {
                    let kmax = qconvex_core::partitions::choose_kmax(q);
                    let d = f_derivatives_at(q, kmax).map_err(internal)?;
                    Ok((q.clone(), d.f > BigRat::from_integer(0.into()) && d.fsecond > BigRat::from_integer(0.into())))
                })
                .collect::<Result<_, CliError>>()
        })?
    };
    let bad = vals.iter().find(|(_, ok)| !ok);
    let mut e = VerdictEntry::pass_if(a.grid_points, bad.is_none()).with("check", "f_and_fsecond_positive_on_grid");
    if let Some((q, _)) = bad {
        e = e.witness(q);
    }
    out.push(e);

    let table = convergence_probe(&grid, &a.n_list, None).map_err(internal)?;
    let mut prev: Option<f64> = None;
    for (i, row) in table.rows.iter().enumerate() {
        let ok = table.strictly_decreasing || prev.is_none_or(|p| row.sup_error < p);
        let mut e = VerdictEntry::pass_if(row.n, ok)
            .with("check", "convergence_probe")
            .with("sup_error", row.sup_error)
            .with("argmax", row.argmax.to_string())
            .with("kmax", table.kmax.get(i));
        if !ok {
            e = e.with("mismatch", "sup error did not decrease");
        }
        prev = Some(row.sup_error);
        out.push(e);
    }

    let onset = growth_decreasing_from(a.growth_max);
    out.push(
        VerdictEntry::pass_if(a.growth_max, onset < a.growth_max)
            .with("check", "log_growth_decreasing")
            .with("decreasing_from", onset),
    );
    out.sort_by_key(|e| e.n);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CoeffSet {
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "ak")]
    Ak,
    #[value(name = "L3")]
    L3,
    #[value(name = "X-expansion")]
    XExpansion,
    #[value(name = "K3")]
    K3,
}

/// Published expansion of the `L_3` numerator in powers of `t - 1`.
pub const L3_PUBLISHED: [i64; 11] = [33, 258, 691, 1012, 913, 548, 249, 108, 46, 14, 2];

pub fn coeffs(which: CoeffSet, ns: &[usize], jobs: usize) -> Result<Vec<VerdictEntry>, CliError> {
    match which {
        CoeffSet::Alpha => per_n(ns, jobs, |n| {
            qfuncs_entry(n, (|| {
                let r = u1_alpha_check(n)?;
                Ok(VerdictEntry::pass_if(n, r.matches && r.pairing_ok)
                    .with("matches", r.matches)
                    .with("pairing_ok", r.pairing_ok)
                    .with("alpha", r.alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>()))
            })())
        }),
        CoeffSet::Ak => Ok(vec![qfuncs_entry(12, (|| {
            let ak = ak_identity_check()?;
            Ok(VerdictEntry::new(12, Outcome::Pass).with("a_k", ak.iter().map(|a| a.to_string()).collect::<Vec<_>>()))
        })())?]),
        CoeffSet::L3 => Ok(vec![qfuncs_entry(3, (|| {
            let l3 = l3_t_expansion()?;
            let got: Vec<String> = l3.shifted.iter().map(|c| c.to_string()).collect();
            let want: Vec<String> = L3_PUBLISHED.iter().map(|c| c.to_string()).collect();
            let mut e = VerdictEntry::pass_if(3, got == want)
                .with("expansion", &got)
                .with("denominator", l3.denominator.to_string());
            if got != want {
                e = e.with("mismatch", format!("published {want:?}"));
            }
            Ok(e)
        })())?]),
        CoeffSet::XExpansion => per_n(ns, jobs, |m| {
            qfuncs_entry(m, (|| {
                let x = conjecture_x_expansion(m)?;
                let mut e = VerdictEntry::pass_if(m, x.all_positive && x.matches_ln)
                    .with("odd_n", 2 * m + 1)
                    .with("zero_order_at_one", x.zero_order_at_one)
                    .with("all_positive", x.all_positive)
                    .with("matches_ln", x.matches_ln)
                    .with("degree", x.x.degree());
                if e.verdict == Outcome::Fail {
                    e = e.with("mismatch", "expansion has a nonpositive coefficient");
                }
                Ok(e)
            })())
        }),
        CoeffSet::K3 => per_n(ns, jobs, |m| {
            qfuncs_entry(m, (|| {
                let r = k3_xm_check(m)?;
                let mut e = VerdictEntry::pass_if(m, r.k3_positive)
                    .with("k3_positive", r.k3_positive)
                    .with("x_m", r.x_m_approx)
                    .with("x_m_below_15_over_2", r.below_bound)
                    .with("x_m_increasing", r.increasing)
                    .with("direct_inequality", r.direct_inequality);
                if !r.k3_positive {
                    e = e.with("mismatch", "K3 not certified positive");
                }
                Ok(e)
            })())
        }),
    }
}

fn binomial_witness(n: usize) -> Result<VerdictEntry, CliError> {
    Ok(match qbinomial_nonconvexity_witness(n) {
        Some(q) => {
            let d2 = qcore::q_binomial(2 * n as i64, n as i64).map_err(internal)?.nth_derivative(2);
            let v = d2.eval(&q);
            VerdictEntry::new(n, Outcome::Pass)
                .with("nonconvex_at", q.to_string())
                .with("second_derivative", v.to_string())
                .with("second_derivative_approx", rat_to_f64(&v))
        }
        None => VerdictEntry::new(n, Outcome::Skipped).with("reason", "no negative grid point found"),
    })
}
