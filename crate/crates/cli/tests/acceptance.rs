//! Acceptance run: one PASS/FAIL line per criterion, each with its time budget.
//! Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use qconvex_core::certify::{
    certify_convexity, certify_fn, certify_kn_ln, certify_qprime, qbinomial_nonconvexity_witness, PositivityCert,
};
use qconvex_core::exactpoly::{rat, rat_int, BigRat};
use qconvex_core::partitions::{convergence_probe, f_derivatives_at, f_series, partition_numbers, uniform_grid};
use qconvex_core::qcore::{central_parity, q_binomial, qcatalan_dyck_oracle, qcatalan_poly, special_values};
use qconvex_core::qfuncs::{ak_identity_check, build_qn, identity_suite, l3_t_expansion, u1_alpha_check};
use qconvex_core::sosfactor::{build_ab, Basis};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn positive(cert: &PositivityCert) -> Result<(), String> {
    ensure(cert.is_positive() && cert.root_count_interior == 0 && cert.sample_sign > 0, || {
        format!("{}: {:?}", cert.target, cert.verdict)
    })
}

fn positive_with_replay(cert: &PositivityCert) -> Result<(), String> {
    positive(cert)?;
    ensure(cert.replay(), || format!("{}: replay failed", cert.target))
}

fn identities() -> Check {
    for n in 2..=12 {
        let r = identity_suite(n).map_err(|e| e.to_string())?;
        ensure(r.all(), || format!("n = {n}: {r:?}"))?;
    }
    Ok("three identities hold for n = 2..12".into())
}

fn special() -> Check {
    for n in 2..=30 {
        special_values(n).map_err(|e| format!("n = {n}: {e}"))?;
    }
    Ok("eight closed forms, n = 2..30 (both parities)".into())
}

fn dyck() -> Check {
    for n in 2..=9 {
        let oracle = qcatalan_dyck_oracle(n).map_err(|e| e.to_string())?;
        let product = qcatalan_poly(n).map_err(|e| e.to_string())?;
        ensure(oracle == product, || format!("n = {n}: enumeration differs"))?;
    }
    Ok("enumeration equals product formula, n = 2..9".into())
}

fn convexity() -> Check {
    for n in 2..=15 {
        let c = certify_convexity(n).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(c.root_count_interior == 0 && c.sample_sign > 0, || {
            format!("n = {n}: {} roots, sample sign {}", c.root_count_interior, c.sample_sign)
        })?;
        positive_with_replay(&c)?;
    }
    Ok("no real roots of the second derivative, replayed, n = 2..15".into())
}

fn main_theorems() -> Check {
    for n in 2..=20 {
        let f = certify_fn(n).map_err(|e| format!("Fn/{n}: {e}"))?;
        positive(&f)?;
        let fun = build_qn(n).map_err(|e| e.to_string())?.fn_;
        for x in [rat_int(-1), rat_int(1)] {
            let v = fun.eval(&x).map_err(|e| format!("Fn/{n} at {x}: {e}"))?;
            ensure(v == rat_int(0), || format!("Fn/{n}({x}) = {v}"))?;
        }
        positive(&certify_qprime(n).map_err(|e| format!("Qprime/{n}: {e}"))?)?;
    }
    for n in (2..=40).step_by(2) {
        let k = certify_kn_ln(n).map_err(|e| format!("Kn/{n}: {e}"))?;
        positive(&k)?;
        let at_zero = k.factored_zeros.iter().find(|(r, _)| *r == rat_int(0)).map_or(0, |z| z.1);
        ensure(at_zero % 2 == 0, || format!("Kn/{n}: zero of order {at_zero} at 0"))?;
    }
    Ok("Fn and Qprime for n = 2..20, Kn for even n <= 40".into())
}

fn conjecture() -> Check {
    let dir = std::env::temp_dir().join(format!("qconvex-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let out = dir.join("scan.json");
    let argv = ["qconvex", "scan-conjecture", "--odd-n-min", "3", "--odd-n-max", "41", "--output"]
        .iter()
        .map(|s| s.to_string())
        .chain([out.display().to_string()]);
    let code = qconvex_cli::run(argv);
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    std::fs::remove_dir_all(&dir).ok();
    let report: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(code == 0, || format!("exit code {code}"))?;
    let verdicts = report["verdicts"].as_array().ok_or("no verdicts")?;
    let ns: Vec<u64> = verdicts.iter().filter_map(|v| v["n"].as_u64()).collect();
    ensure(ns == (3..=41).step_by(2).collect::<Vec<u64>>(), || format!("n values {ns:?}"))?;
    for v in verdicts {
        ensure(v["verdict"] == "pass", || format!("n = {}: {}", v["n"], v["verdict"]))?;
    }
    Ok("Ln certified for odd n = 3..41, exit code 0".into())
}

const AK: [&str; 13] = [
    "2225214522",
    "9975561651",
    "19501465967",
    "22337785440",
    "16851826471",
    "8872479001",
    "3355972074",
    "921381440",
    "182598704",
    "25512480",
    "2388160",
    "134592",
    "3456",
];

fn constants() -> Check {
    let a: Vec<String> = ak_identity_check().map_err(|e| e.to_string())?.iter().map(|c| c.to_string()).collect();
    ensure(a == AK, || format!("a_k = {a:?}"))?;
    let l3 = l3_t_expansion().map_err(|e| e.to_string())?;
    let want: Vec<BigRat> = [33, 258, 691, 1012, 913, 548, 249, 108, 46, 14, 2].iter().map(|&c| rat_int(c)).collect();
    ensure(l3.shifted == want, || format!("L3 expansion {:?}", l3.shifted))?;
    for n in 2..=30 {
        let r = u1_alpha_check(n).map_err(|e| e.to_string())?;
        ensure(r.matches && r.pairing_ok, || format!("alpha n = {n}: matches {}, pairing {}", r.matches, r.pairing_ok))?;
    }
    Ok("13 a_k, 11 L3 coefficients, alpha for n = 2..30".into())
}

fn sos() -> Check {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let d = build_ab(n, 1e-8).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(d.grid_points == 4096, || format!("n = {n}: {} grid points", d.grid_points))?;
        ensure(d.grid_residual_sup <= 1e-8, || format!("n = {n}: residual {:e}", d.grid_residual_sup))?;
        worst = worst.max(d.grid_residual_sup);
        if n == 2 {
            let a = d.a.to_monomial();
            let b = d.b.to_monomial();
            ensure(a.coeffs().iter().all(|c| c.abs() <= f64::EPSILON), || format!("A = {:?}", a.coeffs()))?;
            ensure(b.basis() == Basis::Monomial && b.coeffs().len() == 2, || format!("B = {:?}", b.coeffs()))?;
            let sqrt2 = std::f64::consts::SQRT_2;
            ensure(b.coeffs()[0].abs() <= f64::EPSILON && (b.coeffs()[1] - sqrt2).abs() <= 2.0 * f64::EPSILON, || {
                format!("B = {:?}", b.coeffs())
            })?;
        }
    }
    Ok(format!("n = 2..8 on 4096 points, worst residual {worst:.2e}; n = 2 gives A = 0, B = sqrt2 q"))
}

fn limit_object() -> Check {
    let s = f_series(200);
    let p = partition_numbers(200);
    for n in 0..=200 {
        let want = if n == 0 { p[0].clone() } else { &p[n] - &p[n - 1] };
        ensure(s.coeffs[n] == want, || format!("coefficient {n}"))?;
    }
    let grid = uniform_grid(&rat(-9, 10), &rat(9, 10), 33);
    for q in &grid {
        let d = f_derivatives_at(q, qconvex_core::partitions::choose_kmax(q)).map_err(|e| e.to_string())?;
        ensure(d.fsecond > rat_int(0), || format!("F'' not positive at {q}"))?;
    }
    let table = convergence_probe(&grid, &[4, 6, 8, 10], None).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = table.rows.iter().map(|r| r.sup_error).collect();
    ensure(errs.windows(2).all(|w| w[1] < w[0]), || format!("sup errors {errs:?}"))?;
    let shown: Vec<String> = errs.iter().map(|e| format!("{e:.7e}")).collect();
    Ok(format!("series to 200, F'' > 0 at 33 points, probe errors {}", shown.join(" > ")))
}

fn parity() -> Check {
    for n in 2..=64 {
        let r = central_parity(n).map_err(|e| e.to_string())?;
        ensure(r.central_coeff_odd == r.is_mersenne, || format!("n = {n}: parity {}", r.central_coeff_odd))?;
        let s = (n + 1).count_ones();
        ensure(r.nu_direct == s - 1, || format!("n = {n}: valuation {} vs {}", r.nu_direct, s - 1))?;
    }
    Ok("central parity and valuation, n = 2..64".into())
}

fn binomial_counterexample() -> Check {
    for n in 2..=8 {
        if let Some(q) = qbinomial_nonconvexity_witness(n) {
            let d2 = q_binomial(2 * n as i64, n as i64).map_err(|e| e.to_string())?.nth_derivative(2);
            let v = d2.eval(&q);
            ensure(q > rat_int(-1) && q < rat_int(0) && v < rat_int(0), || format!("n = {n}: bad witness {q}"))?;
            return Ok(format!("n = {n}, q = {q}"));
        }
    }
    Err("no witness for n <= 8".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 11] = [
        ("identity suite", 10, identities),
        ("special values", 30, special),
        ("Dyck oracle", 60, dyck),
        ("convexity certificates", 600, convexity),
        ("positivity of Fn, Qprime, Kn", 300, main_theorems),
        ("Ln conjecture scan", 900, conjecture),
        ("published constants", 60, constants),
        ("SOS decomposition", 60, sos),
        ("partition limit", 60, limit_object),
        ("central parity", 120, parity),
        ("q-binomial counterexample", 30, binomial_counterexample),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, note) = match (&result, over) {
            (Ok(s), false) => ("PASS", s.clone()),
            (Ok(s), true) => ("FAIL", format!("over budget; {s}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status}  {name}: {note} ({:.2} s, budget {budget} s)",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
