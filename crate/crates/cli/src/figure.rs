//! Two-column curve data: exact rational abscissae, values to 15 significant digits.

use std::io::Write;

use qconvex_core::exactpoly::{rat, rat_int, rat_to_f64, BigRat};
use qconvex_core::partitions::uniform_grid;
use qconvex_core::qcore::qcatalan_poly;
use qconvex_core::qfuncs::{build_ln, build_qn};

use crate::commands::internal;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Curve {
    /// `F_4` on `[-1, 1]`.
    #[value(name = "F4-curve")]
    F4,
    /// `C_4` on `[-2, 2]`.
    #[value(name = "C4-curve")]
    C4,
    /// `L_5` at `q = -1/t` for `t` in `(1, 5]`.
    #[value(name = "L5-curve")]
    L5,
}

/// `value` with 15 significant digits, positional where reasonable.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let e = v.abs().log10().floor() as i32;
    if !(-5..15).contains(&e) {
        return format!("{v:.14e}");
    }
    let s = format!("{:.*}", (14 - e).max(0) as usize, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn curve_points(which: Curve, grid_size: usize) -> Result<Vec<(BigRat, f64)>, CliError> {
    if grid_size < 2 {
        return Err(CliError::Usage("grid size must be at least 2".into()));
    }
    let pts: Vec<BigRat> = match which {
        Curve::F4 => uniform_grid(&rat_int(-1), &rat_int(1), grid_size),
        Curve::C4 => uniform_grid(&rat_int(-2), &rat_int(2), grid_size),
        // open at 1
        Curve::L5 => (1..=grid_size as i64).map(|i| rat_int(1) + rat(4 * i, grid_size as i64)).collect(),
    };
    let f: Box<dyn Fn(&BigRat) -> Result<BigRat, CliError>> = match which {
        Curve::F4 => {
            let f4 = build_qn(4).map_err(internal)?.fn_;
            Box::new(move |x| f4.eval(x).map_err(internal))
        }
        Curve::C4 => {
            let c4 = qcatalan_poly(4).map_err(internal)?;
            Box::new(move |x| Ok(c4.eval(x)))
        }
        Curve::L5 => {
            let l5 = build_ln(5).map_err(internal)?.substitute_neg_reciprocal();
            Box::new(move |x| l5.eval(x).map_err(internal))
        }
    };
    pts.into_iter().map(|x| f(&x).map(|v| (x, rat_to_f64(&v)))).collect()
}

pub fn write_curve(out: &mut dyn Write, pts: &[(BigRat, f64)]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["x", "f"]).map_err(io)?;
    for (x, v) in pts {
        w.write_record([x.to_string(), fmt_sig(*v)]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value_at(pts: &[(BigRat, f64)], x: BigRat) -> f64 {
        pts.iter().find(|(p, _)| *p == x).unwrap().1
    }

    #[test]
    fn published_values() {
        let f4 = curve_points(Curve::F4, 201).unwrap();
        assert_eq!(value_at(&f4, rat_int(0)), 6.0);
        assert_eq!(value_at(&f4, rat_int(1)), 0.0);
        let c4 = curve_points(Curve::C4, 401).unwrap();
        assert_eq!(value_at(&c4, rat_int(0)), 1.0);
        assert_eq!(value_at(&c4, rat_int(1)), 14.0);
        assert!(c4.iter().all(|(_, v)| *v >= 1.0));
        let l5 = curve_points(Curve::L5, 100).unwrap();
        assert!(l5.iter().all(|(_, v)| *v > 0.0));
        assert!(l5.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(l5.last().unwrap().0, rat_int(5));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(6.0), "6");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_sig(123456.789), "123456.789");
        assert_eq!(fmt_sig(-2.5e-9), "-2.50000000000000e-9");
    }
}
