use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::IoError;
use crate::baselines::CostRow;
use crate::driver::RunRecord;

pub const RUNRECORD_HEADER: &str = "gamma,inner_iters,volume,compliance,strain_energy,P_u,P_dual,elapsed_ms";
pub const COST_HEADER: &str =
    "method,nelx,nely,nelz,n_elements,outer_iters,inner_iters,mean_select_ms,mean_iter_ms,total_ms,converged";

/// C's `%.{digits}g`: shortest of fixed and scientific notation, trailing
/// zeros removed. Non-finite values print as `nan`, `inf`, `-inf`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = digits.max(1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g12(x: f64) -> String {
    format_g(x, 12)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), g12)
}

pub fn runrecord_csv(record: &RunRecord) -> String {
    let mut out = String::from(RUNRECORD_HEADER);
    out.push('\n');
    for e in &record.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            e.gamma,
            e.inner_iters,
            g12(e.volume),
            g12(e.compliance),
            g12(e.strain_energy),
            opt(e.p_u),
            opt(e.p_dual),
            g12(e.elapsed_ms)
        );
    }
    out
}

pub fn write_runrecord_csv(record: &RunRecord, path: &Path) -> Result<(), IoError> {
    write_text(path, &runrecord_csv(record))
}

pub fn cost_table_csv(rows: &[CostRow]) -> String {
    let mut out = String::from(COST_HEADER);
    out.push('\n');
    for r in rows {
        let dim = |k: usize| r.dims.get(k).copied().unwrap_or(1);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.method,
            dim(0),
            dim(1),
            dim(2),
            r.n_elements,
            r.outer_iters,
            r.inner_iters,
            g12(r.mean_select_ms),
            g12(r.mean_iter_ms),
            g12(r.total_ms),
            u8::from(r.converged)
        );
    }
    out
}

pub fn write_cost_table_csv(rows: &[CostRow], path: &Path) -> Result<(), IoError> {
    write_text(path, &cost_table_csv(rows))
}

/// Numeric table with a header line; every value printed with `%.12g`.
pub fn numeric_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| g12(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::{IterationLog, Method};

    #[test]
    fn g_format_matches_c() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.4, "0.4"),
            (133.72769412345678, "133.727694123"),
            (1.0 / 3.0, "0.333333333333"),
            (1e-5, "1e-05"),
            (0.0001234, "0.0001234"),
            (123456789012345.0, "1.23456789012e+14"),
            (999999999999.5, "1e+12"),
            (-2.5, "-2.5"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g(x, 12), want, "{x}");
        }
    }

    fn entry(gamma: usize, volume: f64) -> IterationLog {
        IterationLog {
            gamma,
            volume_target: volume,
            volume,
            inner_iters: 7,
            compliance: 1.5,
            strain_energy: 1.5,
            p_u: Some(-3.0),
            p_dual: None,
            tau_start: None,
            tau: None,
            beta: None,
            perturbed: false,
            changed: 0,
            select_ms: 0.0,
            elapsed_ms: 0.25,
        }
    }

    #[test]
    fn runrecord_layout() {
        let mut r = RunRecord::new(Method::Beso);
        assert_eq!(runrecord_csv(&r), format!("{RUNRECORD_HEADER}\n"));
        r.entries = vec![entry(1, 0.9), entry(2, 0.81), entry(3, 0.729)];
        let text = runrecord_csv(&r);
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().nth(2).unwrap(), "2,7,0.81,1.5,1.5,-3,nan,0.25");
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }
}
