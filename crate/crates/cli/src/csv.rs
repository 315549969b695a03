//! CSV emission with a fixed number format.

use std::f64::consts::PI;
use std::fmt::Write as _;

use gravwitness_core::analysis::unwrap_phase;
use gravwitness_core::TraceRow;

pub const TRACE_HEADER: &str =
    "t,phi1,phi2,phi_sc,Phi_Q,Phi_C,vis_Q_global,vis_Q_reduced,vis_C,concurrence";

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `printf("%.{digits}g")`: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros removed. `NaN` prints as `NaN`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci
        .split_once('e')
        .expect("LowerExp always has an exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -5 || exponent >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exponent)
    } else {
        let decimals = (digits as i32 - 1 - exponent) as usize;
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

pub fn num(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

/// Renders trace rows under [`TRACE_HEADER`], LF line endings.
///
/// With `unwrap` the folded semiclassical phase is unwrapped with period `π`
/// so it follows `φ/2` through the singularity; undefined samples stay `NaN`.
pub fn trace_csv(rows: &[TraceRow], unwrap: bool) -> String {
    let phi_q: Vec<f64> = rows.iter().map(|r| r.phi_q.unwrap_or(f64::NAN)).collect();
    let mut phi_c: Vec<f64> = rows.iter().map(|r| r.phi_c.unwrap_or(f64::NAN)).collect();
    if unwrap {
        phi_c = unwrap_phase(&phi_c, PI);
    }
    let mut out = String::with_capacity(rows.len() * 160);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        let fields = [
            r.t,
            r.phi1,
            r.phi2,
            r.phi_sc,
            phi_q[i],
            phi_c[i],
            r.vis_q_global,
            r.vis_q_reduced,
            r.vis_c,
            r.concurrence,
        ];
        let line = fields.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "{line}");
    }
    out
}

/// Parses a trace CSV back into rows of ten numbers. `NaN` cells stay `NaN`.
pub fn read_trace_csv(text: &str) -> Result<Vec<[f64; 10]>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(TRACE_HEADER) => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let mut row = [0.0; 10];
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 10 {
                return Err(format!(
                    "row {}: expected 10 cells, got {}",
                    i + 2,
                    cells.len()
                ));
            }
            for (slot, cell) in row.iter_mut().zip(cells) {
                *slot = cell
                    .parse()
                    .map_err(|_| format!("row {}: bad cell `{cell}`", i + 2))?;
            }
            Ok(row)
        })
        .collect()
}
