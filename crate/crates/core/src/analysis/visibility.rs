use std::fmt;
use std::str::FromStr;

use super::{check_window, Model};
use crate::error::{Error, Result};
use crate::gravmodel::{
    branch_phases, semiclassical_phase, time_grid, ExperimentParams, DEFAULT_TRACE_POINTS,
};
use crate::qstate::{overlap_visibility, reduced_visibility, two_qubit_state};

/// Final bracket width of the golden-section search, in seconds.
pub const GOLDEN_SECTION_TOL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Global overlap modulus, or single-interferometer contrast with the
/// partner traced out. For the semiclassical model both are `|cos(φ/2)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VisibilityKind {
    Global,
    Reduced,
}

impl fmt::Display for VisibilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VisibilityKind::Global => "global",
            VisibilityKind::Reduced => "reduced",
        })
    }
}

impl FromStr for VisibilityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(VisibilityKind::Global),
            "reduced" => Ok(VisibilityKind::Reduced),
            other => Err(Error::InvalidParameter(format!(
                "unknown visibility '{other}' (expected global or reduced)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityMinimum {
    pub t_min: f64,
    pub v_min: f64,
    /// Set when the pre-scan was not unimodal and the grid argmin is returned.
    pub coarse: bool,
}

pub fn visibility(p: &ExperimentParams, model: Model, kind: VisibilityKind, t: f64) -> Result<f64> {
    match model {
        Model::Semiclassical => Ok((semiclassical_phase(p, t)? / 2.0).cos().abs()),
        Model::Quantum => {
            let (phi1, phi2) = branch_phases(p, t)?;
            let state = two_qubit_state(phi1, phi2)?;
            match kind {
                VisibilityKind::Global => {
                    let initial = two_qubit_state(0.0, 0.0)?;
                    overlap_visibility(initial.as_pure(), state.as_pure())
                }
                VisibilityKind::Reduced => reduced_visibility(&state, 1),
            }
        }
    }
}

pub fn min_visibility(
    p: &ExperimentParams,
    model: Model,
    kind: VisibilityKind,
    window: (f64, f64),
) -> Result<VisibilityMinimum> {
    min_visibility_with(
        p,
        model,
        kind,
        window,
        DEFAULT_TRACE_POINTS,
        GOLDEN_SECTION_TOL,
    )
}

/// Grid pre-scan followed by golden-section search between the neighbours
/// of the grid argmin. If the pre-scan is not unimodal the grid argmin is
/// returned with `coarse` set.
pub fn min_visibility_with(
    p: &ExperimentParams,
    model: Model,
    kind: VisibilityKind,
    window: (f64, f64),
    points: usize,
    tol: f64,
) -> Result<VisibilityMinimum> {
    check_window(p, window)?;
    if points < 3 {
        return Err(Error::InvalidParameter(
            "visibility scan needs at least 3 points".into(),
        ));
    }
    let f = |t: f64| visibility(p, model, kind, t);
    let grid = time_grid(window, points);
    let values = grid.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;

    let mut i = 0;
    for (k, &v) in values.iter().enumerate() {
        if v < values[i] {
            i = k;
        }
    }
    if !is_unimodal(&values, i) {
        return Ok(VisibilityMinimum {
            t_min: grid[i],
            v_min: values[i],
            coarse: true,
        });
    }

    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (t_min, v_min) = golden_section(f, lo, hi, tol)?;
    Ok(VisibilityMinimum {
        t_min,
        v_min,
        coarse: false,
    })
}

/// Non-increasing up to `argmin`, non-decreasing after it, up to rounding.
fn is_unimodal(values: &[f64], argmin: usize) -> bool {
    let slack = |a: f64, b: f64| 1e-14 * a.abs().max(b.abs()).max(1e-300);
    let falling = values[..=argmin]
        .windows(2)
        .all(|w| w[1] <= w[0] + slack(w[0], w[1]));
    let rising = values[argmin..]
        .windows(2)
        .all(|w| w[1] + slack(w[0], w[1]) >= w[0]);
    falling && rising
}

/// Golden-section search on `[lo, hi]`; returns the best point evaluated,
/// endpoints included.
fn golden_section<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut best = (lo, f(lo)?);
    let consider = |t: f64, v: f64, best: &mut (f64, f64)| {
        if v < best.1 {
            *best = (t, v);
        }
    };
    let v_hi = f(hi)?;
    consider(hi, v_hi, &mut best);

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    consider(x1, f1, &mut best);
    consider(x2, f2, &mut best);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
            consider(x1, f1, &mut best);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
            consider(x2, f2, &mut best);
        }
    }
    let mid = lo + (hi - lo) / 2.0;
    let v_mid = f(mid)?;
    consider(mid, v_mid, &mut best);
    Ok(best)
}
