use std::f64::consts::{FRAC_PI_2, PI};

use super::{check_window, model_phase, Model};
use crate::error::{Error, Result};
use crate::gravmodel::{
    phase_classical_closed, semiclassical_phase, time_grid, CouplingConvention, ExperimentParams,
    DEFAULT_TRACE_POINTS,
};

/// Smallest adjacent-sample phase step, in radians, counted as a jump.
pub const DEFAULT_JUMP_THRESHOLD: f64 = 0.5;

const REFINEMENT: usize = 4;

/// A located discontinuity of a Pancharatnam phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpReport {
    pub t_jump: f64,
    /// Right limit minus left limit across the bracket.
    pub magnitude: f64,
    pub bracket: (f64, f64),
    pub model: Model,
    pub convention: CouplingConvention,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub points: usize,
    pub threshold: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            points: DEFAULT_TRACE_POINTS,
            threshold: DEFAULT_JUMP_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discontinuity {
    pub bracket: (f64, f64),
    pub magnitude: f64,
}

/// First phase jump of `model` inside `window`, located to a bracket no
/// wider than `tol` seconds. `Ok(None)` means no jump.
pub fn find_phase_jump(
    p: &ExperimentParams,
    model: Model,
    window: (f64, f64),
    tol: f64,
) -> Result<Option<JumpReport>> {
    find_phase_jump_with(p, model, window, tol, &ScanOptions::default())
}

/// As [`find_phase_jump`]; `opts` only affects the quantum model, which is
/// scanned on a grid because its phase has no closed-form singular time.
pub fn find_phase_jump_with(
    p: &ExperimentParams,
    model: Model,
    window: (f64, f64),
    tol: f64,
    opts: &ScanOptions,
) -> Result<Option<JumpReport>> {
    check_window(p, window)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tol > 0 violated (tol = {tol})"
        )));
    }
    let found = match model {
        Model::Semiclassical => semiclassical_jump(p, window, tol)?,
        Model::Quantum => {
            locate_discontinuity(|t| model_phase(p, Model::Quantum, t), window, opts, tol)?
        }
    };
    Ok(found.map(|d| JumpReport {
        t_jump: d.bracket.0 + (d.bracket.1 - d.bracket.0) / 2.0,
        magnitude: d.magnitude,
        bracket: d.bracket,
        model,
        convention: p.coupling,
    }))
}

/// The semiclassical phase `φ(t)` is increasing and linear, so the jump is
/// the root of `φ(t) − (2k+1)π` for the first odd multiple above `φ(t0)`.
fn semiclassical_jump(
    p: &ExperimentParams,
    window: (f64, f64),
    tol: f64,
) -> Result<Option<Discontinuity>> {
    let (t0, t1) = window;
    let start = semiclassical_phase(p, t0)?;
    let mut k = ((start / PI + 1.0) / 2.0).floor();
    if (2.0 * k + 1.0) * PI <= start {
        k += 1.0;
    }
    let target = (2.0 * k + 1.0) * PI;
    if semiclassical_phase(p, t1)? < target {
        return Ok(None);
    }

    let mut lo = t0;
    let mut hi = t1;
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if semiclassical_phase(p, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Exactly on the singularity the phase is undefined; use the one-sided
    // limits, +π/2 from below and −π/2 from above.
    let left = phase_classical_closed(semiclassical_phase(p, lo)?).unwrap_or(FRAC_PI_2);
    let right = phase_classical_closed(semiclassical_phase(p, hi)?).unwrap_or(-FRAC_PI_2);
    Ok(Some(Discontinuity {
        bracket: (lo, hi),
        magnitude: right - left,
    }))
}

/// Index `i` and size of the largest step `|v[i+1] − v[i]|`. `NaN` samples
/// count as infinitely large steps. Ties go to the smallest index.
pub fn max_adjacent_jump(values: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, w) in values.windows(2).enumerate() {
        let step = step_size(w[0], w[1]);
        if !matches!(best, Some((_, b)) if step <= b) {
            best = Some((i, step));
        }
    }
    best
}

fn step_size(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::INFINITY
    } else {
        (b - a).abs()
    }
}

fn sample<F>(f: &F, times: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Option<f64>>,
{
    times
        .iter()
        .map(|&t| Ok(f(t)?.unwrap_or(f64::NAN)))
        .collect()
}

/// Generic scanner for a phase-like function of time.
///
/// Samples `f` on `opts.points` points, re-samples the neighbourhood of the
/// largest step four times finer, and reports a discontinuity only if the
/// refined step still exceeds `opts.threshold`. The jump is then narrowed by
/// repeated subdivision until the bracket is at most `tol` wide.
pub fn locate_discontinuity<F>(
    f: F,
    window: (f64, f64),
    opts: &ScanOptions,
    tol: f64,
) -> Result<Option<Discontinuity>>
where
    F: Fn(f64) -> Result<Option<f64>>,
{
    if opts.points < 2 {
        return Err(Error::InvalidParameter(
            "scan needs at least 2 points".into(),
        ));
    }
    let grid = time_grid(window, opts.points);
    let values = sample(&f, &grid)?;
    let Some((i, _)) = max_adjacent_jump(&values) else {
        return Ok(None);
    };

    let lo_idx = i.saturating_sub(1);
    let hi_idx = (i + 2).min(grid.len() - 1);
    let fine = time_grid(
        (grid[lo_idx], grid[hi_idx]),
        (hi_idx - lo_idx) * REFINEMENT + 1,
    );
    let fine_values = sample(&f, &fine)?;
    let (j, step) = max_adjacent_jump(&fine_values).expect("refined grid has >= 2 points");
    if step < opts.threshold {
        return Ok(None);
    }

    let (mut a, mut b) = (fine[j], fine[j + 1]);
    while b - a > tol {
        let sub = time_grid((a, b), REFINEMENT + 1);
        let sub_values = sample(&f, &sub)?;
        let (k, _) = max_adjacent_jump(&sub_values).expect("subdivision has >= 2 points");
        let (na, nb) = (sub[k], sub[k + 1]);
        if nb - na >= b - a {
            break;
        }
        a = na;
        b = nb;
    }

    let left = side_value(&f, window, a, -(b - a))?;
    let right = side_value(&f, window, b, b - a)?;
    let magnitude = left.zip(right).map_or(f64::NAN, |(l, r)| r - l);
    Ok(Some(Discontinuity {
        bracket: (a, b),
        magnitude,
    }))
}

/// `f(t)`, or the nearest defined value stepping away from the jump.
fn side_value<F>(f: &F, window: (f64, f64), t: f64, step: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<Option<f64>>,
{
    for k in 0..8 {
        let s = t + step * k as f64;
        if s < window.0 || s > window.1 {
            break;
        }
        if let Some(v) = f(s)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
