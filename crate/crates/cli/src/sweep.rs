//! One-dimensional parameter sweeps.

use rayon::prelude::*;

use gravwitness_core::analysis::{find_phase_jump, min_visibility, Model};
use gravwitness_core::gravmodel::{
    branch_phases, semiclassical_phase, time_grid, trace_grid, ExperimentParams,
};
use gravwitness_core::qstate::{concurrence, two_qubit_state};
use gravwitness_core::Result;

use crate::config::{RunConfig, SweepAxis, SweepScalar};
use crate::csv::num;

pub const SWEEP_HEADER: &str = "param,value,scalar";

/// Bracket width used for `t_jump` sweeps.
const JUMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub scalar: SweepScalar,
    /// `(parameter value, scalar)`, ascending in the parameter.
    pub points: Vec<(f64, f64)>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_HEADER);
        out.push('\n');
        for &(value, scalar) in &self.points {
            out.push_str(&format!(
                "{},{},{}\n",
                self.axis.param.name(),
                num(value),
                num(scalar)
            ));
        }
        out
    }
}

/// Evaluates the configured scalar on every grid point. Points may run in
/// parallel; results are merged by grid index. A point where the scalar is
/// undefined or the parameters are invalid yields `NaN`.
pub fn run_sweep(cfg: &RunConfig, axis: SweepAxis) -> SweepResult {
    let mut values = time_grid((axis.start, axis.stop), axis.count);
    values.sort_by(f64::total_cmp);
    let points = values
        .par_iter()
        .map(|&value| {
            let mut params = cfg.params;
            axis.param.apply(&mut params, value);
            let scalar = evaluate(cfg, &params).ok().flatten().unwrap_or(f64::NAN);
            (value, scalar)
        })
        .collect();
    SweepResult {
        axis,
        scalar: cfg.sweep_scalar,
        points,
    }
}

fn evaluate(cfg: &RunConfig, p: &ExperimentParams) -> Result<Option<f64>> {
    p.validate()?;
    let window = cfg.window.unwrap_or((0.0, p.t_total));
    Ok(match cfg.sweep_scalar {
        SweepScalar::TJump => {
            find_phase_jump(p, Model::Semiclassical, window, JUMP_TOL)?.map(|r| r.t_jump)
        }
        SweepScalar::VMin => Some(min_visibility(p, cfg.model, cfg.visibility, window)?.v_min),
        SweepScalar::DeltaPhi => Some(semiclassical_phase(p, p.t_total)?),
        SweepScalar::ConcurrenceMax => {
            let mut best: f64 = 0.0;
            for t in trace_grid(p, window, cfg.trace_points)? {
                let (phi1, phi2) = branch_phases(p, t)?;
                best = best.max(concurrence(&two_qubit_state(phi1, phi2)?));
            }
            Some(best)
        }
    })
}
