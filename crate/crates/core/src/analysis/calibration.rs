use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gravmodel::{semiclassical_phase, ExperimentParams};

/// Outcome of the two-step calibration protocol: a bias pulse parks a single
/// interferometer at `π − δφ/2`, and the gravitational phase `δφ` drives it
/// across the singularity at `π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult {
    /// Semiclassical phase accumulated over the full time `T`.
    pub delta_phi: f64,
    pub detectable: bool,
    /// Smallest `m₀` whose `δφ` still reaches the sensitivity at time `T`.
    pub min_m0: f64,
    /// Bias set by the pulse, `π − δφ/2`.
    pub working_point: f64,
}

pub fn calibrate(p: &ExperimentParams, sensitivity: f64) -> Result<CalibrationResult> {
    if !(sensitivity > 0.0 && sensitivity.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sensitivity > 0 violated (sensitivity = {sensitivity})"
        )));
    }
    let delta_phi = semiclassical_phase(p, p.t_total)?;
    Ok(CalibrationResult {
        delta_phi,
        detectable: delta_phi >= sensitivity,
        // δφ ∝ m₀²
        min_m0: p.m0 * (sensitivity / delta_phi).sqrt(),
        working_point: PI - delta_phi / 2.0,
    })
}
