//! Feature detection on model outputs plus feasibility estimates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gravmodel::{
    branch_phases, phase_classical_closed, semiclassical_phase, ExperimentParams,
};
use crate::qstate::{pancharatnam_phase, two_qubit_state};

mod calibration;
mod casimir;
mod inflection;
mod jump;
mod unwrap;
mod visibility;

pub use calibration::{calibrate, CalibrationResult};
pub use casimir::{
    clausius_mossotti, cp_gravity_ratio, cp_potential, cp_screening_ratio, CpParams,
};
pub use inflection::{find_inflection, find_inflection_with};
pub use jump::{
    find_phase_jump, find_phase_jump_with, locate_discontinuity, max_adjacent_jump, Discontinuity,
    JumpReport, ScanOptions, DEFAULT_JUMP_THRESHOLD,
};
pub use unwrap::unwrap_phase;
pub use visibility::{
    min_visibility, min_visibility_with, visibility, VisibilityKind, VisibilityMinimum,
    GOLDEN_SECTION_TOL,
};

/// Which gravity hypothesis generates the phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Semiclassical,
    Quantum,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Semiclassical => "semiclassical",
            Model::Quantum => "quantum",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semiclassical" => Ok(Model::Semiclassical),
            "quantum" => Ok(Model::Quantum),
            other => Err(Error::InvalidParameter(format!(
                "unknown model '{other}' (expected quantum or semiclassical)"
            ))),
        }
    }
}

/// Pancharatnam phase of `model` at `t`; `None` where it is undefined.
pub fn model_phase(p: &ExperimentParams, model: Model, t: f64) -> Result<Option<f64>> {
    let phase = match model {
        Model::Quantum => {
            let (phi1, phi2) = branch_phases(p, t)?;
            let initial = two_qubit_state(0.0, 0.0)?;
            let state = two_qubit_state(phi1, phi2)?;
            pancharatnam_phase(initial.as_pure(), state.as_pure())
        }
        Model::Semiclassical => phase_classical_closed(semiclassical_phase(p, t)?),
    };
    match phase {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedPhase { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn check_window(p: &ExperimentParams, window: (f64, f64)) -> Result<()> {
    p.validate()?;
    let (t0, t1) = window;
    if !(t0.is_finite() && t1.is_finite() && 0.0 <= t0 && t0 < t1 && t1 <= p.t_total) {
        return Err(Error::InvalidParameter(format!(
            "window ({t0}, {t1}) must satisfy 0 <= t0 < t1 <= T = {}",
            p.t_total
        )));
    }
    Ok(())
}
