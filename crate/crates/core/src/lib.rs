//! Simulation and analysis of dual Stern-Gerlach interferometers coupled by
//! gravity.
//!
//! The two gravity hypotheses are told apart by the Pancharatnam phase
//! `Arg⟨Ψ(0)|Ψ(t)⟩`: semiclassical gravity leaves each interferometer in an
//! external field and the phase jumps by `π` where the overlap vanishes,
//! while quantum gravity entangles the pair and the phase stays continuous
//! with an inflection point instead.
//!
//! - [`qstate`]: overlaps, phases, visibilities, concurrence, negativity.
//! - [`gravmodel`]: experiment parameters and the phases they produce.
//! - [`analysis`]: jump/inflection/visibility-minimum detection, calibration
//!   and Casimir-Polder estimates.

pub mod analysis;
mod eigen;
pub mod error;
pub mod gravmodel;
pub mod qstate;

pub use analysis::{
    calibrate, cp_gravity_ratio, cp_potential, find_inflection, find_phase_jump, min_visibility,
    CalibrationResult, CpParams, JumpReport, Model, VisibilityKind, VisibilityMinimum,
};
pub use eigen::{hermitian_eigenvalues, hermitian_eigenvalues_with};
pub use error::{Error, Result};
pub use gravmodel::{evolve, CouplingConvention, ExperimentParams, TraceRow};
pub use qstate::{ComplexAmplitude, DensityMatrix4, PureState, TwoQubitState};
