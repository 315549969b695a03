use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gravmodel::{ExperimentParams, C_DEFAULT, HBAR_DEFAULT};

/// Two identical dielectric spheres of radius `radius`, centres `d` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpParams {
    pub radius: f64,
    pub d: f64,
    /// Relative permittivity.
    pub epsilon: f64,
    pub c: f64,
    pub hbar: f64,
}

impl CpParams {
    pub fn new(radius: f64, d: f64, epsilon: f64) -> Self {
        Self {
            radius,
            d,
            epsilon,
            c: C_DEFAULT,
            hbar: HBAR_DEFAULT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "R > 0 violated (R = {})",
                self.radius
            )));
        }
        if !(self.epsilon >= 1.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon >= 1 violated (epsilon = {})",
                self.epsilon
            )));
        }
        if !(self.c > 0.0 && self.hbar > 0.0) {
            return Err(Error::InvalidParameter(
                "c > 0 and hbar > 0 required".into(),
            ));
        }
        if self.d.is_nan() || self.d <= 2.0 * self.radius {
            return Err(Error::Geometry(format!(
                "d > 2R violated (d = {}, R = {}): spheres overlap",
                self.d, self.radius
            )));
        }
        Ok(())
    }
}

/// `(ε − 1)/(ε + 2)`.
pub fn clausius_mossotti(epsilon: f64) -> f64 {
    (epsilon - 1.0) / (epsilon + 2.0)
}

/// Order-of-magnitude Casimir-Polder estimate
/// `−(23ħc/4π)·(R/d)⁶·((ε−1)/(ε+2))²`.
///
/// The `(R/d)⁶` form is dimensionless, so the result carries the units of
/// `ħc` (J·m) rather than a plain energy. It is meant for comparisons at a
/// fixed geometry, not as an absolute potential.
pub fn cp_potential(cp: &CpParams) -> Result<f64> {
    cp.validate()?;
    let ratio = (cp.radius / cp.d).powi(6);
    Ok(-(23.0 * cp.hbar * cp.c / (4.0 * PI)) * ratio * clausius_mossotti(cp.epsilon).powi(2))
}

/// `V_CP(ε_a) / V_CP(ε_b)` at a shared geometry.
pub fn cp_screening_ratio(epsilon_a: f64, epsilon_b: f64) -> f64 {
    (clausius_mossotti(epsilon_a) / clausius_mossotti(epsilon_b)).powi(2)
}

/// `|V_CP| / (G·m₀²/d)`; values below one mean gravity dominates.
pub fn cp_gravity_ratio(cp: &CpParams, p: &ExperimentParams) -> Result<f64> {
    p.validate()?;
    let gravity = p.g * p.m0 * p.m0 / cp.d;
    Ok(cp_potential(cp)?.abs() / gravity)
}
