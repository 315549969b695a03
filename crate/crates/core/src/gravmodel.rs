//! Branch phases and Pancharatnam phases of two Stern-Gerlach
//! interferometers coupled by gravity.
//!
//! Two masses `m = 2·m₀` are each split into a superposition of width `dx`;
//! the interferometer centres are `d` apart. Under *quantum* gravity every
//! branch sources its own field and the joint state picks up the branch
//! phases `φ₁` (closest pair, `d − dx` apart) and `φ₂` (farthest pair,
//! `d + dx` apart). Under *semiclassical* gravity each interferometer sees
//! only the mean mass of the other one, sitting at its centre, which gives a
//! single phase difference `φ` per interferometer.
//!
//! All phases are exactly linear in time, so a trace is sampled rather than
//! integrated. RF pulses and trap release are treated as instantaneous.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qstate::{
    concurrence, overlap_visibility, pancharatnam_phase, principal_arg, reduced_visibility,
    two_qubit_state, ComplexAmplitude, ORTHOGONALITY_TOL,
};

pub const G_DEFAULT: f64 = 6.674e-11;
pub const HBAR_DEFAULT: f64 = 1.0546e-34;
pub const C_DEFAULT: f64 = 2.9979e8;

pub const DEFAULT_TRACE_POINTS: usize = 2000;

/// How the coupling `α` combines the masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CouplingConvention {
    /// `α = G·m₀²·t/ħ`.
    #[default]
    M0Squared,
    /// `α = G·m₀·m·t/ħ = 2·G·m₀²·t/ħ`.
    M0TimesM,
}

impl CouplingConvention {
    pub fn factor(self) -> f64 {
        match self {
            CouplingConvention::M0Squared => 1.0,
            CouplingConvention::M0TimesM => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CouplingConvention::M0Squared => "M0Squared",
            CouplingConvention::M0TimesM => "M0TimesM",
        }
    }
}

impl fmt::Display for CouplingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CouplingConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M0Squared" | "m0sq" => Ok(CouplingConvention::M0Squared),
            "M0TimesM" | "m0m" => Ok(CouplingConvention::M0TimesM),
            other => Err(Error::InvalidParameter(format!(
                "unknown coupling convention '{other}' (expected M0Squared/m0sq or M0TimesM/m0m)"
            ))),
        }
    }
}

/// Masses, geometry, duration and constants of one experiment, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentParams {
    /// Per-branch mass; the full particle mass is `2·m0`.
    pub m0: f64,
    /// Centre-to-centre separation of the two interferometers.
    pub d: f64,
    /// Superposition split.
    pub dx: f64,
    /// Total interferometer time `T`.
    pub t_total: f64,
    pub g: f64,
    pub hbar: f64,
    /// Only used by the Casimir-Polder estimate.
    pub c: f64,
    pub coupling: CouplingConvention,
}

impl Default for ExperimentParams {
    /// `m₀ = 5×10⁻¹⁴ kg`, `d = 450 µm`, `Δx = 250 µm`, `T = 1.5 s`.
    fn default() -> Self {
        Self {
            m0: 5e-14,
            d: 450e-6,
            dx: 250e-6,
            t_total: 1.5,
            g: G_DEFAULT,
            hbar: HBAR_DEFAULT,
            c: C_DEFAULT,
            coupling: CouplingConvention::M0Squared,
        }
    }
}

impl ExperimentParams {
    pub fn with_coupling(mut self, coupling: CouplingConvention) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m0", self.m0),
            ("T", self.t_total),
            ("G", self.g),
            ("hbar", self.hbar),
            ("c", self.c),
        ];
        for (name, value) in positive {
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
            if value <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} > 0 violated ({name} = {value})"
                )));
            }
        }
        if !self.d.is_finite() || !self.dx.is_finite() {
            return Err(Error::Geometry("d and dx must be finite".into()));
        }
        if self.dx <= 0.0 {
            return Err(Error::Geometry(format!(
                "dx > 0 violated (dx = {})",
                self.dx
            )));
        }
        if self.d <= self.dx {
            return Err(Error::Geometry(format!(
                "d > dx violated (d = {}, dx = {}): branches touch or cross",
                self.d, self.dx
            )));
        }
        Ok(())
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.t_total).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                total: self.t_total,
            });
        }
        Ok(())
    }

    /// `α/t`, in m/s.
    fn alpha_rate(&self) -> f64 {
        self.coupling.factor() * self.g * self.m0 * self.m0 / self.hbar
    }

    /// `(dφ₁/dt, dφ₂/dt, dφ/dt)`.
    pub fn phase_rates(&self) -> Result<(f64, f64, f64)> {
        self.validate()?;
        let scale = self.alpha_rate() * self.dx;
        let (d, dx) = (self.d, self.dx);
        Ok((
            scale / (d * (d - dx)),
            -scale / (d * (d + dx)),
            scale / ((d - dx / 2.0) * (d + dx / 2.0)),
        ))
    }
}

/// Coupling `α(t)`, a length.
pub fn alpha(p: &ExperimentParams, t: f64) -> Result<f64> {
    p.validate()?;
    p.check_time(t)?;
    Ok(p.alpha_rate() * t)
}

/// Quantum-gravity branch phases `(φ₁, φ₂)` at time `t`.
pub fn branch_phases(p: &ExperimentParams, t: f64) -> Result<(f64, f64)> {
    let (r1, r2, _) = p.phase_rates()?;
    p.check_time(t)?;
    Ok((r1 * t, r2 * t))
}

/// Semiclassical phase difference `φ(t)` of one interferometer.
pub fn semiclassical_phase(p: &ExperimentParams, t: f64) -> Result<f64> {
    let (_, _, rate) = p.phase_rates()?;
    p.check_time(t)?;
    Ok(rate * t)
}

/// Closed form of `Arg⟨Ψ(0)|Ψ(t)⟩` for the two-qubit state:
/// `atan2(sin s·cos δ, 1 + cos s·cos δ)` with `s = (φ₁+φ₂)/2`,
/// `δ = (φ₁−φ₂)/2`.
pub fn phase_quantum_closed(phi1: f64, phi2: f64) -> Result<f64> {
    if !phi1.is_finite() || !phi2.is_finite() {
        return Err(Error::NonFinite("branch phases"));
    }
    let s = (phi1 + phi2) / 2.0;
    let delta = (phi1 - phi2) / 2.0;
    // The overlap is half of (1 + cos s·cos δ) + i·sin s·cos δ.
    let z = ComplexAmplitude::new(1.0 + s.cos() * delta.cos(), s.sin() * delta.cos()) / 2.0;
    principal_arg(z, ORTHOGONALITY_TOL)
}

/// Closed form of the single-interferometer phase, `atan2(sin φ, 1 + cos φ)`,
/// i.e. `φ/2` folded into `(−π/2, π/2)`. Jumps by `π` at odd multiples of
/// `π`, where it is undefined.
pub fn phase_classical_closed(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    // Half-angle form of (1 + e^{iφ})/2 = cos(φ/2)·e^{iφ/2}; avoids the
    // cancellation in 1 + cos φ near the jump.
    let (sin_h, cos_h) = (phi / 2.0).sin_cos();
    let z = ComplexAmplitude::new(cos_h * cos_h, sin_h * cos_h);
    principal_arg(z, ORTHOGONALITY_TOL)
}

/// Observables of both hypotheses at one instant.
///
/// `phi_c` is the phase of a single interferometer; the joint product
/// state of the pair would carry `2·phi_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi_sc: f64,
    /// `None` where the overlap vanishes.
    pub phi_q: Option<f64>,
    /// `None` where `vis_c` is below the orthogonality tolerance.
    pub phi_c: Option<f64>,
    pub vis_q_global: f64,
    pub vis_q_reduced: f64,
    pub vis_c: f64,
    pub concurrence: f64,
}

/// Evaluates every observable at time `t`. Undefined phases are recorded as
/// `None` rather than reported as errors.
pub fn evolve(p: &ExperimentParams, t: f64) -> Result<TraceRow> {
    let (phi1, phi2) = branch_phases(p, t)?;
    let phi_sc = semiclassical_phase(p, t)?;

    let initial = two_qubit_state(0.0, 0.0)?;
    let state = two_qubit_state(phi1, phi2)?;
    let phi_q = defined(pancharatnam_phase(initial.as_pure(), state.as_pure()))?;
    let phi_c = defined(phase_classical_closed(phi_sc))?;

    Ok(TraceRow {
        t,
        phi1,
        phi2,
        phi_sc,
        phi_q,
        phi_c,
        vis_q_global: overlap_visibility(initial.as_pure(), state.as_pure())?,
        vis_q_reduced: reduced_visibility(&state, 1)?,
        vis_c: (phi_sc / 2.0).cos().abs(),
        concurrence: concurrence(&state),
    })
}

fn defined(phase: Result<f64>) -> Result<Option<f64>> {
    match phase {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedPhase { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `n` uniformly spaced times from `t0` to `t1`, both endpoints exact.
pub fn time_grid(window: (f64, f64), n: usize) -> Vec<f64> {
    let (t0, t1) = window;
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => {
            let step = (t1 - t0) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { t1 } else { t0 + step * i as f64 })
                .collect()
        }
    }
}

/// Times in `window` where the semiclassical phase crosses an odd multiple
/// of `π`, i.e. where `phi_c` jumps and `vis_c` vanishes.
pub fn semiclassical_singular_times(p: &ExperimentParams, window: (f64, f64)) -> Result<Vec<f64>> {
    let (_, _, rate) = p.phase_rates()?;
    let (t0, t1) = window;
    let mut k = ((rate * t0 / PI - 1.0) / 2.0).ceil().max(0.0);
    let mut out = Vec::new();
    loop {
        let t = (2.0 * k + 1.0) * PI / rate;
        if t > t1 {
            break;
        }
        if t >= t0 {
            out.push(t);
        }
        k += 1.0;
    }
    Ok(out)
}

/// Uniform grid over `window` with the semiclassical singular times merged in,
/// so that a sampled trace shows the undefined point instead of stepping
/// over it.
pub fn trace_grid(p: &ExperimentParams, window: (f64, f64), n: usize) -> Result<Vec<f64>> {
    let mut grid = time_grid(window, n);
    grid.extend(semiclassical_singular_times(p, window)?);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline() -> ExperimentParams {
        ExperimentParams::default()
    }

    #[test]
    fn alpha_examples() {
        let p = baseline();
        assert_eq!(alpha(&p, 0.0).unwrap(), 0.0);
        // 6.674e-11 * 2.5e-27 * 0.75 / 1.0546e-34
        let expected = 6.674e-11 * 2.5e-27 * 0.75 / 1.0546e-34;
        let a = alpha(&p, 0.75).unwrap();
        assert!((a - expected).abs() < 1e-15);
        assert!((a - 1.187e-3).abs() < 1e-6);
        let a2 = alpha(&p.with_coupling(CouplingConvention::M0TimesM), 0.75).unwrap();
        assert!((a2 - 2.373e-3).abs() < 1e-6);
        assert!(matches!(alpha(&p, 1.6), Err(Error::TimeOutOfRange { .. })));
        assert!(alpha(&p, -0.1).is_err());
    }

    #[test]
    fn branch_phase_examples() {
        let p = baseline();
        assert_eq!(branch_phases(&p, 0.0).unwrap(), (0.0, 0.0));
        let (phi1, phi2) = branch_phases(&p, 0.75).unwrap();
        assert!((phi1 - 3.296).abs() < 1e-3, "{phi1}");
        assert!((phi2 + 0.942).abs() < 1e-3, "{phi2}");

        let tiny = ExperimentParams { dx: 1e-15, ..p };
        let (a, b) = branch_phases(&tiny, 0.75).unwrap();
        assert!(a.abs() < 1e-10 && b.abs() < 1e-10);
    }

    #[test]
    fn geometry_is_validated() {
        let p = ExperimentParams {
            dx: 500e-6,
            ..baseline()
        };
        assert!(matches!(branch_phases(&p, 0.1), Err(Error::Geometry(_))));
        let p = ExperimentParams {
            dx: 450e-6,
            ..baseline()
        };
        assert!(matches!(
            semiclassical_phase(&p, 0.1),
            Err(Error::Geometry(_))
        ));
        let p = ExperimentParams {
            m0: -1.0,
            ..baseline()
        };
        assert!(matches!(p.validate(), Err(Error::InvalidParameter(_))));
        let p = ExperimentParams { dx: 0.0, ..baseline() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn semiclassical_phase_examples() {
        let p = baseline();
        assert_eq!(semiclassical_phase(&p, 0.0).unwrap(), 0.0);
        let phi = semiclassical_phase(&p, 0.75).unwrap();
        assert!((phi - 1.587).abs() < 1e-3);
        let (_, _, rate) = p.phase_rates().unwrap();
        assert!((rate - 2.117).abs() < 1e-3);
        for i in 1..=20 {
            let t = 0.075 * i as f64;
            let (phi1, phi2) = branch_phases(&p, t).unwrap();
            let phi = semiclassical_phase(&p, t).unwrap();
            assert!(phi2 < phi && phi < phi1);
        }
    }

    #[test]
    fn phase_quantum_closed_examples() {
        assert_eq!(phase_quantum_closed(0.0, 0.0).unwrap(), 0.0);
        assert!(phase_quantum_closed(1.7, -1.7).unwrap().abs() < 1e-16);
        assert!(matches!(
            phase_quantum_closed(PI, PI),
            Err(Error::UndefinedPhase { .. })
        ));
        // overlap route
        let z = (ComplexAmplitude::new(2.0, 0.0)
            + ComplexAmplitude::from_polar(1.0, 3.296)
            + ComplexAmplitude::from_polar(1.0, -0.942))
            / 4.0;
        let closed = phase_quantum_closed(3.296, -0.942).unwrap();
        assert!((closed - z.arg()).abs() < 1e-12);
    }

    #[test]
    fn phase_classical_closed_examples() {
        assert_eq!(phase_classical_closed(0.0).unwrap(), 0.0);
        assert!((phase_classical_closed(PI / 2.0).unwrap() - PI / 4.0).abs() < 1e-15);
        let below = phase_classical_closed(PI - 1e-6).unwrap();
        let above = phase_classical_closed(PI + 1e-6).unwrap();
        assert!((below - (PI / 2.0 - 5e-7)).abs() < 1e-12);
        assert!((above + (PI / 2.0 - 5e-7)).abs() < 1e-12);
        assert!(((below - above) - (PI - 1e-6)).abs() < 1e-12);
        assert!(matches!(
            phase_classical_closed(PI),
            Err(Error::UndefinedPhase { .. })
        ));
        assert!(matches!(
            phase_classical_closed(-3.0 * PI),
            Err(Error::UndefinedPhase { .. })
        ));
    }

    #[test]
    fn evolve_at_origin() {
        let row = evolve(&baseline(), 0.0).unwrap();
        assert_eq!((row.phi1, row.phi2, row.phi_sc), (0.0, 0.0, 0.0));
        assert_eq!(row.phi_q, Some(0.0));
        assert_eq!(row.phi_c, Some(0.0));
        assert!((row.vis_q_global - 1.0).abs() < 1e-15);
        assert!((row.vis_q_reduced - 1.0).abs() < 1e-15);
        assert_eq!(row.vis_c, 1.0);
        assert!(row.concurrence < 1e-16);
    }

    #[test]
    fn evolve_marks_semiclassical_singularity() {
        for (coupling, expected) in [
            (CouplingConvention::M0Squared, 1.484),
            (CouplingConvention::M0TimesM, 0.742),
        ] {
            let p = baseline().with_coupling(coupling);
            let singular = semiclassical_singular_times(&p, (0.0, p.t_total)).unwrap();
            assert_eq!(singular.len(), 1);
            assert!((singular[0] - expected).abs() < 1e-3);
            let row = evolve(&p, singular[0]).unwrap();
            assert!(row.vis_c < 1e-9);
            assert_eq!(row.phi_c, None);
            assert!(row.phi_q.is_some());
        }
    }

    #[test]
    fn time_grid_hits_both_ends() {
        let g = time_grid((0.0, 1.5), 2000);
        assert_eq!(g.len(), 2000);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1999], 1.5);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(time_grid((0.2, 0.4), 1), vec![0.2]);
    }

    #[test]
    fn trace_grid_includes_singular_time() {
        let p = baseline();
        let grid = trace_grid(&p, (0.0, p.t_total), 2000).unwrap();
        assert_eq!(grid.len(), 2001);
        let singular = semiclassical_singular_times(&p, (0.0, p.t_total)).unwrap()[0];
        assert!(grid.contains(&singular));
        let none = trace_grid(&p, (0.0, 1.0), 10).unwrap();
        assert_eq!(none.len(), 10);
    }

    #[test]
    fn singular_times_cover_several_crossings() {
        let p = ExperimentParams {
            m0: 1e-13,
            ..baseline()
        };
        let (_, _, rate) = p.phase_rates().unwrap();
        let times = semiclassical_singular_times(&p, (0.0, p.t_total)).unwrap();
        assert_eq!(
            times.len(),
            ((rate * p.t_total / PI + 1.0) / 2.0).floor() as usize
        );
        for t in times {
            let phi = semiclassical_phase(&p, t).unwrap();
            let k = ((phi / PI - 1.0) / 2.0).round();
            assert!((phi - (2.0 * k + 1.0) * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn convention_parses_both_spellings() {
        assert_eq!(
            "m0m".parse::<CouplingConvention>().unwrap(),
            CouplingConvention::M0TimesM
        );
        assert_eq!(
            "M0Squared".parse::<CouplingConvention>().unwrap(),
            CouplingConvention::M0Squared
        );
        assert!("m0".parse::<CouplingConvention>().is_err());
    }
}
