//! Pure-state linear algebra for one and two qubits.
//!
//! Two-qubit amplitudes are always stored in the order
//! `[↑↑, ↑↓, ↓↑, ↓↓]`, i.e. index `2·a + b` with `a` the first qubit and
//! `b` the second (0 = ↑, 1 = ↓). Every entanglement formula below relies on
//! that ordering.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};

pub type ComplexAmplitude = Complex64;

/// Tolerance on `Σ|aᵢ|² = 1`.
pub const NORM_TOL: f64 = 1e-12;

/// Overlap modulus below which the Pancharatnam phase is reported undefined.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Tolerance on hermiticity and unit trace of a density matrix.
pub const DENSITY_TOL: f64 = 1e-12;

/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<ComplexAmplitude>,
}

impl PureState {
    /// Wraps already-normalized amplitudes, rejecting anything that is not.
    pub fn new(amplitudes: Vec<ComplexAmplitude>) -> Result<Self> {
        check_dimension(amplitudes.len())?;
        check_finite(&amplitudes)?;
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<ComplexAmplitude>) -> Result<Self> {
        check_dimension(amplitudes.len())?;
        check_finite(&amplitudes)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[ComplexAmplitude] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let factor = Complex64::from_polar(1.0, theta);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }
}

fn check_dimension(n: usize) -> Result<()> {
    match n {
        2 | 4 => Ok(()),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

fn check_finite(amplitudes: &[ComplexAmplitude]) -> Result<()> {
    if amplitudes
        .iter()
        .all(|a| a.re.is_finite() && a.im.is_finite())
    {
        Ok(())
    } else {
        Err(Error::NonFinite("state amplitudes"))
    }
}

fn norm_sqr(amplitudes: &[ComplexAmplitude]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

fn check_normalized(state: &PureState) -> Result<()> {
    let n = state.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        Err(Error::NotNormalized(n))
    } else {
        Ok(())
    }
}

/// A normalized four-amplitude state in the `[↑↑, ↑↓, ↓↑, ↓↓]` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState(PureState);

impl TwoQubitState {
    pub fn new(state: PureState) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: 4,
            });
        }
        Ok(Self(state))
    }

    pub fn as_pure(&self) -> &PureState {
        &self.0
    }

    pub fn amplitudes(&self) -> [ComplexAmplitude; 4] {
        let a = self.0.amplitudes();
        [a[0], a[1], a[2], a[3]]
    }
}

impl AsRef<PureState> for TwoQubitState {
    fn as_ref(&self) -> &PureState {
        &self.0
    }
}

/// `⟨a|b⟩ = Σ conj(aᵢ)·bᵢ`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<ComplexAmplitude> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    check_normalized(a)?;
    check_normalized(b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Argument of a complex number as a principal value in `(-π, π]`, or
/// `UndefinedPhase` when its modulus is below `tol`.
pub fn principal_arg(z: ComplexAmplitude, tol: f64) -> Result<f64> {
    let modulus = z.norm();
    if modulus.is_nan() || modulus < tol {
        return Err(Error::UndefinedPhase { modulus });
    }
    let arg = z.im.atan2(z.re);
    Ok(if arg <= -PI { PI } else { arg })
}

/// Pancharatnam phase `Arg⟨initial|final⟩` between two endpoint states.
pub fn pancharatnam_phase(initial: &PureState, final_state: &PureState) -> Result<f64> {
    pancharatnam_phase_with_tol(initial, final_state, ORTHOGONALITY_TOL)
}

pub fn pancharatnam_phase_with_tol(
    initial: &PureState,
    final_state: &PureState,
    tol: f64,
) -> Result<f64> {
    principal_arg(inner_product(initial, final_state)?, tol)
}

/// Fringe visibility `|⟨initial|final⟩|`.
pub fn overlap_visibility(initial: &PureState, final_state: &PureState) -> Result<f64> {
    Ok(inner_product(initial, final_state)?.norm())
}

/// Fringe contrast of one interferometer with its partner traced out:
/// twice the modulus of the reduced density matrix coherence.
///
/// `which` is 1 for the first qubit and 2 for the second.
pub fn reduced_visibility(state: &TwoQubitState, which: usize) -> Result<f64> {
    check_normalized(state.as_pure())?;
    let [a0, a1, a2, a3] = state.amplitudes();
    let coherence = match which {
        // ρ₁[↑,↓] = Σ_b a(↑b)·conj(a(↓b))
        1 => a0 * a2.conj() + a1 * a3.conj(),
        2 => a0 * a1.conj() + a2 * a3.conj(),
        other => return Err(Error::InvalidQubit(other)),
    };
    Ok(2.0 * coherence.norm())
}

/// Pure-state concurrence `2|a₀a₃ − a₁a₂|`.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    let [a0, a1, a2, a3] = state.amplitudes();
    2.0 * (a0 * a3 - a1 * a2).norm()
}

/// `(|↑↑⟩ + e^{iφ₁}|↑↓⟩ + e^{iφ₂}|↓↑⟩ + |↓↓⟩)/2`.
pub fn two_qubit_state(phi1: f64, phi2: f64) -> Result<TwoQubitState> {
    if !phi1.is_finite() || !phi2.is_finite() {
        return Err(Error::NonFinite("branch phases"));
    }
    let one = Complex64::new(0.5, 0.0);
    Ok(TwoQubitState(PureState {
        amplitudes: vec![
            one,
            Complex64::from_polar(0.5, phi1),
            Complex64::from_polar(0.5, phi2),
            one,
        ],
    }))
}

/// `(|↑⟩ + e^{iφ}|↓⟩)/√2`.
pub fn single_qubit_superposition(phi: f64) -> Result<PureState> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phase"));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok(PureState {
        amplitudes: vec![Complex64::new(r, 0.0), Complex64::from_polar(r, phi)],
    })
}

/// 4×4 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    elements: [[ComplexAmplitude; 4]; 4],
}

impl DensityMatrix4 {
    #[allow(clippy::needless_range_loop)]
    pub fn new(elements: [[ComplexAmplitude; 4]; 4]) -> Result<Self> {
        for row in &elements {
            check_finite(row).map_err(|_| Error::NonFinite("density matrix"))?;
        }
        for i in 0..4 {
            for j in i..4 {
                let diff = (elements[i][j] - elements[j][i].conj()).norm();
                if diff > DENSITY_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}): deviation {diff:e}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..4).map(|i| elements[i][i]).sum();
        if (trace - 1.0).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace}, expected 1"
            )));
        }
        let eigenvalues = hermitian_eigenvalues(&elements)?;
        if let Some(&lowest) = eigenvalues.iter().find(|&&e| e < -PSD_TOL) {
            return Err(Error::InvalidDensityMatrix(format!(
                "not positive semidefinite: eigenvalue {lowest:e}"
            )));
        }
        Ok(Self { elements })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &TwoQubitState) -> Self {
        let a = state.amplitudes();
        let mut elements = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                elements[i][j] = a[i] * a[j].conj();
            }
        }
        Self { elements }
    }

    pub fn elements(&self) -> &[[ComplexAmplitude; 4]; 4] {
        &self.elements
    }

    /// Transpose on the second qubit: `ρ^{T₂}[(a b),(a' b')] = ρ[(a b'),(a' b)]`.
    pub fn partial_transpose(&self) -> [[ComplexAmplitude; 4]; 4] {
        let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for ap in 0..2 {
                    for bp in 0..2 {
                        out[2 * a + b][2 * ap + bp] = self.elements[2 * a + bp][2 * ap + b];
                    }
                }
            }
        }
        out
    }
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T₂}`.
pub fn negativity(rho: &DensityMatrix4) -> Result<f64> {
    let eigenvalues = hermitian_eigenvalues(&rho.partial_transpose())?;
    Ok(eigenvalues.iter().filter(|&&e| e < 0.0).map(|e| -e).sum())
}
