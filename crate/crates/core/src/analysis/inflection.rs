use super::{check_window, model_phase, Model};
use crate::error::{Error, Result};
use crate::gravmodel::{time_grid, ExperimentParams, DEFAULT_TRACE_POINTS};

const REFINEMENT: usize = 4;

/// Multiple of `ε·max|Φ|` below which a second difference is rounding noise.
const NOISE_FACTOR: f64 = 64.0;

/// First inflection point of the quantum phase `Φ_Q(t)` in `window`.
pub fn find_inflection(p: &ExperimentParams, window: (f64, f64)) -> Result<Option<f64>> {
    find_inflection_with(p, window, DEFAULT_TRACE_POINTS)
}

/// Samples `Φ_Q` on `points` grid points and returns the first time where
/// the centred second difference changes sign, refined on a four times finer
/// local grid and interpolated linearly between the bracketing samples.
///
/// Second differences at the rounding-noise level are ignored, so an
/// essentially linear phase reports no inflection.
pub fn find_inflection_with(
    p: &ExperimentParams,
    window: (f64, f64),
    points: usize,
) -> Result<Option<f64>> {
    check_window(p, window)?;
    if points < 3 {
        return Err(Error::InvalidParameter(
            "inflection scan needs at least 3 points".into(),
        ));
    }
    let grid = time_grid(window, points);
    let values = quantum_phases(p, &grid)?;
    let d2 = second_differences(&values);
    let Some((i, j)) = first_sign_change(&d2, noise_floor(&values)) else {
        return Ok(None);
    };

    // d2[k] is centred on grid[k + 1]; refine over the samples around both.
    let lo = grid[i];
    let hi = grid[j + 2];
    let fine = time_grid((lo, hi), (j + 2 - i) * REFINEMENT + 1);
    let fine_values = quantum_phases(p, &fine)?;
    let fine_d2 = second_differences(&fine_values);
    let (a, b, ta, tb) = match first_sign_change(&fine_d2, noise_floor(&fine_values)) {
        Some((fi, fj)) => (fine_d2[fi], fine_d2[fj], fine[fi + 1], fine[fj + 1]),
        None => (d2[i], d2[j], grid[i + 1], grid[j + 1]),
    };
    Ok(Some(ta + (tb - ta) * a / (a - b)))
}

fn quantum_phases(p: &ExperimentParams, times: &[f64]) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| model_phase(p, Model::Quantum, t)?.ok_or(Error::UndefinedPhase { modulus: 0.0 }))
        .collect()
}

fn second_differences(values: &[f64]) -> Vec<f64> {
    values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .collect()
}

fn noise_floor(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    NOISE_FACTOR * f64::EPSILON * scale
}

/// Indices of the first two consecutive above-noise entries with opposite
/// signs.
fn first_sign_change(d2: &[f64], noise: f64) -> Option<(usize, usize)> {
    let mut previous: Option<usize> = None;
    for (k, &v) in d2.iter().enumerate() {
        if v.abs() <= noise {
            continue;
        }
        if let Some(prev) = previous {
            if (d2[prev] > 0.0) != (v > 0.0) {
                return Some((prev, k));
            }
        }
        previous = Some(k);
    }
    None
}
