/// Removes jumps of (multiples of) `period` between consecutive samples.
///
/// `NaN` samples are passed through and skipped when tracking the offset, so
/// a jump hidden behind an undefined sample is still removed. Use `2π` for
/// ordinary phases and `π` for the folded single-interferometer phase.
pub fn unwrap_phase(values: &[f64], period: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut offset = 0.0;
    let mut previous: Option<f64> = None;
    for &v in values {
        if v.is_nan() {
            out.push(v);
            continue;
        }
        if let Some(prev) = previous {
            offset -= period * ((v - prev) / period).round();
        }
        previous = Some(v);
        out.push(v + offset);
    }
    out
}
