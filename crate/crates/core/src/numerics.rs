//! Finite-difference stencils and convergence fits.

/// Least-squares slope of `log(err)` against `log(h)`.
///
/// Returns `NaN` when fewer than two points have positive error.
pub fn loglog_slope(steps: &[f64], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .zip(errors)
        .filter(|(h, e)| **h > 0.0 && **e > 0.0)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Weights of the 4th-order central first-derivative stencil at offsets
/// `−2h, −h, +h, +2h`, to be divided by `h`.
pub const CENTRAL4: [(f64, f64); 4] = [
    (-2.0, 1.0 / 12.0),
    (-1.0, -8.0 / 12.0),
    (1.0, 8.0 / 12.0),
    (2.0, -1.0 / 12.0),
];

/// Whether `step` is too small to move `coordinate` meaningfully.
pub fn step_underflows(step: f64, coordinate: f64) -> bool {
    !(step > 0.0) || step <= 64.0 * f64::EPSILON * coordinate.abs().max(1.0)
}
