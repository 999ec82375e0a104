//! Crossing times and least-squares fits used by the plateau and Ising
//! experiments.

use serde::Serialize;

/// First time `values` drops below `level`, linearly interpolated between the
/// bracketing samples. `None` if it never does.
pub fn crossing_time(times: &[f64], values: &[f64], level: f64) -> Option<f64> {
    let k = values.iter().position(|&v| v < level)?;
    if k == 0 {
        return Some(times[0]);
    }
    let (t0, t1, v0, v1) = (times[k - 1], times[k], values[k - 1], values[k]);
    Some(t0 + (v0 - level) / (v0 - v1) * (t1 - t0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = x.iter().zip(y).map(|(a, b)| b - (slope * a + intercept)).collect();
    Some(LinearFit { slope, intercept, residuals })
}

/// Largest interior local maximum `(time, value)`.
pub fn peak(times: &[f64], values: &[f64]) -> Option<(f64, f64)> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| values[k] > values[k - 1] && values[k] >= values[k + 1])
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .map(|k| (times[k], values[k]))
}
