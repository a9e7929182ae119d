/// Mean and standard error of the mean (zero for a single value).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Linear-interpolation quantile of already sorted values.
fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty set");
    sorted_quantile(&sorted(values), q.clamp(0.0, 1.0))
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Quantile together with a standard error taken as half the width of the
/// one-sigma order-statistic interval around it.
pub fn quantile_with_stderr(values: &[f64], q: f64) -> (f64, f64) {
    assert!(!values.is_empty(), "quantile of an empty set");
    let s = sorted(values);
    let n = s.len() as f64;
    let centre = q * n;
    let spread = (n * q * (1.0 - q)).sqrt();
    let last = s.len() - 1;
    let lo = ((centre - spread).floor().max(0.0) as usize).min(last);
    let hi = ((centre + spread).ceil().max(0.0) as usize).min(last);
    (sorted_quantile(&s, q), 0.5 * (s[hi] - s[lo]))
}
