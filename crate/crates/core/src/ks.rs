//! One-sample Kolmogorov–Smirnov statistic.

/// `sup |F_n(x) - F(x)|` for the empirical CDF of `values`.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic critical value `c(alpha) / sqrt(n)`, with `c = 1.358` at 5%.
pub fn ks_critical_5pct(n: usize) -> f64 {
    1.358 / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid() {
        // midpoints of n cells: D = 1/(2n)
        let n = 10;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.05).abs() < 1e-15);
    }

    #[test]
    fn shifted_sample() {
        let xs = [0.6, 0.7, 0.8, 0.9];
        // F(0.6) = 0.6 against 0 below it
        assert!((ks_statistic(&xs, |x| x) - 0.6).abs() < 1e-15);
    }
}
