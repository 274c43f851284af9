//! Robust location and skewness estimators: sample quantiles, quartile
//! sets, the medcouple, Bowley's quartile skewness, and a capped moment
//! skewness.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Limit applied to the moment skewness before it enters a fence factor.
pub const SKEWNESS_CAP: f64 = 3.5;

/// Sample quantile estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantileMethod {
    /// Linear interpolation between order statistics at `h = (n-1)p`
    /// (Hyndman–Fan type 7).
    #[default]
    Linear,
    /// Interpolation at `h = (n+1)p - 1`, clamped to the sample range
    /// (Hyndman–Fan type 6).
    Weibull,
}

impl QuantileMethod {
    fn position(self, n: usize, prob: f64) -> f64 {
        let last = (n - 1) as f64;
        match self {
            QuantileMethod::Linear => last * prob,
            QuantileMethod::Weibull => ((n + 1) as f64 * prob - 1.0).clamp(0.0, last),
        }
    }
}

/// Quantile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], prob: f64, method: QuantileMethod) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::ProbabilityOutOfRange);
    }
    let h = method.position(sorted.len(), prob);
    let lo = h.floor();
    let frac = h - lo;
    let lo = lo as usize;
    if frac == 0.0 || lo + 1 >= sorted.len() {
        return Ok(sorted[lo]);
    }
    Ok(sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]))
}

/// Type-7 sample quantile.
pub fn quantile(sample: &Sample, prob: f64) -> Result<f64> {
    quantile_sorted(sample.sorted(), prob, QuantileMethod::Linear)
}

pub fn quantile_with(sample: &Sample, prob: f64, method: QuantileMethod) -> Result<f64> {
    quantile_sorted(sample.sorted(), prob, method)
}

/// First, second and third quartiles with the spreads derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuartileSet {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub iqr: f64,
    /// `q2 - q1`
    pub siqr_lower: f64,
    /// `q3 - q2`
    pub siqr_upper: f64,
}

impl QuartileSet {
    pub fn new(q1: f64, q2: f64, q3: f64) -> Result<Self> {
        if !(q1.is_finite() && q2.is_finite() && q3.is_finite()) {
            return Err(Error::InvalidQuartiles("non-finite quartile".into()));
        }
        if !(q1 <= q2 && q2 <= q3) {
            return Err(Error::InvalidQuartiles(format!(
                "expected q1 <= q2 <= q3, got ({q1}, {q2}, {q3})"
            )));
        }
        Ok(QuartileSet {
            q1,
            q2,
            q3,
            iqr: q3 - q1,
            siqr_lower: q2 - q1,
            siqr_upper: q3 - q2,
        })
    }
}

pub fn quartiles(sample: &Sample) -> Result<QuartileSet> {
    quartiles_with(sample, QuantileMethod::Linear)
}

pub fn quartiles_with(sample: &Sample, method: QuantileMethod) -> Result<QuartileSet> {
    let s = sample.sorted();
    let q1 = quantile_sorted(s, 0.25, method)?;
    let q2 = quantile_sorted(s, 0.5, method)?;
    let q3 = quantile_sorted(s, 0.75, method)?;
    QuartileSet::new(q1, q2, q3)
}

/// Medcouple: the median of `h(xi, xj) = ((xj - m) - (m - xi)) / (xj - xi)`
/// over all pairs with `xi <= m <= xj`, where `m` is the sample median.
/// Evaluated on centred values `z = x - m` as `(zj + zi) / (zj - zi)`.
///
/// Pairs where both members equal the median use the sign kernel: with `t`
/// observations tied at the median indexed `1..=t` on each side, the pair
/// `(i, j)` scores -1, 0 or +1 as `i + j - 1` is below, equal to, or above
/// `t`. Quadratic in the sample size.
pub fn medcouple(sample: &Sample) -> Result<f64> {
    let x = sample.sorted();
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations);
    }
    if x[0] == x[n - 1] {
        return Err(Error::ZeroSpread);
    }
    let m = if n % 2 == 1 {
        x[n / 2]
    } else {
        (x[n / 2 - 1] + x[n / 2]) / 2.0
    };

    // x is sorted: [below | tied | above]
    let below = x.partition_point(|&v| v < m);
    let above_start = x.partition_point(|&v| v <= m);
    let ties = above_start - below;
    let lower = &x[..below];
    let upper = &x[above_start..];

    let mut kernel = Vec::with_capacity((below + ties) * (upper.len() + ties));
    for &xi in lower {
        let zi = xi - m;
        for &xj in upper {
            let zj = xj - m;
            kernel.push((zj + zi) / (zj - zi));
        }
    }
    // xi < m paired with a tied xj scores -1; tied xi with xj > m scores +1
    kernel.extend(std::iter::repeat_n(-1.0, lower.len() * ties));
    kernel.extend(std::iter::repeat_n(1.0, upper.len() * ties));
    for i in 1..=ties {
        for j in 1..=ties {
            kernel.push(match (i + j - 1).cmp(&ties) {
                Ordering::Less => -1.0,
                Ordering::Equal => 0.0,
                Ordering::Greater => 1.0,
            });
        }
    }
    Ok(median_in_place(&mut kernel).clamp(-1.0, 1.0))
}

/// Median by selection; midpoint of the two central values for even counts.
fn median_in_place(v: &mut [f64]) -> f64 {
    let n = v.len();
    let mid = n / 2;
    let (left, &mut upper_mid, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    if n % 2 == 1 {
        upper_mid
    } else {
        let lower_mid = left.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lower_mid + upper_mid) / 2.0
    }
}

/// Ratio `(median(x > Q2) - median(x < Q2)) / IQR`.
///
/// This is the "difference of half medians over the IQR" skewness proxy.
/// Unlike the kernel medcouple it is nonnegative and not centred on zero
/// for symmetric data; it is kept as an alternative estimator for the
/// medcouple-driven fence methods.
pub fn half_median_ratio(sample: &Sample) -> Result<f64> {
    let x = sample.sorted();
    let q = quartiles(sample)?;
    if q.iqr <= 0.0 {
        return Err(Error::ZeroIqr);
    }
    let below = x.partition_point(|&v| v < q.q2);
    let above_start = x.partition_point(|&v| v <= q.q2);
    if below == 0 || above_start == x.len() {
        return Err(Error::EmptyHalf);
    }
    let lo = quantile_sorted(&x[..below], 0.5, QuantileMethod::Linear)?;
    let hi = quantile_sorted(&x[above_start..], 0.5, QuantileMethod::Linear)?;
    Ok((hi - lo) / q.iqr)
}

/// Bowley's quartile skewness `(Q3 + Q1 - 2 Q2) / IQR`.
pub fn bowley(q: &QuartileSet) -> Result<f64> {
    if q.iqr <= 0.0 {
        return Err(Error::ZeroIqr);
    }
    Ok(((q.q3 + q.q1 - 2.0 * q.q2) / q.iqr).clamp(-1.0, 1.0))
}

/// Adjusted Fisher–Pearson skewness `G1 = g1 * sqrt(n (n-1)) / (n - 2)`
/// computed from biased central moments.
pub fn moment_skewness(sample: &Sample) -> Result<f64> {
    let x = sample.values();
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations);
    }
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let (m2, m3) = x.iter().fold((0.0, 0.0), |(s2, s3), &v| {
        let d = v - mean;
        (s2 + d * d, s3 + d * d * d)
    });
    let (m2, m3) = (m2 / nf, m3 / nf);
    if m2 <= 0.0 {
        return Err(Error::ZeroSpread);
    }
    let g1 = m3 / m2.powf(1.5);
    Ok(g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0))
}

pub fn cap_skewness(raw: f64) -> f64 {
    raw.clamp(-SKEWNESS_CAP, SKEWNESS_CAP)
}

/// [`moment_skewness`] clamped to `[-3.5, 3.5]`.
pub fn capped_moment_skewness(sample: &Sample) -> Result<f64> {
    moment_skewness(sample).map(cap_skewness)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewnessMeasures {
    pub medcouple: f64,
    pub bowley: f64,
    pub capped_moment_skew: f64,
}

pub fn skewness_measures(sample: &Sample) -> Result<SkewnessMeasures> {
    Ok(SkewnessMeasures {
        medcouple: medcouple(sample)?,
        bowley: bowley(&quartiles(sample)?)?,
        capped_moment_skew: capped_moment_skewness(sample)?,
    })
}
