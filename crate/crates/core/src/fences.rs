//! Boxplot fence rules and outlier classification.
//!
//! Every rule widens or narrows the classical `[Q1 - k IQR, Q3 + k IQR]`
//! interval by a multiplicative factor driven by a skewness statistic:
//!
//! | method      | lower offset                         | upper offset                         |
//! |-------------|--------------------------------------|--------------------------------------|
//! | `tukey`     | `k IQR`                              | `k IQR`                              |
//! | `kimber`    | `2k (Q2 - Q1)`                       | `2k (Q3 - Q2)`                       |
//! | `hubert`    | `k exp(-3 MC) IQR`                   | `k exp(3 MC) IQR`                    |
//! | `adil`      | `k IQR exp(SK abs(MC))`              | same as lower                        |
//! | `babura`    | `k exp(6 BC) IQR`                    | same as lower                        |
//! | `walker`    | `k IQR (1 - BC) / (1 + BC)`          | `k IQR (1 + BC) / (1 - BC)`          |
//! | `junsawang` | `k exp(BC (Q2 - Q1)/(Q3 - Q2)) IQR`  | same as lower                        |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::robust::{
    bowley, capped_moment_skewness, half_median_ratio, medcouple, quartiles_with, QuantileMethod,
    QuartileSet, SKEWNESS_CAP,
};
use crate::sample::Sample;

/// Minimum sample size accepted by [`compute_fences`].
pub const MIN_FENCE_OBSERVATIONS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FenceMethod {
    Tukey,
    Kimber,
    Hubert,
    Adil,
    Babura,
    Walker,
    Junsawang,
}

impl FenceMethod {
    pub const ALL: [FenceMethod; 7] = [
        FenceMethod::Tukey,
        FenceMethod::Kimber,
        FenceMethod::Hubert,
        FenceMethod::Adil,
        FenceMethod::Babura,
        FenceMethod::Walker,
        FenceMethod::Junsawang,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FenceMethod::Tukey => "tukey",
            FenceMethod::Kimber => "kimber",
            FenceMethod::Hubert => "hubert",
            FenceMethod::Adil => "adil",
            FenceMethod::Babura => "babura",
            FenceMethod::Walker => "walker",
            FenceMethod::Junsawang => "junsawang",
        }
    }

    fn uses_medcouple(self) -> bool {
        matches!(self, FenceMethod::Hubert | FenceMethod::Adil)
    }

    fn uses_bowley(self) -> bool {
        matches!(
            self,
            FenceMethod::Babura | FenceMethod::Walker | FenceMethod::Junsawang
        )
    }
}

impl fmt::Display for FenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod(pub String);

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = FenceMethod::ALL.iter().map(|m| m.name()).collect();
        write!(
            f,
            "unknown method {:?}; valid methods: {}",
            self.0,
            names.join(", ")
        )
    }
}

impl std::error::Error for UnknownMethod {}

impl FromStr for FenceMethod {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FenceMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

/// Statistic fed to the `hubert` and `adil` rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum McEstimator {
    /// Pairwise-kernel medcouple, in `[-1, 1]`.
    #[default]
    Kernel,
    /// `(median(x > Q2) - median(x < Q2)) / IQR`, nonnegative and unbounded.
    HalfMedianRatio,
}

impl McEstimator {
    fn admits(self, mc: f64) -> bool {
        match self {
            McEstimator::Kernel => (-1.0..=1.0).contains(&mc),
            McEstimator::HalfMedianRatio => mc.is_finite() && mc >= 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            McEstimator::Kernel => "kernel",
            McEstimator::HalfMedianRatio => "half-median",
        }
    }
}

impl FromStr for McEstimator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kernel" => Ok(McEstimator::Kernel),
            "half-median" => Ok(McEstimator::HalfMedianRatio),
            other => Err(format!(
                "unknown medcouple estimator {other:?}; expected kernel or half-median"
            )),
        }
    }
}

/// What the reported whisker ends (`ymin`/`ymax`) are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WhiskerMode {
    /// The fences themselves.
    #[default]
    Fence,
    /// The most extreme observations that are not outliers.
    Data,
}

impl FromStr for WhiskerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fence" => Ok(WhiskerMode::Fence),
            "data" => Ok(WhiskerMode::Data),
            other => Err(format!("unknown whisker mode {other:?}; expected fence or data")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FenceParams {
    /// Whisker coefficient.
    pub k: f64,
    /// `walker` clamps Bowley's coefficient to `[-1 + eps, 1 - eps]`.
    pub bowley_clamp_epsilon: f64,
    /// Upper bound on the `walker` factors and the `junsawang` SIQR ratio.
    pub ratio_cap: f64,
    pub mc_estimator: McEstimator,
    pub quantile_method: QuantileMethod,
    pub whisker: WhiskerMode,
}

impl Default for FenceParams {
    fn default() -> Self {
        FenceParams {
            k: 1.5,
            bowley_clamp_epsilon: 1e-6,
            ratio_cap: 20.0,
            mc_estimator: McEstimator::Kernel,
            quantile_method: QuantileMethod::Linear,
            whisker: WhiskerMode::Fence,
        }
    }
}

impl FenceParams {
    pub fn with_k(k: f64) -> Self {
        FenceParams {
            k,
            ..FenceParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "k must be positive, got {}",
                self.k
            )));
        }
        if !(self.bowley_clamp_epsilon > 0.0 && self.bowley_clamp_epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bowley clamp epsilon must lie in (0, 1), got {}",
                self.bowley_clamp_epsilon
            )));
        }
        if !(self.ratio_cap.is_finite() && self.ratio_cap >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ratio cap must be >= 1, got {}",
                self.ratio_cap
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fences {
    pub lower: f64,
    pub upper: f64,
    pub method: FenceMethod,
    pub params: FenceParams,
}

fn scaled(q: &QuartileSet, method: FenceMethod, params: &FenceParams, lf: f64, uf: f64) -> Fences {
    Fences {
        lower: q.q1 - params.k * lf * q.iqr,
        upper: q.q3 + params.k * uf * q.iqr,
        method,
        params: *params,
    }
}

fn check_bowley(bc: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&bc) {
        Ok(())
    } else {
        Err(Error::BowleyOutOfRange)
    }
}

pub fn fences_tukey(q: &QuartileSet, params: &FenceParams) -> Fences {
    scaled(q, FenceMethod::Tukey, params, 1.0, 1.0)
}

pub fn fences_kimber(q: &QuartileSet, params: &FenceParams) -> Fences {
    Fences {
        lower: q.q1 - 2.0 * params.k * q.siqr_lower,
        upper: q.q3 + 2.0 * params.k * q.siqr_upper,
        method: FenceMethod::Kimber,
        params: *params,
    }
}

pub fn fences_hubert(q: &QuartileSet, mc: f64, params: &FenceParams) -> Result<Fences> {
    if !params.mc_estimator.admits(mc) {
        return Err(Error::MedcoupleOutOfRange);
    }
    Ok(scaled(
        q,
        FenceMethod::Hubert,
        params,
        (-3.0 * mc).exp(),
        (3.0 * mc).exp(),
    ))
}

pub fn fences_adil(q: &QuartileSet, mc: f64, sk: f64, params: &FenceParams) -> Result<Fences> {
    if !params.mc_estimator.admits(mc) {
        return Err(Error::MedcoupleOutOfRange);
    }
    if !(-SKEWNESS_CAP..=SKEWNESS_CAP).contains(&sk) {
        return Err(Error::UncappedSkewness);
    }
    let factor = (sk * mc.abs()).exp();
    Ok(scaled(q, FenceMethod::Adil, params, factor, factor))
}

pub fn fences_babura(q: &QuartileSet, bc: f64, params: &FenceParams) -> Result<Fences> {
    check_bowley(bc)?;
    let factor = (6.0 * bc).exp();
    Ok(scaled(q, FenceMethod::Babura, params, factor, factor))
}

/// Clamping `bc` keeps both ratios finite; each factor is then capped at
/// `ratio_cap`.
pub fn fences_walker(q: &QuartileSet, bc: f64, params: &FenceParams) -> Result<Fences> {
    check_bowley(bc)?;
    let eps = params.bowley_clamp_epsilon;
    let b = bc.clamp(-1.0 + eps, 1.0 - eps);
    let lower = ((1.0 - b) / (1.0 + b)).min(params.ratio_cap);
    let upper = ((1.0 + b) / (1.0 - b)).min(params.ratio_cap);
    Ok(scaled(q, FenceMethod::Walker, params, lower, upper))
}

/// A zero upper semi-IQR replaces the ratio with `ratio_cap`; finite
/// ratios are capped there too.
pub fn fences_junsawang(q: &QuartileSet, bc: f64, params: &FenceParams) -> Result<Fences> {
    check_bowley(bc)?;
    let ratio = if q.siqr_upper > 0.0 {
        (q.siqr_lower / q.siqr_upper).min(params.ratio_cap)
    } else {
        params.ratio_cap
    };
    let factor = (bc * ratio).exp();
    Ok(scaled(q, FenceMethod::Junsawang, params, factor, factor))
}

fn mc_statistic(sample: &Sample, params: &FenceParams) -> Result<f64> {
    match params.mc_estimator {
        McEstimator::Kernel => medcouple(sample),
        McEstimator::HalfMedianRatio => half_median_ratio(sample),
    }
}

/// Quartiles plus whichever skewness statistics `method` needs.
pub fn compute_fences(sample: &Sample, method: FenceMethod, params: &FenceParams) -> Result<Fences> {
    fences_unwrapped(sample, method, params).map_err(|e| e.in_method(method))
}

fn fences_unwrapped(sample: &Sample, method: FenceMethod, params: &FenceParams) -> Result<Fences> {
    params.validate()?;
    if sample.len() < MIN_FENCE_OBSERVATIONS {
        return Err(Error::TooFewForFence);
    }
    let q = quartiles_with(sample, params.quantile_method)?;
    if (method.uses_medcouple() || method.uses_bowley()) && q.iqr <= 0.0 {
        return Err(Error::ZeroIqr);
    }
    let fences = match method {
        FenceMethod::Tukey => Ok(fences_tukey(&q, params)),
        FenceMethod::Kimber => Ok(fences_kimber(&q, params)),
        FenceMethod::Hubert => fences_hubert(&q, mc_statistic(sample, params)?, params),
        FenceMethod::Adil => {
            let mc = mc_statistic(sample, params)?;
            let sk = capped_moment_skewness(sample)?;
            fences_adil(&q, mc, sk, params)
        }
        FenceMethod::Babura => fences_babura(&q, bowley(&q)?, params),
        FenceMethod::Walker => fences_walker(&q, bowley(&q)?, params),
        FenceMethod::Junsawang => fences_junsawang(&q, bowley(&q)?, params),
    }?;
    // an unbounded skewness statistic can overflow the exponential factors
    if !(fences.lower.is_finite() && fences.upper.is_finite()) {
        return Err(Error::NonFiniteField("fence"));
    }
    Ok(fences)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outlier {
    /// Position in the original observation order (0-based).
    pub index: usize,
    pub value: f64,
}

/// Observations strictly outside the fences, ascending by value.
pub fn classify_outliers(sample: &Sample, fences: &Fences) -> Vec<Outlier> {
    sample
        .sorted()
        .iter()
        .zip(sample.order())
        .filter(|(&v, _)| v < fences.lower || v > fences.upper)
        .map(|(&value, &index)| Outlier { index, value })
        .collect()
}

/// Number of flagged observations, without allocating.
pub fn count_outliers(values: &[f64], fences: &Fences) -> usize {
    values
        .iter()
        .filter(|&&v| v < fences.lower || v > fences.upper)
        .count()
}
