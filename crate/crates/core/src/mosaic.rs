//! Monte Carlo swamping/masking evaluation over an `(alpha, p)` grid.
//!
//! Each grid cell builds one [`Sepd`] evaluator and runs `reps` independent
//! replications. Replication `r` of cell `(i, j)` always draws from
//! [`cell_stream`]`(seed, i, j, r)`, so results do not depend on scheduling,
//! thread count, or which other cells are evaluated, and every fence method
//! sees the same samples for the same seed.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::RngCore;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fences::{compute_fences, count_outliers, FenceMethod, FenceParams};
use crate::rng::{cell_stream, open_unit};
use crate::sample::Sample;
use crate::sepd::{Sepd, SepdParams};

pub const VERSION: &str = concat!("skewbox ", env!("CARGO_PKG_VERSION"));

/// Human-readable statement of the masking tail-side rule.
pub const TAIL_SIDE_RULE: &str = "P(right tail) = 1 - alpha";

/// Cells with a larger share of failed replications are flagged.
pub const FLAG_FAILED_FRACTION: f64 = 0.01;

pub const CSV_HEADER: &str = "alpha_index,p_index,alpha,p,rate,stderr,reps_completed,reps_failed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Clean samples; the rate is the share of points flagged.
    Swamping,
    /// Contaminated samples; the rate is the share of planted points missed.
    Masking,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Swamping => "swamping",
            Scenario::Masking => "masking",
        })
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "swamping" => Ok(Scenario::Swamping),
            "masking" => Ok(Scenario::Masking),
            other => Err(format!("unknown scenario {other:?}; expected swamping or masking")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub alpha_values: Vec<f64>,
    pub p_values: Vec<f64>,
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linear_steps(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `count` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_steps(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let mut v: Vec<f64> = linear_steps(lo.ln(), hi.ln(), count)
        .into_iter()
        .map(f64::exp)
        .collect();
    if let Some(first) = v.first_mut() {
        *first = lo;
    }
    if count > 1 {
        v[count - 1] = hi;
    }
    v
}

impl Default for GridSpec {
    /// 49 even steps of alpha over [0.05, 0.95] by 49 log steps of p over [0.5, 10].
    fn default() -> Self {
        GridSpec {
            alpha_values: linear_steps(0.05, 0.95, 49),
            p_values: log_steps(0.5, 10.0, 49),
        }
    }
}

impl GridSpec {
    pub fn new(alpha_values: Vec<f64>, p_values: Vec<f64>) -> Result<Self> {
        let grid = GridSpec {
            alpha_values,
            p_values,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        fn increasing(name: &str, v: &[f64]) -> Result<()> {
            if v.is_empty() {
                return Err(Error::InvalidParameter(format!("{name} grid is empty")));
            }
            if v.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidParameter(format!(
                    "{name} grid must be strictly increasing"
                )));
            }
            Ok(())
        }
        increasing("alpha", &self.alpha_values)?;
        increasing("p", &self.p_values)?;
        if let Some(a) = self.alpha_values.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "alpha grid value {a} outside (0, 1)"
            )));
        }
        if let Some(p) = self.p_values.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidParameter(format!("p grid value {p} must be positive")));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.alpha_values.len() * self.p_values.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub method: FenceMethod,
    pub n: usize,
    pub reps: usize,
    pub k: f64,
    pub seed: u64,
    /// Share of each masking sample replaced by planted outliers.
    pub contamination_fraction: f64,
    /// Planted outliers come from beyond this quantile (or below its
    /// complement).
    pub tail_quantile: f64,
    /// Upper end of the heatmap colour scale.
    pub color_cap: f64,
}

impl SimConfig {
    pub fn new(scenario: Scenario, method: FenceMethod, n: usize, reps: usize, seed: u64) -> Self {
        SimConfig {
            scenario,
            method,
            n,
            reps,
            k: 1.5,
            seed,
            contamination_fraction: 0.05,
            tail_quantile: 0.999,
            color_cap: 0.10,
        }
    }

    /// Number of observations replaced in a masking replication.
    pub fn planted_count(&self) -> usize {
        (self.contamination_fraction * self.n as f64).round() as usize
    }

    pub fn fence_params(&self) -> FenceParams {
        FenceParams::with_k(self.k)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.reps < 1 {
            return bad("reps must be at least 1".into());
        }
        if self.n < crate::fences::MIN_FENCE_OBSERVATIONS {
            return bad(format!("n must be at least 4, got {}", self.n));
        }
        self.fence_params().validate()?;
        if !(self.tail_quantile > 0.5 && self.tail_quantile < 1.0) {
            return bad(format!(
                "tail quantile must lie in (0.5, 1), got {}",
                self.tail_quantile
            ));
        }
        if !(self.color_cap.is_finite() && self.color_cap > 0.0) {
            return bad(format!("color cap must be positive, got {}", self.color_cap));
        }
        if self.scenario == Scenario::Masking {
            if !(self.contamination_fraction.is_finite() && self.planted_count() >= 1) {
                return bad("contamination must plant at least one outlier".into());
            }
            if !(self.contamination_fraction > 0.0 && self.contamination_fraction < 0.5) {
                return bad(format!(
                    "contamination fraction must lie in (0, 0.5), got {}",
                    self.contamination_fraction
                ));
            }
        }
        Ok(())
    }
}

/// Share of a clean sample flagged as outliers.
pub fn run_swamping_rep(sepd: &Sepd, config: &SimConfig, rng: &mut impl RngCore) -> Result<f64> {
    let sample = sepd.sample(rng, config.n);
    let fences = compute_fences(&sample, config.method, &config.fence_params())?;
    Ok(count_outliers(sample.values(), &fences) as f64 / config.n as f64)
}

/// Replaces `planted_count()` randomly chosen observations with draws from
/// the distribution's tails beyond `tail_quantile`. Each planted point goes
/// to the right tail with probability `1 - alpha`. Returns the contaminated
/// sample and the planted positions in ascending order.
pub fn inject_outliers(
    clean: Sample,
    sepd: &Sepd,
    config: &SimConfig,
    rng: &mut impl RngCore,
) -> (Sample, Vec<usize>) {
    let n = clean.len();
    let m = config.planted_count().min(n);
    let mut positions = rand::seq::index::sample(rng, n, m).into_vec();
    positions.sort_unstable();
    let tail = 1.0 - config.tail_quantile;
    let right_prob = 1.0 - sepd.params().alpha;
    let mut values = clean.into_values();
    for &pos in &positions {
        let right = open_unit(rng) < right_prob;
        let v = open_unit(rng);
        let u = if right {
            (config.tail_quantile + tail * v).min(1.0 - f64::EPSILON / 2.0)
        } else {
            tail * v
        };
        values[pos] = sepd.quantile(u).expect("tail draw lies in (0, 1)");
    }
    let sample = Sample::new(values).expect("tail draws are finite");
    (sample, positions)
}

/// Share of planted outliers that the fences fail to flag.
pub fn run_masking_rep(sepd: &Sepd, config: &SimConfig, rng: &mut impl RngCore) -> Result<f64> {
    let clean = sepd.sample(rng, config.n);
    let (sample, planted) = inject_outliers(clean, sepd, config, rng);
    let fences = compute_fences(&sample, config.method, &config.fence_params())?;
    let missed = planted
        .iter()
        .map(|&i| sample.values()[i])
        .filter(|&v| v >= fences.lower && v <= fences.upper)
        .count();
    Ok(missed as f64 / planted.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub alpha: f64,
    pub p: f64,
    /// Mean rate over completed replications; `None` if none completed.
    pub rate: Option<f64>,
    /// Monte Carlo standard error of `rate`; needs two completed reps.
    pub stderr: Option<f64>,
    pub reps_completed: usize,
    pub reps_failed: usize,
}

impl CellResult {
    pub fn is_failed(&self) -> bool {
        self.reps_completed == 0
    }

    pub fn failed_fraction(&self) -> f64 {
        let total = self.reps_completed + self.reps_failed;
        if total == 0 {
            0.0
        } else {
            self.reps_failed as f64 / total as f64
        }
    }

    /// More than 1% of replications failed.
    pub fn is_flagged(&self) -> bool {
        self.failed_fraction() > FLAG_FAILED_FRACTION
    }
}

fn mean_and_stderr(rates: &[f64]) -> (Option<f64>, Option<f64>) {
    if rates.is_empty() {
        return (None, None);
    }
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    if rates.len() < 2 {
        return (Some(mean), None);
    }
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some((var / n).sqrt()))
}

/// Evaluates one cell. Replication failures (degenerate samples) are
/// counted and left out of the mean; if the evaluator cannot be built, every
/// replication counts as failed.
pub fn run_cell(grid: &GridSpec, alpha_index: usize, p_index: usize, config: &SimConfig) -> CellResult {
    let alpha = grid.alpha_values[alpha_index];
    let p = grid.p_values[p_index];
    let failed_cell = CellResult {
        alpha,
        p,
        rate: None,
        stderr: None,
        reps_completed: 0,
        reps_failed: config.reps,
    };
    let Ok(sepd) = SepdParams::standard(alpha, p).and_then(Sepd::new) else {
        return failed_cell;
    };
    let mut rates = Vec::with_capacity(config.reps);
    let mut failed = 0;
    for rep in 0..config.reps {
        let mut rng = cell_stream(config.seed, alpha_index, p_index, rep as u64);
        let outcome = match config.scenario {
            Scenario::Swamping => run_swamping_rep(&sepd, config, &mut rng),
            Scenario::Masking => run_masking_rep(&sepd, config, &mut rng),
        };
        match outcome {
            Ok(r) => rates.push(r),
            Err(_) => failed += 1,
        }
    }
    let (rate, stderr) = mean_and_stderr(&rates);
    CellResult {
        alpha,
        p,
        rate,
        stderr,
        reps_completed: rates.len(),
        reps_failed: failed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub software: String,
    /// Caller-supplied; never read from the clock, so output stays
    /// reproducible.
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MosaicResult {
    pub grid: GridSpec,
    pub config: SimConfig,
    /// Row-major: `p` outer (increasing downward), `alpha` inner.
    pub cells: Vec<CellResult>,
    pub provenance: Provenance,
}

/// Runs every cell of the grid. Cells are evaluated in parallel; the
/// result is identical for any thread count.
pub fn run_mosaic(grid: &GridSpec, config: &SimConfig) -> Result<MosaicResult> {
    grid.validate()?;
    config.validate()?;
    let na = grid.alpha_values.len();
    let cells = (0..grid.cell_count())
        .into_par_iter()
        .map(|idx| run_cell(grid, idx % na, idx / na, config))
        .collect();
    Ok(MosaicResult {
        grid: grid.clone(),
        config: config.clone(),
        cells,
        provenance: Provenance {
            seed: config.seed,
            software: VERSION.to_string(),
            timestamp: None,
        },
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl MosaicResult {
    pub fn rows(&self) -> usize {
        self.grid.p_values.len()
    }

    pub fn cols(&self) -> usize {
        self.grid.alpha_values.len()
    }

    pub fn cell(&self, p_index: usize, alpha_index: usize) -> &CellResult {
        &self.cells[p_index * self.cols() + alpha_index]
    }

    /// Mean of the cell rates over cells that completed at least one rep.
    pub fn mean_rate(&self) -> Option<f64> {
        let rates: Vec<f64> = self.cells.iter().filter_map(|c| c.rate).collect();
        (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.is_failed()).count()
    }

    pub fn flagged_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.is_flagged()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.cells.len());
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (idx, c) in self.cells.iter().enumerate() {
            let (pi, ai) = (idx / self.cols(), idx % self.cols());
            writeln!(
                out,
                "{ai},{pi},{},{},{},{},{},{}",
                c.alpha,
                c.p,
                opt(c.rate),
                opt(c.stderr),
                c.reps_completed,
                c.reps_failed
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    /// `key = value` sidecar describing how the table was produced.
    pub fn metadata(&self) -> String {
        let c = &self.config;
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut lines = vec![
            format!("software = {}", self.provenance.software),
            format!("scenario = {}", c.scenario),
            format!("method = {}", c.method),
            format!("n = {}", c.n),
            format!("reps = {}", c.reps),
            format!("k = {}", c.k),
            format!("seed = {}", self.provenance.seed),
            format!("contamination_fraction = {}", c.contamination_fraction),
            format!("planted_count = {}", c.planted_count()),
            format!("tail_quantile = {}", c.tail_quantile),
            format!("tail_side_rule = {TAIL_SIDE_RULE}"),
            format!("color_cap = {}", c.color_cap),
            "quantile_estimator = linear (type 7)".to_string(),
            "random_streams = chacha8; key = hash(seed, alpha_index, p_index); stream = replication".to_string(),
            format!("alpha_count = {}", self.grid.alpha_values.len()),
            format!("alpha_min = {}", self.grid.alpha_values[0]),
            format!("alpha_max = {}", self.grid.alpha_values[self.cols() - 1]),
            format!("alpha_values = {}", join(&self.grid.alpha_values)),
            format!("p_count = {}", self.grid.p_values.len()),
            format!("p_min = {}", self.grid.p_values[0]),
            format!("p_max = {}", self.grid.p_values[self.rows() - 1]),
            format!("p_values = {}", join(&self.grid.p_values)),
            format!("failed_cells = {}", self.failed_cells()),
            format!("flagged_cells = {}", self.flagged_cells()),
        ];
        if let Some(ts) = &self.provenance.timestamp {
            lines.push(format!("timestamp = {ts}"));
        }
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}
