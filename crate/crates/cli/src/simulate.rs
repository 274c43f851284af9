use std::path::{Path, PathBuf};

use skewbox::mosaic::{linear_steps, log_steps};
use skewbox::{run_mosaic, FenceMethod, GridSpec, Scenario, SimConfig};

use crate::{CmdResult, Outcome};

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub scenario: String,
    #[arg(long, default_value = "tukey")]
    pub method: String,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// `lo,hi,count`, evenly spaced.
    #[arg(long, default_value = "0.05,0.95,49")]
    pub grid_alpha: String,
    /// `lo,hi,count[,log]`; `log` spaces the values geometrically.
    #[arg(long, default_value = "0.5,10,49,log")]
    pub grid_p: String,
    #[arg(long, default_value_t = 1.5)]
    pub k: f64,
    /// Share of each masking sample replaced by planted outliers.
    #[arg(long, default_value_t = 0.05)]
    pub contamination: f64,
    #[arg(long, default_value_t = 0.999)]
    pub tail_quantile: f64,
    /// Top of the colour scale recorded in the metadata.
    #[arg(long, default_value_t = 0.10)]
    pub color_cap: f64,
    /// Written to the metadata verbatim; omitted when not given.
    #[arg(long)]
    pub timestamp: Option<String>,
    /// Output prefix; writes `<prefix>.csv` and `<prefix>.meta`.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `lo,hi,count` with an optional `,log` (or `,linear`) suffix.
pub fn parse_axis(name: &str, spec: &str, allow_log: bool) -> Result<Vec<f64>, String> {
    let bad = |why: &str| format!("--grid-{name} {spec:?}: {why}");
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let log = match parts.get(3) {
        None => false,
        Some(&"log") if allow_log => true,
        Some(&"linear") => false,
        Some(other) => return Err(bad(&format!("unexpected spacing {other:?}"))),
    };
    if parts.len() < 3 || parts.len() > 4 {
        return Err(bad("expected lo,hi,count"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad("lo is not a number"))?;
    let hi: f64 = parts[1].parse().map_err(|_| bad("hi is not a number"))?;
    let count: usize = parts[2].parse().map_err(|_| bad("count is not a positive integer"))?;
    if count == 0 {
        return Err(bad("count must be at least 1"));
    }
    if count == 1 && lo != hi {
        return Err(bad("a single-value grid needs lo == hi"));
    }
    if count > 1 && !(lo < hi) {
        return Err(bad("lo must be below hi"));
    }
    if log && !(lo > 0.0) {
        return Err(bad("log spacing needs lo > 0"));
    }
    Ok(if log { log_steps(lo, hi, count) } else { linear_steps(lo, hi, count) })
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn run(args: &Args) -> CmdResult {
    let scenario: Scenario = args.scenario.parse()?;
    let method: FenceMethod = args.method.parse().map_err(|e| format!("{e}"))?;
    let grid = GridSpec::new(
        parse_axis("alpha", &args.grid_alpha, false)?,
        parse_axis("p", &args.grid_p, true)?,
    )
    .map_err(|e| e.to_string())?;
    let config = SimConfig {
        k: args.k,
        contamination_fraction: args.contamination,
        tail_quantile: args.tail_quantile,
        color_cap: args.color_cap,
        ..SimConfig::new(scenario, method, args.n, args.reps, args.seed)
    };
    config.validate().map_err(|e| e.to_string())?;

    let mut result = run_mosaic(&grid, &config).map_err(|e| e.to_string())?;
    result.provenance.timestamp = args.timestamp.clone();

    let csv_path = with_extension(&args.out, "csv");
    let meta_path = with_extension(&args.out, "meta");
    std::fs::write(&csv_path, result.to_csv()).map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;
    std::fs::write(&meta_path, result.metadata()).map_err(|e| format!("cannot write {}: {e}", meta_path.display()))?;

    let max_cell = result
        .cells
        .iter()
        .filter(|c| c.rate.is_some())
        .max_by(|a, b| a.rate.unwrap().total_cmp(&b.rate.unwrap()));
    let mean = result.mean_rate().map_or("n/a".to_string(), |m| format!("{m:.6}"));
    let max = max_cell.map_or("n/a".to_string(), |c| {
        format!("{:.6} at alpha={} p={}", c.rate.unwrap(), c.alpha, c.p)
    });
    println!(
        "{scenario} {method}: mean rate {mean}, max cell {max}, failed cells {}, flagged cells {}",
        result.failed_cells(),
        result.flagged_cells()
    );
    Ok(if result.failed_cells() > 0 { Outcome::Partial } else { Outcome::Complete })
}
