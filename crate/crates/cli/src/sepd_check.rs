use std::io::{self, Write};

use skewbox::ks::ks_statistic;
use skewbox::rng::seeded_stream;
use skewbox::{Sepd, SepdParams};

use crate::{CmdResult, Outcome};

pub const PROBES: [f64; 9] = [0.001, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.999];

/// Asymptotic Kolmogorov critical coefficient at the 0.1% level.
const KS_COEFFICIENT: f64 = 1.949;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100_000)]
    pub ks_n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest accepted KS statistic; defaults to 1.949 / sqrt(ks-n).
    #[arg(long)]
    pub ks_threshold: Option<f64>,
    /// Largest accepted |cdf(quantile(u)) - u|.
    #[arg(long, default_value_t = 1e-9)]
    pub round_trip_tolerance: f64,
}

pub fn run(args: &Args) -> CmdResult {
    if args.ks_n == 0 {
        return Err("--ks-n must be positive".to_string());
    }
    let params = SepdParams::new(args.mu, args.sigma, args.alpha, args.p).map_err(|e| e.to_string())?;
    let dist = Sepd::new(params).map_err(|e| e.to_string())?;

    let mut rows: Vec<(String, String)> = vec![("normalizer".into(), dist.normalizer().to_string())];
    let mut round_trip = 0.0f64;
    for u in PROBES {
        let x = dist.quantile(u).map_err(|e| e.to_string())?;
        round_trip = round_trip.max((dist.cdf(x) - u).abs());
        rows.push((format!("quantile_{u}"), x.to_string()));
    }
    // a denser sweep for the round-trip check
    for i in 1..1000 {
        let u = i as f64 / 1000.0;
        let x = dist.quantile(u).map_err(|e| e.to_string())?;
        round_trip = round_trip.max((dist.cdf(x) - u).abs());
    }
    let sample = dist.sample(&mut seeded_stream(args.seed), args.ks_n);
    let ks = ks_statistic(sample.values(), |x| dist.cdf(x));
    let threshold = args
        .ks_threshold
        .unwrap_or(KS_COEFFICIENT / (args.ks_n as f64).sqrt());
    let ks_pass = ks < threshold;
    let rt_pass = round_trip <= args.round_trip_tolerance;
    rows.extend([
        ("round_trip_max_error".into(), format!("{round_trip:e}")),
        ("round_trip_pass".into(), rt_pass.to_string()),
        ("ks_n".into(), args.ks_n.to_string()),
        ("ks_statistic".into(), ks.to_string()),
        ("ks_threshold".into(), threshold.to_string()),
        ("ks_pass".into(), ks_pass.to_string()),
    ]);

    let mut out = io::stdout().lock();
    let mut write = || -> io::Result<()> {
        writeln!(out, "quantity,value")?;
        for (k, v) in &rows {
            writeln!(out, "{k},{v}")?;
        }
        out.flush()
    };
    write().map_err(|e| e.to_string())?;
    Ok(if ks_pass && rt_pass { Outcome::Complete } else { Outcome::Partial })
}
