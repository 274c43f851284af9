use std::io;
use std::path::PathBuf;

use skewbox::fences::{FenceParams, McEstimator, WhiskerMode};
use skewbox::{grouped_summary, FenceMethod, QuantileMethod};

use crate::input::{open, read_observations};
use crate::{CmdResult, Outcome};

pub const HEADER: [&str; 9] = [
    "group",
    "ymin",
    "lower",
    "middle",
    "upper",
    "ymax",
    "n",
    "n_outliers",
    "outlier_values",
];

#[derive(Debug, clap::Args)]
pub struct Args {
    /// CSV file; standard input when omitted or `-`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Grouping column.
    #[arg(long)]
    pub group: String,
    /// Numeric column.
    #[arg(long)]
    pub value: String,
    #[arg(long, default_value = "tukey")]
    pub method: String,
    #[arg(long, default_value_t = 1.5)]
    pub k: f64,
    /// `fence` reports the fences as whisker ends, `data` the extreme inliers.
    #[arg(long, default_value = "fence")]
    pub whisker: String,
    /// Skewness statistic for hubert and adil: `kernel` or `half-median`.
    #[arg(long, default_value = "kernel")]
    pub mc_estimator: String,
    /// Add an `outlier_rows` column with 1-based source row numbers.
    #[arg(long)]
    pub emit_indices: bool,
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

pub fn run(args: &Args) -> CmdResult {
    let method: FenceMethod = args.method.parse().map_err(|e| format!("{e}"))?;
    let params = FenceParams {
        k: args.k,
        whisker: args.whisker.parse::<WhiskerMode>()?,
        mc_estimator: args.mc_estimator.parse::<McEstimator>()?,
        quantile_method: QuantileMethod::Linear,
        ..FenceParams::default()
    };
    params.validate().map_err(|e| e.to_string())?;

    let rows = read_observations(open(args.input.as_deref())?, &args.group, &args.value)?;
    let summaries = grouped_summary(rows.iter().map(|r| (r.group.as_str(), r.value)), method, &params)
        .map_err(|e| e.to_string())?;

    // source row numbers of each group, in input order
    let mut sources: std::collections::BTreeMap<&str, Vec<usize>> = Default::default();
    for r in &rows {
        sources.entry(r.group.as_str()).or_default().push(r.row);
    }

    let mut out = csv::Writer::from_writer(io::stdout().lock());
    let mut header: Vec<&str> = HEADER.to_vec();
    if args.emit_indices {
        header.push("outlier_rows");
    }
    out.write_record(&header).map_err(|e| e.to_string())?;
    let mut failed = Vec::new();
    for summary in summaries {
        let s = match summary {
            Ok(s) => s,
            Err(e) => {
                failed.push(e.to_string());
                continue;
            }
        };
        let mut record = vec![
            s.group_label.clone(),
            s.ymin.to_string(),
            s.lower.to_string(),
            s.middle.to_string(),
            s.upper.to_string(),
            s.ymax.to_string(),
            s.n.to_string(),
            s.outliers.len().to_string(),
            join(s.outliers.iter().map(|o| o.value)),
        ];
        if args.emit_indices {
            let src = &sources[s.group_label.as_str()];
            record.push(join(s.outliers.iter().map(|o| src[o.index])));
        }
        out.write_record(&record).map_err(|e| e.to_string())?;
    }
    out.flush().map_err(|e| e.to_string())?;
    if failed.is_empty() {
        Ok(Outcome::Complete)
    } else {
        for f in &failed {
            eprintln!("failed: {f}");
        }
        Ok(Outcome::Partial)
    }
}
