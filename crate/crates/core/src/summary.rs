//! Per-group boxplot summaries: quartiles, whisker ends and outliers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fences::{classify_outliers, compute_fences, FenceMethod, FenceParams, Outlier, WhiskerMode};
use crate::robust::quartiles_with;
use crate::sample::Sample;

/// One row of a grouped boxplot table.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewBoxSummary {
    pub group_label: String,
    /// Lower whisker end.
    pub ymin: f64,
    /// Q1
    pub lower: f64,
    /// Q2
    pub middle: f64,
    /// Q3
    pub upper: f64,
    /// Upper whisker end.
    pub ymax: f64,
    pub outliers: Vec<Outlier>,
    pub n: usize,
}

pub fn skewbox_summary(
    sample: &Sample,
    method: FenceMethod,
    params: &FenceParams,
    group_label: &str,
) -> Result<SkewBoxSummary> {
    let fences = compute_fences(sample, method, params)?;
    let q = quartiles_with(sample, params.quantile_method)?;
    let outliers = classify_outliers(sample, &fences);
    let (ymin, ymax) = match params.whisker {
        WhiskerMode::Fence => (fences.lower, fences.upper),
        WhiskerMode::Data => {
            // Q1..Q3 always holds an observation, so the inlier range is nonempty
            let mut inliers = sample
                .sorted()
                .iter()
                .copied()
                .filter(|&v| v >= fences.lower && v <= fences.upper);
            let first = inliers.next().unwrap_or(q.q1);
            let last = inliers.last().unwrap_or(first);
            (first, last)
        }
    };
    Ok(SkewBoxSummary {
        group_label: group_label.to_string(),
        ymin,
        lower: q.q1,
        middle: q.q2,
        upper: q.q3,
        ymax,
        outliers,
        n: sample.len(),
    })
}

/// Summary of one group, or the reason it could not be summarised.
pub type GroupSummary = Result<SkewBoxSummary>;

/// Summaries for every group label, in lexicographic label order.
///
/// A group that fails (too small, degenerate spread) yields an
/// [`Error::Group`] entry in its slot instead of being dropped. Observation
/// indices in the outliers refer to positions within the group, in input
/// order.
pub fn grouped_summary<'a, I>(rows: I, method: FenceMethod, params: &FenceParams) -> Result<Vec<GroupSummary>>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (label, value) in rows {
        groups.entry(label).or_default().push(value);
    }
    if groups.is_empty() {
        return Err(Error::NoData);
    }
    Ok(groups
        .into_iter()
        .map(|(label, values)| {
            Sample::new(values)
                .and_then(|s| skewbox_summary(&s, method, params, label))
                .map_err(|e| e.in_group(label))
        })
        .collect())
}
