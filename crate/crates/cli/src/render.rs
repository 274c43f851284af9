use std::path::PathBuf;

use skewbox::mosaic::{CellResult, GridSpec, CSV_HEADER};
use skewbox::svg::{render_boxplots, render_mosaic_cells, BoxplotStyle, HeatmapScale};
use skewbox::{Outlier, SkewBoxSummary};

use crate::input::{column, line_of, open, parse_real, reader, row_errors};
use crate::{CmdResult, Outcome};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `boxplot` (a summarise table) or `mosaic` (a simulate table).
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub min_rate: f64,
    #[arg(long, default_value_t = 0.10)]
    pub max_rate: f64,
    #[arg(long, default_value = "#1a1a40")]
    pub low_color: String,
    #[arg(long, default_value = "#f5f5dc")]
    pub high_color: String,
    #[arg(long, default_value_t = 40.0)]
    pub box_width: f64,
    #[arg(long, default_value_t = 30.0)]
    pub gap: f64,
    #[arg(long)]
    pub hide_outliers: bool,
    #[arg(long, default_value = "value")]
    pub axis_label: String,
    /// Comma-separated box fills, cycled across groups.
    #[arg(long, default_value = "#9ecae1")]
    pub fill: String,
}

pub fn run(args: &Args) -> CmdResult {
    let source = open(args.input.as_deref())?;
    let svg = match args.kind.as_str() {
        "boxplot" => {
            let style = BoxplotStyle {
                box_width: args.box_width,
                gap: args.gap,
                show_outliers: !args.hide_outliers,
                axis_label: args.axis_label.clone(),
                fill_colors: args.fill.split(',').map(|c| c.trim().to_string()).collect(),
            };
            style.validate().map_err(|e| e.to_string())?;
            let summaries = read_summaries(source)?;
            render_boxplots(&summaries, &style).map_err(|e| e.to_string())?
        }
        "mosaic" => {
            let scale = HeatmapScale {
                min_rate: args.min_rate,
                max_rate: args.max_rate,
                low_color: args.low_color.clone(),
                high_color: args.high_color.clone(),
            };
            scale.validate().map_err(|e| e.to_string())?;
            let (grid, cells) = read_mosaic(source)?;
            render_mosaic_cells(&grid, &cells, &scale).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown kind {other:?}; expected boxplot or mosaic")),
    };
    std::fs::write(&args.out, svg).map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    Ok(Outcome::Complete)
}

fn split_list(field: &str) -> Vec<&str> {
    if field.trim().is_empty() {
        vec![]
    } else {
        field.split(';').collect()
    }
}

/// Rows written by `summarise`.
pub fn read_summaries(source: Box<dyn std::io::Read>) -> Result<Vec<SkewBoxSummary>, String> {
    let mut rdr = reader(source);
    let headers = rdr.headers().map_err(|e| format!("cannot read header: {e}"))?.clone();
    let col = |name: &str| column(&headers, name);
    let (gi, ymin, lower, middle, upper, ymax) = (
        col("group")?,
        col("ymin")?,
        col("lower")?,
        col("middle")?,
        col("upper")?,
        col("ymax")?,
    );
    let (ni, nout, vals) = (col("n")?, col("n_outliers")?, col("outlier_values")?);
    let rows_col = headers.iter().position(|h| h == "outlier_rows");

    let mut summaries = Vec::new();
    let mut problems = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| format!("malformed CSV: {e}"))?;
        let line = line_of(&record);
        let field = |i: usize| record.get(i).unwrap_or("");
        let parsed = (|| -> Result<SkewBoxSummary, String> {
            let real = |i: usize| parse_real(field(i)).map_err(|e| format!("{}: {e}", &headers[i]));
            let count = |i: usize| {
                field(i)
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| format!("{}: {:?} is not a count", &headers[i], field(i)))
            };
            let values = split_list(field(vals))
                .into_iter()
                .map(parse_real)
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| format!("outlier_values: {e}"))?;
            let expected = count(nout)?;
            if values.len() != expected {
                return Err(format!("n_outliers is {expected} but {} values are listed", values.len()));
            }
            let indices: Vec<usize> = match rows_col {
                Some(rc) => split_list(field(rc))
                    .into_iter()
                    .map(|s| s.trim().parse::<usize>().map_err(|_| format!("outlier_rows: {s:?} is not a row")))
                    .collect::<Result<_, _>>()?,
                None => (0..values.len()).collect(),
            };
            if indices.len() != values.len() {
                return Err("outlier_rows and outlier_values differ in length".to_string());
            }
            Ok(SkewBoxSummary {
                group_label: field(gi).to_string(),
                ymin: real(ymin)?,
                lower: real(lower)?,
                middle: real(middle)?,
                upper: real(upper)?,
                ymax: real(ymax)?,
                outliers: indices
                    .into_iter()
                    .zip(values)
                    .map(|(index, value)| Outlier { index, value })
                    .collect(),
                n: count(ni)?,
            })
        })();
        match parsed {
            Ok(s) => summaries.push(s),
            Err(why) => problems.push(format!("line {line}: {why}")),
        }
    }
    if !problems.is_empty() {
        return Err(row_errors(&problems));
    }
    if summaries.is_empty() {
        return Err("summary table has no rows".to_string());
    }
    Ok(summaries)
}

/// Rows written by `simulate`, rebuilt into a grid and row-major cells.
pub fn read_mosaic(source: Box<dyn std::io::Read>) -> Result<(GridSpec, Vec<CellResult>), String> {
    let mut rdr = reader(source);
    let headers = rdr.headers().map_err(|e| format!("cannot read header: {e}"))?.clone();
    let got: Vec<&str> = headers.iter().collect();
    if got.join(",") != CSV_HEADER {
        return Err(format!("expected header {CSV_HEADER:?}, found {:?}", got.join(",")));
    }

    struct Row {
        ai: usize,
        pi: usize,
        cell: CellResult,
        line: u64,
    }
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| format!("malformed CSV: {e}"))?;
        let line = line_of(&record);
        let f = |i: usize| record.get(i).unwrap_or("").trim();
        let parsed = (|| -> Result<Row, String> {
            let index = |i: usize| f(i).parse::<usize>().map_err(|_| format!("{}: {:?} is not an index", &headers[i], f(i)));
            let real = |i: usize| parse_real(f(i)).map_err(|e| format!("{}: {e}", &headers[i]));
            let optional = |i: usize| if f(i).is_empty() { Ok(None) } else { real(i).map(Some) };
            Ok(Row {
                ai: index(0)?,
                pi: index(1)?,
                cell: CellResult {
                    alpha: real(2)?,
                    p: real(3)?,
                    rate: optional(4)?,
                    stderr: optional(5)?,
                    reps_completed: index(6)?,
                    reps_failed: index(7)?,
                },
                line,
            })
        })();
        match parsed {
            Ok(r) => rows.push(r),
            Err(why) => problems.push(format!("line {line}: {why}")),
        }
    }
    if !problems.is_empty() {
        return Err(row_errors(&problems));
    }
    if rows.is_empty() {
        return Err("simulation table has no rows".to_string());
    }

    let na = rows.iter().map(|r| r.ai).max().unwrap() + 1;
    let np = rows.iter().map(|r| r.pi).max().unwrap() + 1;
    let mut alpha: Vec<Option<f64>> = vec![None; na];
    let mut p: Vec<Option<f64>> = vec![None; np];
    let mut cells: Vec<Option<CellResult>> = vec![None; na * np];
    for r in rows {
        let slot = &mut cells[r.pi * na + r.ai];
        if slot.is_some() {
            problems.push(format!("line {}: duplicate cell ({}, {})", r.line, r.ai, r.pi));
            continue;
        }
        for (seen, v, what) in [(&mut alpha[r.ai], r.cell.alpha, "alpha"), (&mut p[r.pi], r.cell.p, "p")] {
            match seen {
                Some(prev) if *prev != v => {
                    problems.push(format!("line {}: {what} {v} disagrees with {prev} for the same index", r.line))
                }
                _ => *seen = Some(v),
            }
        }
        *slot = Some(r.cell);
    }
    let missing = cells.iter().filter(|c| c.is_none()).count();
    if missing > 0 {
        problems.push(format!("{missing} of {} grid cells are missing", na * np));
    }
    if !problems.is_empty() {
        return Err(row_errors(&problems));
    }
    let grid = GridSpec::new(
        alpha.into_iter().map(Option::unwrap).collect(),
        p.into_iter().map(Option::unwrap).collect(),
    )
    .map_err(|e| e.to_string())?;
    Ok((grid, cells.into_iter().map(Option::unwrap).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(text: String) -> Box<dyn std::io::Read> {
        Box::new(std::io::Cursor::new(text.into_bytes()))
    }

    #[test]
    fn summary_round_trip() {
        let text = "group,ymin,lower,middle,upper,ymax,n,n_outliers,outlier_values\n\
                    a,1,2,3,4,5,10,2,0.5;9\nb,1,2,3,4,5,10,0,\n"
            .to_string();
        let s = read_summaries(src(text)).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].outliers.iter().map(|o| o.value).collect::<Vec<_>>(), vec![0.5, 9.0]);
        assert!(s[1].outliers.is_empty());
    }

    #[test]
    fn summary_count_mismatch_names_line() {
        let text = "group,ymin,lower,middle,upper,ymax,n,n_outliers,outlier_values\na,1,2,3,4,5,10,3,0.5;9\n".to_string();
        let e = read_summaries(src(text)).unwrap_err();
        assert!(e.contains("line 2: n_outliers is 3 but 2 values are listed"), "{e}");
    }

    #[test]
    fn mosaic_gaps_and_duplicates() {
        let head = format!("{CSV_HEADER}\n");
        let e = read_mosaic(src(format!("{head}0,0,0.2,1,0.1,0.01,5,0\n1,1,0.8,2,0.1,0.01,5,0\n"))).unwrap_err();
        assert!(e.contains("2 of 4 grid cells are missing"), "{e}");
        let e = read_mosaic(src(format!("{head}0,0,0.2,1,0.1,,5,0\n0,0,0.2,1,0.1,,5,0\n"))).unwrap_err();
        assert!(e.contains("line 3: duplicate cell"), "{e}");
        let e = read_mosaic(src(format!("{head}0,0,0.2,1,x,,5,0\n"))).unwrap_err();
        assert!(e.contains("line 2: rate"), "{e}");
        let (grid, cells) = read_mosaic(src(format!("{head}0,0,0.2,1,,,0,5\n"))).unwrap();
        assert_eq!(grid.alpha_values, vec![0.2]);
        assert_eq!(cells[0].rate, None);
    }
}
