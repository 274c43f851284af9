//! CSV input tables.

use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

/// Maximum number of offending rows named in an error message.
const MAX_LISTED: usize = 10;

/// Opens `path`, or standard input when it is `None` or `-`.
pub fn open(path: Option<&Path>) -> Result<Box<dyn Read>, String> {
    match path {
        None => Ok(Box::new(io::stdin())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(io::stdin())),
        Some(p) => File::open(p)
            .map(|f| Box::new(f) as Box<dyn Read>)
            .map_err(|e| format!("cannot open {}: {e}", p.display())),
    }
}

pub fn reader(source: Box<dyn Read>) -> csv::Reader<Box<dyn Read>> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(source)
}

pub fn column(headers: &csv::StringRecord, name: &str) -> Result<usize, String> {
    headers.iter().position(|h| h == name).ok_or_else(|| {
        let names: Vec<&str> = headers.iter().collect();
        format!("no column named {name:?}; columns are: {}", names.join(", "))
    })
}

/// Joins per-row problems into one message, naming at most a few rows.
pub fn row_errors(problems: &[String]) -> String {
    let mut msg = problems.iter().take(MAX_LISTED).cloned().collect::<Vec<_>>().join("\n  ");
    if problems.len() > MAX_LISTED {
        msg.push_str(&format!("\n  ... and {} more", problems.len() - MAX_LISTED));
    }
    format!("{} malformed row(s):\n  {msg}", problems.len())
}

pub fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// A finite real, or a description of why the field is not one.
pub fn parse_real(field: &str) -> Result<f64, String> {
    match field.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("{field:?} is not finite")),
        Err(_) => Err(format!("{field:?} is not a number")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub group: String,
    pub value: f64,
    /// 1-based data row (the header is not counted).
    pub row: usize,
}

/// Group and value columns of a CSV table. Every row must carry a finite
/// value; offending rows are reported together with their line numbers.
pub fn read_observations(source: Box<dyn Read>, group: &str, value: &str) -> Result<Vec<Observation>, String> {
    let mut rdr = reader(source);
    let headers = rdr.headers().map_err(|e| format!("cannot read header: {e}"))?.clone();
    let gi = column(&headers, group)?;
    let vi = column(&headers, value)?;
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| format!("malformed CSV: {e}"))?;
        let line = line_of(&record);
        match parse_real(record.get(vi).unwrap_or("")) {
            Ok(v) => rows.push(Observation {
                group: record.get(gi).unwrap_or("").to_string(),
                value: v,
                row: i + 1,
            }),
            Err(why) => problems.push(format!("line {line}: column {value:?}: {why}")),
        }
    }
    if !problems.is_empty() {
        return Err(row_errors(&problems));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(text: &'static str) -> Box<dyn Read> {
        Box::new(text.as_bytes())
    }

    #[test]
    fn reads_selected_columns() {
        let rows = read_observations(src("g,x,y\na,1,9\n\"b,c\",2.5,9\n"), "g", "x").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].group, "b,c");
        assert_eq!((rows[1].value, rows[1].row), (2.5, 2));
    }

    #[test]
    fn rejects_bad_values_with_lines() {
        let e = read_observations(src("g,x\na,1\na,zz\nb,inf\n"), "g", "x").unwrap_err();
        assert!(e.starts_with("2 malformed row(s)"), "{e}");
        assert!(e.contains("line 3"), "{e}");
        assert!(e.contains("line 4"), "{e}");
    }

    #[test]
    fn missing_column_lists_columns() {
        let e = read_observations(src("g,x\na,1\n"), "g", "hwy").unwrap_err();
        assert_eq!(e, "no column named \"hwy\"; columns are: g, x");
    }
}
