//! CSV panels: rows are time points in ascending order, columns are
//! variables, with an optional header row of labels.

use std::path::Path;

use hdcoint::TimeSeriesPanel;

use crate::error::{CliError, CliResult};

pub fn ingest_csv(path: &Path) -> CliResult<TimeSeriesPanel> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    parse_panel(&text, path)
}

/// `origin` only labels error messages.
pub fn parse_panel(text: &str, origin: &Path) -> CliResult<TimeSeriesPanel> {
    let err = |row: usize, col: Option<usize>, msg: String| CliError::Parse {
        path: origin.to_path_buf(),
        row,
        col,
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut names: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (k, record) in reader.records().enumerate() {
        let line = k + 1;
        let record = record.map_err(|e| err(line, None, e.to_string()))?;
        let row = record.position().map_or(line, |p| p.line() as usize);
        let cells: Vec<&str> = record.iter().collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(err(
                    row,
                    None,
                    format!("expected {w} columns, found {}", cells.len()),
                ))
            }
            _ => {}
        }
        let parsed: Vec<Option<f64>> = cells.iter().map(|c| c.parse::<f64>().ok()).collect();
        if rows.is_empty() && names.is_none() && parsed.iter().all(Option::is_none) {
            names = Some(cells.iter().map(|c| c.to_string()).collect());
            continue;
        }
        let mut values = Vec::with_capacity(cells.len());
        for (j, (cell, v)) in cells.iter().zip(parsed).enumerate() {
            match v {
                Some(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(err(
                        row,
                        Some(j + 1),
                        format!("'{cell}' is not a finite number"),
                    ))
                }
            }
        }
        rows.push(values);
    }

    let p = width.unwrap_or(0);
    if p == 0 {
        return Err(err(1, None, "no data".into()));
    }
    if rows.len() < p + 3 {
        return Err(err(
            rows.len() + names.is_some() as usize,
            None,
            format!(
                "{} data rows for {p} variables; at least p + 3 = {} are needed",
                rows.len(),
                p + 3
            ),
        ));
    }
    let panel = TimeSeriesPanel::from_observations(&rows)?;
    match names {
        Some(n) => Ok(panel.with_names(n)?),
        None => Ok(panel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> CliResult<TimeSeriesPanel> {
        parse_panel(s, Path::new("test.csv"))
    }

    #[test]
    fn counts_rows_and_columns() {
        let p = parse("1,2\n2,3\n4,1\n5,5\n7,2\n").unwrap();
        assert_eq!((p.p(), p.t()), (2, 4));
        assert!(p.names().is_none());
    }

    #[test]
    fn header_becomes_labels() {
        let p = parse("us, uk\n1,2\n2,3\n4,1\n5,5\n7,2\n").unwrap();
        assert_eq!(p.names().unwrap(), ["us", "uk"]);
        assert_eq!(p.t(), 4);
    }

    #[test]
    fn ragged_row_is_named() {
        let e = parse("1,2\n2,3\n4\n5,5\n7,2\n").unwrap_err();
        match e {
            CliError::Parse { row, col, .. } => assert_eq!((row, col), (3, None)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_cell_is_located() {
        let e = parse("a,b\n1,2\n2,x\n4,1\n5,5\n7,2\n").unwrap_err();
        match e {
            CliError::Parse { row, col, .. } => assert_eq!((row, col), (3, Some(2))),
            other => panic!("{other:?}"),
        }
        assert!(parse("1,2\n2,nan\n4,1\n5,5\n7,2\n").is_err());
    }

    #[test]
    fn too_few_rows() {
        // two variables need five observations
        let e = parse("1,2\n2,3\n4,1\n5,5\n").unwrap_err();
        assert!(e.to_string().contains("p + 3"), "{e}");
    }
}
