//! CSV column ingestion: header auto-detection, column selection by name or
//! 0-based index, and a missing-value policy.

use std::path::PathBuf;

use madcdf::{Sample, SampleError};
use thiserror::Error;

/// What to do with empty/NA cells in the selected column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum MissingPolicy {
    /// Any missing cell is an error.
    #[default]
    Error,
    /// Drop empty/NA cells; anything else unparsable is still an error.
    Skip,
}

/// Selects one numeric column of a CSV file.
#[derive(Debug, Clone)]
pub struct ColumnSelector {
    pub path: PathBuf,
    /// Column name (requires a header row) or 0-based index; `None` picks the
    /// first column whose leading data cell parses as a number.
    pub column: Option<String>,
    pub missing: MissingPolicy,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot open {path}: {source}")]
    FileNotFound {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("column {0} not found")]
    ColumnNotFound(String),
    #[error("row {row}, column {col}: cannot parse {cell:?} as a number")]
    ParseError {
        row: usize,
        col: usize,
        cell: String,
    },
    #[error("no usable values remain after filtering")]
    EmptyAfterFilter,
    #[error("malformed CSV: {0}")]
    Malformed(#[from] csv::Error),
    #[error(transparent)]
    BadSample(#[from] SampleError),
}

fn is_numeric_cell(cell: &str) -> bool {
    !cell.is_empty() && cell.parse::<f64>().is_ok()
}

fn is_missing_cell(cell: &str) -> bool {
    cell.is_empty()
        || cell.eq_ignore_ascii_case("na")
        || cell.eq_ignore_ascii_case("n/a")
        || cell.eq_ignore_ascii_case("nan")
        || cell.eq_ignore_ascii_case("null")
}

/// Loads the selected column as a [`Sample`].
///
/// A header row is assumed when the first row contains no numeric cell and at
/// least one non-empty cell. Row numbers in errors are 1-based physical file
/// rows (the header, when present, is row 1).
pub fn load_csv(sel: &ColumnSelector) -> Result<Sample, LoadError> {
    let file = std::fs::File::open(&sel.path).map_err(|source| LoadError::FileNotFound {
        path: sel.path.clone(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for record in reader.records() {
        rows.push(record?);
    }

    let has_header = rows.first().is_some_and(|row| {
        row.iter().all(|cell| !is_numeric_cell(cell)) && row.iter().any(|cell| !cell.is_empty())
    });
    let data_start = usize::from(has_header);
    let data_rows = &rows[data_start.min(rows.len())..];

    let col_index = resolve_column(sel, &rows, has_header, data_rows)?;

    let mut values = Vec::with_capacity(data_rows.len());
    for (offset, row) in data_rows.iter().enumerate() {
        let file_row = data_start + offset + 1;
        let cell = row.get(col_index).unwrap_or("");
        if is_missing_cell(cell) {
            match sel.missing {
                MissingPolicy::Skip => continue,
                MissingPolicy::Error => {
                    return Err(LoadError::ParseError {
                        row: file_row,
                        col: col_index,
                        cell: cell.to_string(),
                    })
                }
            }
        }
        match cell.parse::<f64>() {
            Ok(x) if x.is_finite() => values.push(x),
            _ => {
                return Err(LoadError::ParseError {
                    row: file_row,
                    col: col_index,
                    cell: cell.to_string(),
                })
            }
        }
    }

    if values.is_empty() {
        return Err(LoadError::EmptyAfterFilter);
    }
    Ok(Sample::new(&values)?)
}

fn resolve_column(
    sel: &ColumnSelector,
    rows: &[csv::StringRecord],
    has_header: bool,
    data_rows: &[csv::StringRecord],
) -> Result<usize, LoadError> {
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    match &sel.column {
        Some(spec) => {
            if let Ok(index) = spec.parse::<usize>() {
                if index < width {
                    return Ok(index);
                }
                return Err(LoadError::ColumnNotFound(spec.clone()));
            }
            if has_header {
                if let Some(index) = rows[0].iter().position(|name| name == spec) {
                    return Ok(index);
                }
            }
            Err(LoadError::ColumnNotFound(spec.clone()))
        }
        None => {
            for index in 0..width {
                let first_filled = data_rows
                    .iter()
                    .filter_map(|row| row.get(index))
                    .find(|cell| !cell.is_empty());
                if first_filled.is_some_and(is_numeric_cell) {
                    return Ok(index);
                }
            }
            Err(LoadError::ColumnNotFound(
                "<first numeric column>".to_string(),
            ))
        }
    }
}
