//! Comparison CSV reading and writing.

use std::fmt;
use std::io::{Read, Write};

use pairrank::{ComparisonRecord, Winner};

/// A problem with the comparison CSV. Row problems carry the 1-based line number.
#[derive(Debug, Clone, PartialEq)]
pub enum CsvError {
    MissingColumn(&'static str),
    UnknownWinner { line: u64, value: String },
    BadWeight { line: u64, value: String },
    Malformed { line: Option<u64>, message: String },
}

impl CsvError {
    pub fn line(&self) -> Option<u64> {
        match self {
            CsvError::MissingColumn(_) => Some(1),
            CsvError::UnknownWinner { line, .. } | CsvError::BadWeight { line, .. } => Some(*line),
            CsvError::Malformed { line, .. } => *line,
        }
    }
}

impl fmt::Display for CsvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CsvError::MissingColumn(name) => write!(f, "line 1: missing required column {name:?}"),
            CsvError::UnknownWinner { line, value } => write!(
                f,
                "line {line}: unknown winner {value:?} (expected left, right, tie or draw)"
            ),
            CsvError::BadWeight { line, value } => write!(
                f,
                "line {line}: weight {value:?} is not a finite non-negative number"
            ),
            CsvError::Malformed { line: Some(line), message } => write!(f, "line {line}: {message}"),
            CsvError::Malformed { line: None, message } => f.write_str(message),
        }
    }
}

impl std::error::Error for CsvError {}

impl From<csv::Error> for CsvError {
    fn from(error: csv::Error) -> Self {
        let line = error.position().map(|p| p.line());
        let message = match error.kind() {
            csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                format!("expected {expected_len} fields but found {len}")
            }
            csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".to_string(),
            _ => error.to_string(),
        };
        CsvError::Malformed { line, message }
    }
}

fn column(headers: &csv::StringRecord, name: &'static str) -> Result<usize, CsvError> {
    headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case(name))
        .ok_or(CsvError::MissingColumn(name))
}

/// Reads records from CSV with a header naming `left`, `right` and `winner` columns,
/// plus an optional `weight` column (default 1). Other columns are ignored.
pub fn parse_comparisons_csv<R: Read>(reader: R) -> Result<Vec<ComparisonRecord>, CsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = reader.headers()?.clone();
    let left = column(&headers, "left")?;
    let right = column(&headers, "right")?;
    let winner = column(&headers, "winner")?;
    let weight = column(&headers, "weight").ok();

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let label = &row[winner];
        let outcome: Winner = label.parse().map_err(|_| CsvError::UnknownWinner {
            line,
            value: label.to_string(),
        })?;
        let w = match weight.map(|i| &row[i]) {
            None | Some("") => 1.0,
            Some(text) => match text.parse::<f64>() {
                Ok(w) if w.is_finite() && w >= 0.0 => w,
                _ => {
                    return Err(CsvError::BadWeight {
                        line,
                        value: text.to_string(),
                    })
                }
            },
        };
        records.push(ComparisonRecord::weighted(&row[left], &row[right], outcome, w));
    }
    Ok(records)
}

/// Writes `left,right,winner,weight` rows that [`parse_comparisons_csv`] reads back
/// unchanged.
pub fn write_comparisons_csv<W: Write>(records: &[ComparisonRecord], writer: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["left", "right", "winner", "weight"])?;
    for r in records {
        out.write_record([
            r.left.as_str(),
            r.right.as_str(),
            r.winner.as_str(),
            &format!("{:?}", r.weight),
        ])?;
    }
    out.flush()?;
    Ok(())
}
