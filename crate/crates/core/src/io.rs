//! Shared plumbing for the delimited input files.

use csv::{ReaderBuilder, StringRecord, Trim};
use std::io::Write;

use crate::error::{Error, Result, RowError};

pub(crate) fn decode_utf8(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::Encoding {
        offset: e.valid_up_to(),
    })
}

/// Rows of a delimited table with a fixed header. Rows with the wrong field
/// count or broken quoting are returned as row errors.
pub(crate) struct Table {
    pub rows: Vec<(u64, StringRecord)>,
    pub errors: Vec<RowError>,
}

pub(crate) fn read_table(text: &str, source_name: &str, expected: &[&str]) -> Result<Table> {
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(Trim::None)
        .from_reader(text.as_bytes());

    let header = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(Error::Parse(format!("{source_name}: unreadable header: {e}"))),
    };
    if text.trim().is_empty() {
        // an empty source has no header at all; treat as an empty table
        return Ok(Table {
            rows: Vec::new(),
            errors: Vec::new(),
        });
    }
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    if found != expected {
        return Err(Error::Schema {
            source_name: source_name.to_string(),
            expected: expected.join(","),
            found: found.join(","),
        });
    }

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut record = StringRecord::new();
    loop {
        let line = reader.position().line() + 1;
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(line, |p| p.line());
                if record.len() == 1 && record.get(0).is_some_and(|f| f.trim().is_empty()) {
                    continue;
                }
                if record.len() != expected.len() {
                    errors.push(RowError::new(
                        line,
                        format!("expected {} fields, found {}", expected.len(), record.len()),
                    ));
                    continue;
                }
                rows.push((line, record.clone()));
            }
            Err(e) => {
                let line = e.position().map_or(line, |p| p.line());
                errors.push(RowError::new(line, e.to_string()));
                // csv readers cannot resume after an I/O-level error
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    break;
                }
            }
        }
    }
    Ok(Table { rows, errors })
}

/// Fails when more than `max_rate` of all rows were rejected.
pub(crate) fn check_reject_rate(source_name: &str, rejected: usize, total: usize, max_rate: f64) -> Result<()> {
    if total > 0 && rejected as f64 > max_rate * total as f64 {
        return Err(Error::TooManyRejects {
            source_name: source_name.to_string(),
            rejected,
            total,
            max_rate,
        });
    }
    Ok(())
}

pub(crate) fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

pub(crate) fn parse_f64(field: &str, name: &str) -> std::result::Result<f64, String> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| format!("{name}: {field:?} is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{name}: {field:?} is not finite"));
    }
    Ok(v)
}

pub(crate) fn parse_date(field: &str, name: &str) -> std::result::Result<chrono::NaiveDate, String> {
    chrono::NaiveDate::parse_from_str(field.trim(), "%Y-%m-%d")
        .map_err(|_| format!("{name}: {field:?} is not an ISO date (YYYY-MM-DD)"))
}
