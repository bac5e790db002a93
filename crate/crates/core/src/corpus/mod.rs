//! Analyst-report corpus: ingestion, validation, cleaning and segmentation.
//!
//! Two on-disk layouts are accepted. The delimited layout is a UTF-8 CSV file
//! with the header
//!
//! ```text
//! report_id,title,abstract,stock_codes,release_date
//! ```
//!
//! where `stock_codes` is a `;`-separated list such as `600508.SH;000001.SZ`
//! and `release_date` is `YYYY-MM-DD`. The line-delimited layout carries one
//! JSON object per line with the same keys, `stock_codes` being a JSON array.

mod clean;
mod segment;

pub use clean::{clean_text, TextCleaner, DEFAULT_RISK_WARNINGS, DEFAULT_TAIL_FRACTION};
pub use segment::{parse_dictionary, segment, Dictionary};

use std::collections::HashSet;
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowError};
use crate::io::{check_reject_rate, csv_err, csv_writer, decode_utf8, parse_date, read_table};

/// Built-in segmentation dictionary used when none is configured.
pub const DEFAULT_DICTIONARY_TXT: &str = include_str!("../../resources/dictionary.txt");

pub fn default_dictionary() -> Dictionary {
    parse_dictionary(DEFAULT_DICTIONARY_TXT.as_bytes()).expect("built-in dictionary parses")
}

pub const CORPUS_HEADER: [&str; 5] = ["report_id", "title", "abstract", "stock_codes", "release_date"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub report_id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub stock_codes: Vec<String>,
    pub release_date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanedReport {
    pub report_id: String,
    pub text: String,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Delimited,
    JsonLines,
}

impl CorpusFormat {
    /// `.jsonl` / `.ndjson` files are line-delimited JSON, anything else is CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => CorpusFormat::JsonLines,
            _ => CorpusFormat::Delimited,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusOptions {
    /// Inclusive bounds on accepted release dates.
    pub date_range: Option<(NaiveDate, NaiveDate)>,
    pub max_reject_rate: f64,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self {
            date_range: None,
            max_reject_rate: 0.05,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub records: Vec<ReportRecord>,
    pub rejects: Vec<RowError>,
}

/// Exchange code of the form `<digits>.<suffix>`, e.g. `600508.SH`.
pub fn is_valid_stock_code(code: &str) -> bool {
    match code.split_once('.') {
        Some((num, exch)) => {
            !num.is_empty()
                && num.bytes().all(|b| b.is_ascii_digit())
                && !exch.is_empty()
                && exch.bytes().all(|b| b.is_ascii_uppercase())
        }
        None => false,
    }
}

fn split_codes(field: &str) -> Vec<String> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn validate(
    report_id: String,
    title: String,
    abstract_text: String,
    codes: Vec<String>,
    release_date: NaiveDate,
    opts: &CorpusOptions,
) -> std::result::Result<ReportRecord, String> {
    if report_id.trim().is_empty() {
        return Err("empty report_id".into());
    }
    if codes.is_empty() {
        return Err("no stock codes".into());
    }
    let mut stock_codes: Vec<String> = Vec::with_capacity(codes.len());
    for code in codes {
        if !is_valid_stock_code(&code) {
            return Err(format!("invalid stock code {code:?}"));
        }
        if !stock_codes.contains(&code) {
            stock_codes.push(code);
        }
    }
    if let Some((lo, hi)) = opts.date_range {
        if release_date < lo || release_date > hi {
            return Err(format!("release date {release_date} outside {lo}..={hi}"));
        }
    }
    Ok(ReportRecord {
        report_id,
        title,
        abstract_text,
        stock_codes,
        release_date,
    })
}

#[derive(Deserialize)]
struct JsonRow {
    report_id: String,
    title: String,
    #[serde(rename = "abstract")]
    abstract_text: String,
    stock_codes: Vec<String>,
    release_date: String,
}

/// Parses a corpus source. Bad rows are collected as rejects; the call fails
/// only on undecodable input, a header mismatch, a duplicate report id, or a
/// reject rate above `opts.max_reject_rate`.
pub fn parse_corpus(bytes: &[u8], format: CorpusFormat, opts: &CorpusOptions) -> Result<Corpus> {
    let text = decode_utf8(bytes)?;
    let mut rows: Vec<(u64, std::result::Result<ReportRecord, String>)> = Vec::new();
    let mut rejects = Vec::new();

    match format {
        CorpusFormat::Delimited => {
            let table = read_table(text, "corpus", &CORPUS_HEADER)?;
            rejects.extend(table.errors);
            for (line, rec) in table.rows {
                let parsed = parse_date(&rec[4], "release_date").and_then(|date| {
                    validate(
                        rec[0].to_string(),
                        rec[1].to_string(),
                        rec[2].to_string(),
                        split_codes(&rec[3]),
                        date,
                        opts,
                    )
                });
                rows.push((line, parsed));
            }
        }
        CorpusFormat::JsonLines => {
            for (idx, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let parsed = serde_json::from_str::<JsonRow>(line)
                    .map_err(|e| e.to_string())
                    .and_then(|r| {
                        let date = parse_date(&r.release_date, "release_date")?;
                        let codes = r.stock_codes.iter().map(|c| c.trim().to_string()).collect();
                        validate(r.report_id, r.title, r.abstract_text, codes, date, opts)
                    });
                rows.push((idx as u64 + 1, parsed));
            }
        }
    }

    let total = rows.len() + rejects.len();
    let mut seen = HashSet::new();
    let mut records = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        match row {
            Ok(rec) => {
                if !seen.insert(rec.report_id.clone()) {
                    return Err(Error::DuplicateReportId(rec.report_id));
                }
                records.push(rec);
            }
            Err(msg) => rejects.push(RowError::new(line, msg)),
        }
    }
    rejects.sort_by_key(|r| r.line);
    check_reject_rate("corpus", rejects.len(), total, opts.max_reject_rate)?;
    Ok(Corpus { records, rejects })
}

pub fn write_corpus<W: Write>(records: &[ReportRecord], format: CorpusFormat, mut out: W) -> Result<()> {
    match format {
        CorpusFormat::Delimited => {
            let mut w = csv_writer(out);
            w.write_record(CORPUS_HEADER).map_err(csv_err)?;
            for r in records {
                let date = r.release_date.format("%Y-%m-%d").to_string();
                w.write_record([
                    r.report_id.as_str(),
                    r.title.as_str(),
                    r.abstract_text.as_str(),
                    r.stock_codes.join(";").as_str(),
                    date.as_str(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        CorpusFormat::JsonLines => {
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| Error::Parse(e.to_string()))?;
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

/// Writes rejected rows as a sidecar `line,message` file.
pub fn write_rejects<W: Write>(rejects: &[RowError], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["line", "message"]).map_err(csv_err)?;
    for r in rejects {
        w.write_record([r.line.to_string(), r.message.clone()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Title and abstract are joined with a single line break before cleaning,
/// which collapses it to one space.
pub fn clean_report(record: &ReportRecord, cleaner: &TextCleaner, dictionary: &Dictionary) -> CleanedReport {
    let joined = format!("{}\n{}", record.title, record.abstract_text);
    let text = cleaner.clean(&joined);
    let tokens = segment(&text, dictionary);
    CleanedReport {
        report_id: record.report_id.clone(),
        text,
        tokens,
    }
}
