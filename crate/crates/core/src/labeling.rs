//! Tri-class report labels from the pooled rank of 3-day excess returns.
//!
//! The pool is sorted by `(window_return desc, report_id asc, stock_id asc)`.
//! The first `floor(upper_q * n)` entries are positive, the last
//! `floor(lower_q * n)` negative, the rest neutral.

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{csv_err, csv_writer};

pub const DEFAULT_UPPER_QUANTILE: f64 = 0.30;
pub const DEFAULT_LOWER_QUANTILE: f64 = 0.30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Neutral,
    Negative,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Neutral => "neutral",
            Label::Negative => "negative",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub report_id: String,
    pub stock_id: String,
    pub window_return: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledReport {
    pub report_id: String,
    pub stock_id: String,
    pub window_return: f64,
    pub label: Label,
}

fn rank_order(a: &PoolEntry, b: &PoolEntry) -> Ordering {
    b.window_return
        .total_cmp(&a.window_return)
        .then_with(|| a.report_id.cmp(&b.report_id))
        .then_with(|| a.stock_id.cmp(&b.stock_id))
}

/// Labels returned in rank order (best window return first).
pub fn assign_labels(pool: &[PoolEntry], upper_q: f64, lower_q: f64) -> Result<Vec<LabeledReport>> {
    if pool.is_empty() {
        return Err(Error::Argument("labeling pool is empty".into()));
    }
    if !(0.0..1.0).contains(&upper_q) || !(0.0..1.0).contains(&lower_q) || upper_q + lower_q >= 1.0 {
        return Err(Error::Argument(format!(
            "tail fractions {upper_q} and {lower_q} must be non-negative and sum below 1"
        )));
    }
    if let Some(bad) = pool.iter().find(|e| !e.window_return.is_finite()) {
        return Err(Error::Argument(format!(
            "non-finite window return for {} / {}",
            bad.report_id, bad.stock_id
        )));
    }

    let n = pool.len();
    let n_pos = (upper_q * n as f64).floor() as usize;
    let n_neg = (lower_q * n as f64).floor() as usize;

    let mut sorted: Vec<&PoolEntry> = pool.iter().collect();
    sorted.sort_by(|a, b| rank_order(a, b));
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(rank, e)| LabeledReport {
            report_id: e.report_id.clone(),
            stock_id: e.stock_id.clone(),
            window_return: e.window_return,
            label: if rank < n_pos {
                Label::Positive
            } else if rank >= n - n_neg {
                Label::Negative
            } else {
                Label::Neutral
            },
        })
        .collect())
}

pub const LABEL_HEADER: [&str; 4] = ["report_id", "stock_id", "window_return", "label"];

pub fn write_labels<W: Write>(labels: &[LabeledReport], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(LABEL_HEADER).map_err(csv_err)?;
    for l in labels {
        w.write_record([
            l.report_id.as_str(),
            l.stock_id.as_str(),
            l.window_return.to_string().as_str(),
            l.label.as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
