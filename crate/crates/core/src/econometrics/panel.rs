//! Lagged regression panel: one row per (report, stock).
//!
//! The release trading day `r` is the first trading day on or after the
//! report's release date; the outcome day is the next trading day. Every
//! `*_lag` field is measured on `r`, every `outcome_*` field on the outcome
//! day. Range is scaled by 100 and the citation counts divided by 100.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::corpus::ReportRecord;
use crate::error::{Error, Result};
use crate::io::{csv_err, csv_writer};
use crate::market::{Align, MarketData, VixMode, CSI500, SSE, SZSE};
use crate::metrics::{excess_return, metric_row, CitationIndex, MetricRow};
use crate::sentiment::ScoreTriple;

pub const RANGE_SCALE: f64 = 100.0;
pub const COUNT_SCALE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRow {
    pub report_id: String,
    pub stock_id: String,
    pub release_date: NaiveDate,
    pub outcome_date: NaiveDate,
    pub pos_lag: f64,
    pub neg_lag: f64,
    pub range_lag: f64,
    pub retex_lag: f64,
    pub dvol_lag: f64,
    pub outcome_range: f64,
    pub outcome_retex: f64,
    pub outcome_dvol: f64,
    pub szse_lag: f64,
    pub sse_lag: f64,
    pub csi500_lag: f64,
    pub vix_lag: f64,
    pub num90_lag: f64,
    pub num7_lag: f64,
    /// Excess return on the trading day before the release day, when available.
    pub retex_pre: Option<f64>,
}

pub const PANEL_HEADER: [&str; 19] = [
    "report_id",
    "stock_id",
    "release_date",
    "outcome_date",
    "pos_lag",
    "neg_lag",
    "range_lag",
    "retex_lag",
    "dvol_lag",
    "outcome_range",
    "outcome_retex",
    "outcome_dvol",
    "szse_lag",
    "sse_lag",
    "csi500_lag",
    "vix_lag",
    "num90_lag",
    "num7_lag",
    "retex_pre",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    MissingScore,
    NoIndustryMapping,
    OutsideCalendar,
    MissingObservation,
    InsufficientHistory,
    InvalidValue,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::MissingScore => "missing score",
            DropReason::NoIndustryMapping => "no industry mapping",
            DropReason::OutsideCalendar => "outside calendar",
            DropReason::MissingObservation => "missing observation",
            DropReason::InsufficientHistory => "insufficient history",
            DropReason::InvalidValue => "invalid value",
        }
    }

    fn of(err: &Error) -> Self {
        match err {
            Error::Mapping(_) => DropReason::NoIndustryMapping,
            Error::OutOfRange { .. } => DropReason::OutsideCalendar,
            Error::Gap { .. } => DropReason::MissingObservation,
            Error::History { .. } => DropReason::InsufficientHistory,
            _ => DropReason::InvalidValue,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PanelBuild {
    pub rows: Vec<PanelRow>,
    pub drops: BTreeMap<DropReason, usize>,
}

impl PanelBuild {
    pub fn dropped(&self) -> usize {
        self.drops.values().sum()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PanelOptions {
    pub vix: VixMode,
}

/// Rows for every (report, stock) pair in `reports`, in input order.
///
/// `citations` should index the whole corpus so that recommendation counts
/// see reports outside the analysed subset too.
pub fn build_panel(
    reports: &[ReportRecord],
    scores: &HashMap<String, ScoreTriple>,
    market: &MarketData,
    citations: &CitationIndex,
    opts: PanelOptions,
) -> Result<PanelBuild> {
    let mut build = PanelBuild::default();
    for report in reports {
        for stock in &report.stock_codes {
            let Some(score) = scores.get(&report.report_id) else {
                *build.drops.entry(DropReason::MissingScore).or_default() += 1;
                continue;
            };
            match panel_row(report, stock, *score, market, citations, opts) {
                Ok(row) => build.rows.push(row),
                Err(e) => *build.drops.entry(DropReason::of(&e)).or_default() += 1,
            }
        }
    }
    if build.rows.is_empty() {
        return Err(Error::EmptyPanel);
    }
    Ok(build)
}

fn panel_row(
    report: &ReportRecord,
    stock: &str,
    score: ScoreTriple,
    market: &MarketData,
    citations: &CitationIndex,
    opts: PanelOptions,
) -> Result<PanelRow> {
    if market.industry().get(stock).is_none() {
        return Err(Error::Mapping(stock.to_string()));
    }
    let cal = market.calendar();
    let release = cal.align(report.release_date, Align::SameOrNext)?;
    let outcome = cal.offset(release, 1)?;

    let lag: MetricRow = metric_row(market, citations, stock, release)?;
    let out: MetricRow = metric_row(market, citations, stock, outcome)?;
    // counts look back from the calendar release date, so the report never counts itself
    let (num7, num90) = crate::metrics::recommendation_counts(citations, stock, report.release_date);

    let retex_pre = cal
        .offset(release, -1)
        .ok()
        .and_then(|d| excess_return(market, stock, d).ok());

    let row = PanelRow {
        report_id: report.report_id.clone(),
        stock_id: stock.to_string(),
        release_date: release,
        outcome_date: outcome,
        pos_lag: score.pos,
        neg_lag: score.neg,
        range_lag: lag.range * RANGE_SCALE,
        retex_lag: lag.ret_ex,
        dvol_lag: lag.delta_volume,
        outcome_range: out.range * RANGE_SCALE,
        outcome_retex: out.ret_ex,
        outcome_dvol: out.delta_volume,
        szse_lag: market.index_log_return(SZSE, release)?,
        sse_lag: market.index_log_return(SSE, release)?,
        csi500_lag: market.index_log_return(CSI500, release)?,
        vix_lag: market.vix_change(release, opts.vix)?,
        num90_lag: num90 as f64 / COUNT_SCALE,
        num7_lag: num7 as f64 / COUNT_SCALE,
        retex_pre,
    };
    if row.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "non-finite panel value for {} / {stock}",
            report.report_id
        )));
    }
    Ok(row)
}

impl PanelRow {
    fn values(&self) -> [f64; 14] {
        [
            self.pos_lag,
            self.neg_lag,
            self.range_lag,
            self.retex_lag,
            self.dvol_lag,
            self.outcome_range,
            self.outcome_retex,
            self.outcome_dvol,
            self.szse_lag,
            self.sse_lag,
            self.csi500_lag,
            self.vix_lag,
            self.num90_lag,
            self.num7_lag,
        ]
    }

    /// Mean excess return over the day before, the release day and the outcome day.
    pub fn three_day_retex(&self) -> Option<f64> {
        self.retex_pre
            .map(|pre| (pre + self.retex_lag + self.outcome_retex) / 3.0)
    }
}

pub fn write_panel<W: Write>(rows: &[PanelRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(PANEL_HEADER).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            r.report_id.clone(),
            r.stock_id.clone(),
            r.release_date.to_string(),
            r.outcome_date.to_string(),
        ];
        rec.extend(r.values().iter().map(|v| v.to_string()));
        rec.push(r.retex_pre.map(|v| v.to_string()).unwrap_or_default());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
