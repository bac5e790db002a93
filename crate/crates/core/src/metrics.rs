//! Per-(stock, day) performance metrics in natural units.
//!
//! Rescaling for the regressions (range ×100, citation counts ÷100) happens
//! when the panel is built, not here.

use std::collections::HashMap;
use std::io::Write;

use chrono::{Days, NaiveDate};
use serde::Serialize;

use crate::corpus::ReportRecord;
use crate::error::{Error, Result};
use crate::io::{csv_err, csv_writer};
use crate::market::{MarketData, Ohlcv};

/// Trading days averaged in the abnormal-volume denominator.
pub const VOLUME_LOOKBACK: usize = 60;
pub const SHORT_COUNT_WINDOW: u64 = 7;
pub const LONG_COUNT_WINDOW: u64 = 90;

const GK_SPREAD: f64 = 0.511;
const GK_CROSS: f64 = 0.019;
const GK_DRIFT: f64 = 0.383;

/// Garman–Klass daily variance estimate from open, high, low and close.
///
/// With `u = ln(H/O)`, `d = ln(L/O)`, `c = ln(C/O)`:
/// `0.511 (u-d)^2 - 0.019 (c(u+d) - 2ud) - 0.383 c^2`.
pub fn garman_klass(open: f64, high: f64, low: f64, close: f64) -> Result<f64> {
    if [open, high, low, close].iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(Error::Domain(format!(
            "Garman-Klass needs positive prices, got O={open} H={high} L={low} C={close}"
        )));
    }
    let u = (high / open).ln();
    let d = (low / open).ln();
    let c = (close / open).ln();
    Ok(GK_SPREAD * (u - d).powi(2) - GK_CROSS * (c * (u + d) - 2.0 * u * d) - GK_DRIFT * c * c)
}

pub fn garman_klass_range(bar: &Ohlcv) -> Result<f64> {
    garman_klass(bar.open, bar.high, bar.low, bar.close)
}

/// Stock log return minus the log return of its industry index.
pub fn excess_return(market: &MarketData, stock_id: &str, date: NaiveDate) -> Result<f64> {
    let industry = market
        .industry()
        .get(stock_id)
        .ok_or_else(|| Error::Mapping(stock_id.to_string()))?;
    let stock = market.stock_log_return(stock_id, date)?;
    let ind = market.index_log_return(&industry.index_id, date)?;
    Ok(stock - ind)
}

/// `ln(volume_t / mean(volume_{t-60..t-1}))` over trading days.
pub fn delta_volume(market: &MarketData, stock_id: &str, date: NaiveDate) -> Result<f64> {
    let gap = || Error::Gap {
        series: stock_id.to_string(),
        date,
    };
    let idx = market.calendar().index_of(date).ok_or_else(gap)?;
    let bars = market.stock_bars(stock_id).ok_or_else(gap)?;
    let today = bars.get(idx).ok_or_else(gap)?.volume;
    let history_error = |available| Error::History {
        stock: stock_id.to_string(),
        date,
        available,
        required: VOLUME_LOOKBACK,
    };
    if idx < VOLUME_LOOKBACK {
        return Err(history_error(idx));
    }
    let mut sum = 0.0;
    let mut available = 0;
    for j in idx - VOLUME_LOOKBACK..idx {
        if let Some(b) = bars.get(j) {
            sum += b.volume;
            available += 1;
        }
    }
    if available < VOLUME_LOOKBACK {
        return Err(history_error(available));
    }
    let mean = sum / VOLUME_LOOKBACK as f64;
    if today <= 0.0 || mean <= 0.0 {
        return Err(Error::Domain(format!(
            "{stock_id} on {date}: volume {today} against a {VOLUME_LOOKBACK}-day mean of {mean}"
        )));
    }
    Ok((today / mean).ln())
}

/// Release dates of the reports citing each stock, sorted.
#[derive(Debug, Clone, Default)]
pub struct CitationIndex {
    by_stock: HashMap<String, Vec<NaiveDate>>,
}

impl CitationIndex {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a ReportRecord>) -> Self {
        let mut by_stock: HashMap<String, Vec<NaiveDate>> = HashMap::new();
        for r in records {
            for code in &r.stock_codes {
                by_stock.entry(code.clone()).or_default().push(r.release_date);
            }
        }
        for dates in by_stock.values_mut() {
            dates.sort_unstable();
        }
        Self { by_stock }
    }

    /// Reports citing `stock_id` released in `[from, to]`.
    pub fn count_between(&self, stock_id: &str, from: NaiveDate, to: NaiveDate) -> usize {
        let Some(dates) = self.by_stock.get(stock_id) else {
            return 0;
        };
        if from > to {
            return 0;
        }
        let lo = dates.partition_point(|d| *d < from);
        let hi = dates.partition_point(|d| *d <= to);
        hi - lo
    }
}

/// Raw counts of reports citing the stock in the calendar windows
/// `[date-7, date-1]` and `[date-90, date-1]`, both ends inclusive.
pub fn recommendation_counts(index: &CitationIndex, stock_id: &str, date: NaiveDate) -> (usize, usize) {
    let end = date - Days::new(1);
    let num7 = index.count_between(stock_id, date - Days::new(SHORT_COUNT_WINDOW), end);
    let num90 = index.count_between(stock_id, date - Days::new(LONG_COUNT_WINDOW), end);
    (num7, num90)
}

/// Mean excess return over the trading days before, on and after `t`.
pub fn label_window_return(market: &MarketData, stock_id: &str, t: NaiveDate) -> Result<f64> {
    let cal = market.calendar();
    let mut sum = 0.0;
    for k in -1..=1 {
        let day = cal.offset(t, k).map_err(|_| Error::Gap {
            series: stock_id.to_string(),
            date: t,
        })?;
        sum += excess_return(market, stock_id, day)?;
    }
    Ok(sum / 3.0)
}

/// One stock-day of metrics, natural units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub stock_id: String,
    pub date: NaiveDate,
    pub ret_ex: f64,
    pub delta_volume: f64,
    pub range: f64,
    pub num7: usize,
    pub num90: usize,
}

/// Everything for one stock-day, or the first failure.
pub fn metric_row(
    market: &MarketData,
    citations: &CitationIndex,
    stock_id: &str,
    date: NaiveDate,
) -> Result<MetricRow> {
    let bar = market.bar(stock_id, date).ok_or_else(|| Error::Gap {
        series: stock_id.to_string(),
        date,
    })?;
    let (num7, num90) = recommendation_counts(citations, stock_id, date);
    Ok(MetricRow {
        stock_id: stock_id.to_string(),
        date,
        ret_ex: excess_return(market, stock_id, date)?,
        delta_volume: delta_volume(market, stock_id, date)?,
        range: garman_klass_range(bar)?,
        num7,
        num90,
    })
}

pub const METRIC_DUMP_HEADER: [&str; 7] = ["stock_id", "date", "ret_ex", "delta_volume", "range", "num7", "num90"];

/// Writes metric rows, preceded by a comment line stating the units.
pub fn write_metric_dump<W: Write>(rows: &[MetricRow], mut out: W) -> Result<()> {
    writeln!(
        out,
        "# units: natural; range is the unscaled Garman-Klass variance; num7/num90 are raw report counts"
    )?;
    let mut w = csv_writer(out);
    w.write_record(METRIC_DUMP_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.stock_id.clone(),
            r.date.to_string(),
            r.ret_ex.to_string(),
            r.delta_volume.to_string(),
            r.range.to_string(),
            r.num7.to_string(),
            r.num90.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
