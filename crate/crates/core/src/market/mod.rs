//! Daily market data: per-stock bars, index levels, the industry map and the
//! trading calendar.
//!
//! File layouts (UTF-8 CSV with a header row):
//!
//! | file     | columns                                              |
//! |----------|------------------------------------------------------|
//! | bars     | `stock_id,date,open,high,low,close,volume`           |
//! | indices  | `index_id,date,level`                                |
//! | industry | `stock_id,industry_index_id,sector_name`             |
//! | calendar | `date`                                               |
//!
//! When no calendar file is supplied the calendar is the union of bar dates.

mod calendar;

pub use calendar::{Align, TradingCalendar};

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowError};
use crate::io::{check_reject_rate, csv_err, csv_writer, decode_utf8, parse_date, parse_f64, read_table};

pub const SSE: &str = "SSE";
pub const SZSE: &str = "SZSE";
pub const CSI500: &str = "CSI500";
pub const VIX: &str = "VIX";

pub const BARS_HEADER: [&str; 7] = ["stock_id", "date", "open", "high", "low", "close", "volume"];
pub const INDEX_HEADER: [&str; 3] = ["index_id", "date", "level"];
pub const INDUSTRY_HEADER: [&str; 3] = ["stock_id", "industry_index_id", "sector_name"];
pub const CALENDAR_HEADER: [&str; 1] = ["date"];

/// Calendar days of history required before the first report.
pub const CALENDAR_MARGIN_DAYS: u64 = 90;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ohlcv {
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: f64,
}

impl Ohlcv {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let prices = [self.open, self.high, self.low, self.close];
        if prices.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err("prices must be finite and positive".into());
        }
        if !self.volume.is_finite() || self.volume < 0.0 {
            return Err("volume must be finite and non-negative".into());
        }
        if self.low > self.open.min(self.close) {
            return Err(format!("low {} above min(open, close)", self.low));
        }
        if self.high < self.open.max(self.close) {
            return Err(format!("high {} below max(open, close)", self.high));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyBar {
    pub stock_id: String,
    pub date: NaiveDate,
    #[serde(flatten)]
    pub prices: Ohlcv,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IndexSeries {
    pub index_id: String,
    pub observations: BTreeMap<NaiveDate, f64>,
}

impl IndexSeries {
    pub fn new(index_id: impl Into<String>) -> Self {
        Self {
            index_id: index_id.into(),
            observations: BTreeMap::new(),
        }
    }
}

/// A date-indexed level series that log returns can be taken from.
pub trait LevelSeries {
    fn series_name(&self) -> &str;
    fn level(&self, date: NaiveDate) -> Option<f64>;
}

impl LevelSeries for IndexSeries {
    fn series_name(&self) -> &str {
        &self.index_id
    }

    fn level(&self, date: NaiveDate) -> Option<f64> {
        self.observations.get(&date).copied()
    }
}

/// Closing prices of one stock.
pub struct CloseSeries<'a> {
    stock_id: &'a str,
    bars: &'a StockBars,
    calendar: &'a TradingCalendar,
}

impl LevelSeries for CloseSeries<'_> {
    fn series_name(&self) -> &str {
        self.stock_id
    }

    fn level(&self, date: NaiveDate) -> Option<f64> {
        let i = self.calendar.index_of(date)?;
        self.bars.get(i).map(|b| b.close)
    }
}

/// `ln(level_t / level_{t-1})` where `t-1` is the previous trading day.
pub fn log_return(series: &dyn LevelSeries, calendar: &TradingCalendar, date: NaiveDate) -> Result<f64> {
    let gap = |date| Error::Gap {
        series: series.series_name().to_string(),
        date,
    };
    let prev = calendar.align(date, Align::Previous).map_err(|_| gap(date))?;
    let now = series.level(date).ok_or_else(|| gap(date))?;
    let before = series.level(prev).ok_or_else(|| gap(prev))?;
    Ok((now / before).ln())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndustryEntry {
    pub index_id: String,
    pub sector: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndustryMap {
    entries: BTreeMap<String, IndustryEntry>,
}

impl IndustryMap {
    pub fn insert(&mut self, stock_id: impl Into<String>, entry: IndustryEntry) -> Option<IndustryEntry> {
        self.entries.insert(stock_id.into(), entry)
    }

    pub fn get(&self, stock_id: &str) -> Option<&IndustryEntry> {
        self.entries.get(stock_id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &IndustryEntry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Bars of one stock, aligned to calendar positions.
#[derive(Debug, Clone, Default)]
pub struct StockBars {
    slots: Vec<Option<Ohlcv>>,
}

impl StockBars {
    pub fn get(&self, index: usize) -> Option<&Ohlcv> {
        self.slots.get(index).and_then(Option::as_ref)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VixMode {
    /// `level_t - level_{t-1}`
    #[default]
    Difference,
    /// `ln(level_t / level_{t-1})`
    LogDifference,
}

#[derive(Debug, Clone, Default)]
pub struct MarketData {
    calendar: TradingCalendar,
    bars: BTreeMap<String, StockBars>,
    indices: BTreeMap<String, IndexSeries>,
    industry: IndustryMap,
}

impl MarketData {
    /// Builds the stores. Bars dated off the calendar, or duplicated, come back
    /// as messages keyed by their position in `bars`.
    pub fn new(
        calendar: TradingCalendar,
        bars: Vec<DailyBar>,
        indices: Vec<IndexSeries>,
        industry: IndustryMap,
    ) -> (Self, Vec<(usize, String)>) {
        let mut problems = Vec::new();
        let mut store: BTreeMap<String, StockBars> = BTreeMap::new();
        for (pos, bar) in bars.into_iter().enumerate() {
            let Some(i) = calendar.index_of(bar.date) else {
                problems.push((pos, format!("{} is not a trading day", bar.date)));
                continue;
            };
            let series = store.entry(bar.stock_id).or_default();
            if series.slots.len() < calendar.len() {
                series.slots.resize(calendar.len(), None);
            }
            if series.slots[i].is_some() {
                problems.push((pos, format!("duplicate bar for {}", bar.date)));
                continue;
            }
            series.slots[i] = Some(bar.prices);
        }
        let indices = indices.into_iter().map(|s| (s.index_id.clone(), s)).collect();
        let data = Self {
            calendar,
            bars: store,
            indices,
            industry,
        };
        (data, problems)
    }

    pub fn calendar(&self) -> &TradingCalendar {
        &self.calendar
    }

    pub fn industry(&self) -> &IndustryMap {
        &self.industry
    }

    pub fn stocks(&self) -> impl Iterator<Item = &str> {
        self.bars.keys().map(String::as_str)
    }

    pub fn index(&self, index_id: &str) -> Option<&IndexSeries> {
        self.indices.get(index_id)
    }

    pub fn indices(&self) -> impl Iterator<Item = &IndexSeries> {
        self.indices.values()
    }

    pub fn bar(&self, stock_id: &str, date: NaiveDate) -> Option<&Ohlcv> {
        let i = self.calendar.index_of(date)?;
        self.bars.get(stock_id)?.get(i)
    }

    pub fn stock_bars(&self, stock_id: &str) -> Option<&StockBars> {
        self.bars.get(stock_id)
    }

    pub fn close_series<'a>(&'a self, stock_id: &'a str) -> Option<CloseSeries<'a>> {
        let bars = self.bars.get(stock_id)?;
        Some(CloseSeries {
            stock_id,
            bars,
            calendar: &self.calendar,
        })
    }

    pub fn stock_log_return(&self, stock_id: &str, date: NaiveDate) -> Result<f64> {
        let series = self.close_series(stock_id).ok_or_else(|| Error::Gap {
            series: stock_id.to_string(),
            date,
        })?;
        log_return(&series, &self.calendar, date)
    }

    pub fn index_log_return(&self, index_id: &str, date: NaiveDate) -> Result<f64> {
        let series = self.indices.get(index_id).ok_or_else(|| Error::Gap {
            series: index_id.to_string(),
            date,
        })?;
        log_return(series, &self.calendar, date)
    }

    pub fn vix_change(&self, date: NaiveDate, mode: VixMode) -> Result<f64> {
        let series = self.indices.get(VIX).ok_or_else(|| Error::Gap {
            series: VIX.to_string(),
            date,
        })?;
        match mode {
            VixMode::LogDifference => log_return(series, &self.calendar, date),
            VixMode::Difference => {
                let gap = |date| Error::Gap {
                    series: VIX.to_string(),
                    date,
                };
                let prev = self.calendar.align(date, Align::Previous).map_err(|_| gap(date))?;
                let now = series.level(date).ok_or_else(|| gap(date))?;
                let before = series.level(prev).ok_or_else(|| gap(prev))?;
                Ok(now - before)
            }
        }
    }

    /// The calendar must start at least 90 calendar days before the first
    /// report and run through the last one.
    pub fn check_coverage(&self, first_report: NaiveDate, last_report: NaiveDate) -> Result<()> {
        let (Some(start), Some(end)) = (self.calendar.first(), self.calendar.last()) else {
            return Err(Error::Coverage("an empty calendar".into()));
        };
        let needed = first_report - chrono::Days::new(CALENDAR_MARGIN_DAYS);
        if start > needed {
            return Err(Error::Coverage(format!(
                "{needed} ({CALENDAR_MARGIN_DAYS} days before the first report on {first_report}); it starts {start}"
            )));
        }
        if end < last_report {
            return Err(Error::Coverage(format!(
                "the last report on {last_report}; it ends {end}"
            )));
        }
        Ok(())
    }

    /// Copy without any observation dated before `cutoff`. The calendar is kept
    /// whole so positions stay comparable.
    pub fn restricted_from(&self, cutoff: NaiveDate) -> MarketData {
        let first_kept = self.calendar.dates().partition_point(|d| *d < cutoff);
        let bars = self
            .bars
            .iter()
            .map(|(k, v)| {
                let mut slots = v.slots.clone();
                for s in slots.iter_mut().take(first_kept) {
                    *s = None;
                }
                (k.clone(), StockBars { slots })
            })
            .collect();
        let indices = self
            .indices
            .iter()
            .map(|(k, v)| {
                let observations = v.observations.range(cutoff..).map(|(d, l)| (*d, *l)).collect();
                (
                    k.clone(),
                    IndexSeries {
                        index_id: v.index_id.clone(),
                        observations,
                    },
                )
            })
            .collect();
        MarketData {
            calendar: self.calendar.clone(),
            bars,
            indices,
            industry: self.industry.clone(),
        }
    }

    /// Earliest dated observation held in any store.
    pub fn earliest_observation(&self) -> Option<NaiveDate> {
        let bar_min = self
            .bars
            .values()
            .filter_map(|b| b.slots.iter().position(Option::is_some))
            .min()
            .and_then(|i| self.calendar.date_at(i));
        let idx_min = self
            .indices
            .values()
            .filter_map(|s| s.observations.keys().next().copied())
            .min();
        match (bar_min, idx_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

pub fn parse_bars(bytes: &[u8]) -> Result<(Vec<DailyBar>, Vec<RowError>)> {
    parse_bars_with_lines(bytes).map(|(bars, _, errors)| (bars, errors))
}

fn parse_bars_with_lines(bytes: &[u8]) -> Result<(Vec<DailyBar>, Vec<u64>, Vec<RowError>)> {
    let text = decode_utf8(bytes)?;
    let table = read_table(text, "bars", &BARS_HEADER)?;
    let mut errors = table.errors;
    let mut bars = Vec::with_capacity(table.rows.len());
    for (line, rec) in table.rows {
        let parsed = (|| {
            let stock_id = rec[0].trim().to_string();
            if !crate::corpus::is_valid_stock_code(&stock_id) {
                return Err(format!("invalid stock id {stock_id:?}"));
            }
            let prices = Ohlcv {
                open: parse_f64(&rec[2], "open")?,
                high: parse_f64(&rec[3], "high")?,
                low: parse_f64(&rec[4], "low")?,
                close: parse_f64(&rec[5], "close")?,
                volume: parse_f64(&rec[6], "volume")?,
            };
            prices.validate()?;
            Ok(DailyBar {
                stock_id,
                date: parse_date(&rec[1], "date")?,
                prices,
            })
        })();
        match parsed {
            Ok(b) => bars.push((line, b)),
            Err(msg) => errors.push(RowError::new(line, msg)),
        }
    }
    let (lines, bars): (Vec<u64>, Vec<DailyBar>) = bars.into_iter().unzip();
    errors.sort_by_key(|e| e.line);
    Ok((bars, lines, errors))
}

pub fn parse_indices(bytes: &[u8]) -> Result<(Vec<IndexSeries>, Vec<RowError>)> {
    let text = decode_utf8(bytes)?;
    let table = read_table(text, "indices", &INDEX_HEADER)?;
    let mut errors = table.errors;
    let mut series: BTreeMap<String, IndexSeries> = BTreeMap::new();
    for (line, rec) in table.rows {
        let parsed = (|| {
            let id = rec[0].trim().to_string();
            if id.is_empty() {
                return Err("empty index_id".to_string());
            }
            let date = parse_date(&rec[1], "date")?;
            let level = parse_f64(&rec[2], "level")?;
            if level <= 0.0 {
                return Err(format!("level {level} must be positive"));
            }
            Ok((id, date, level))
        })();
        match parsed {
            Ok((id, date, level)) => {
                let s = series.entry(id.clone()).or_insert_with(|| IndexSeries::new(id));
                if s.observations.insert(date, level).is_some() {
                    errors.push(RowError::new(line, format!("duplicate observation on {date}")));
                }
            }
            Err(msg) => errors.push(RowError::new(line, msg)),
        }
    }
    errors.sort_by_key(|e| e.line);
    Ok((series.into_values().collect(), errors))
}

pub fn parse_industry(bytes: &[u8]) -> Result<(IndustryMap, Vec<RowError>)> {
    let text = decode_utf8(bytes)?;
    let table = read_table(text, "industry", &INDUSTRY_HEADER)?;
    let mut errors = table.errors;
    let mut map = IndustryMap::default();
    for (line, rec) in table.rows {
        let stock = rec[0].trim();
        if !crate::corpus::is_valid_stock_code(stock) {
            errors.push(RowError::new(line, format!("invalid stock id {stock:?}")));
            continue;
        }
        let entry = IndustryEntry {
            index_id: rec[1].trim().to_string(),
            sector: rec[2].trim().to_string(),
        };
        if entry.index_id.is_empty() || entry.sector.is_empty() {
            errors.push(RowError::new(line, "empty industry index or sector"));
            continue;
        }
        if map.insert(stock, entry).is_some() {
            errors.push(RowError::new(line, format!("duplicate mapping for {stock}")));
        }
    }
    Ok((map, errors))
}

pub fn parse_calendar(bytes: &[u8]) -> Result<TradingCalendar> {
    let text = decode_utf8(bytes)?;
    let table = read_table(text, "calendar", &CALENDAR_HEADER)?;
    if let Some(e) = table.errors.first() {
        return Err(Error::Parse(format!("calendar {e}")));
    }
    let mut dates = Vec::with_capacity(table.rows.len());
    for (line, rec) in table.rows {
        dates.push(parse_date(&rec[0], "date").map_err(|m| Error::Parse(format!("calendar line {line}: {m}")))?);
    }
    Ok(TradingCalendar::new(dates))
}

/// Raw bytes of the market files.
#[derive(Debug, Clone, Copy)]
pub struct MarketSources<'a> {
    pub bars: &'a [u8],
    pub indices: &'a [u8],
    pub industry: &'a [u8],
    /// `None` infers the calendar from the bar dates.
    pub calendar: Option<&'a [u8]>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MarketLoadReport {
    pub bars: usize,
    pub bar_rejects: Vec<RowError>,
    pub index_observations: usize,
    pub index_rejects: Vec<RowError>,
    pub industry_entries: usize,
    pub industry_rejects: Vec<RowError>,
    pub calendar_days: usize,
}

pub fn load_market(sources: MarketSources<'_>, max_reject_rate: f64) -> Result<(MarketData, MarketLoadReport)> {
    let (bars, lines, mut bar_rejects) = parse_bars_with_lines(sources.bars)?;
    let (indices, index_rejects) = parse_indices(sources.indices)?;
    let (industry, industry_rejects) = parse_industry(sources.industry)?;
    let calendar = match sources.calendar {
        Some(bytes) => parse_calendar(bytes)?,
        None => TradingCalendar::new(bars.iter().map(|b| b.date).collect()),
    };
    if calendar.is_empty() {
        return Err(Error::Coverage("any date: the trading calendar is empty".into()));
    }

    let n_bars = bars.len();
    let (data, problems) = MarketData::new(calendar, bars, indices, industry);
    for (pos, msg) in problems {
        bar_rejects.push(RowError::new(lines.get(pos).copied().unwrap_or(0), msg));
    }
    bar_rejects.sort_by_key(|e| e.line);

    let n_index: usize = data.indices.values().map(|s| s.observations.len()).sum();
    check_reject_rate("bars", bar_rejects.len(), n_bars + bar_rejects.len(), max_reject_rate)?;
    check_reject_rate(
        "indices",
        index_rejects.len(),
        n_index + index_rejects.len(),
        max_reject_rate,
    )?;
    check_reject_rate(
        "industry",
        industry_rejects.len(),
        data.industry.len() + industry_rejects.len(),
        max_reject_rate,
    )?;

    let report = MarketLoadReport {
        bars: n_bars,
        bar_rejects,
        index_observations: n_index,
        index_rejects,
        industry_entries: data.industry.len(),
        industry_rejects,
        calendar_days: data.calendar.len(),
    };
    Ok((data, report))
}

pub fn write_bars<W: Write>(bars: &[DailyBar], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(BARS_HEADER).map_err(csv_err)?;
    for b in bars {
        let p = &b.prices;
        w.write_record([
            b.stock_id.clone(),
            b.date.to_string(),
            p.open.to_string(),
            p.high.to_string(),
            p.low.to_string(),
            p.close.to_string(),
            p.volume.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_indices<W: Write>(series: &[IndexSeries], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(INDEX_HEADER).map_err(csv_err)?;
    for s in series {
        for (d, l) in &s.observations {
            w.write_record([s.index_id.clone(), d.to_string(), l.to_string()])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_industry<W: Write>(map: &IndustryMap, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(INDUSTRY_HEADER).map_err(csv_err)?;
    for (stock, e) in map.iter() {
        w.write_record([stock.as_str(), e.index_id.as_str(), e.sector.as_str()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_calendar<W: Write>(calendar: &TradingCalendar, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(CALENDAR_HEADER).map_err(csv_err)?;
    for d in calendar.dates() {
        w.write_record([d.to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Stocks present in the bar store.
pub fn stock_set(data: &MarketData) -> HashSet<String> {
    data.stocks().map(str::to_string).collect()
}
