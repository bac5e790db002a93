//! Synthetic corpora, market data and scores with planted regression effects.
//!
//! Outcomes on the trading day after each release are generated directly
//! from the three linear equations, with regressors measured from the
//! already generated data exactly as the panel builder measures them. All
//! other days draw baseline values. Bars are then constructed so that the
//! Garman–Klass range, excess return and volume change hit their targets.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{Datelike, Days, NaiveDate};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::corpus::{write_corpus, CorpusFormat, ReportRecord, DEFAULT_DICTIONARY_TXT};
use crate::econometrics::{build_panel, PanelBuild, PanelOptions, COUNT_SCALE, RANGE_SCALE, REGRESSORS, SECTORS};
use crate::error::{Error, Result};
use crate::market::{
    write_bars, write_calendar, write_indices, write_industry, DailyBar, IndexSeries, IndustryEntry, IndustryMap,
    MarketData, Ohlcv, TradingCalendar, CSI500, SSE, SZSE, VIX,
};
use crate::metrics::{garman_klass, recommendation_counts, CitationIndex, VOLUME_LOOKBACK};
use crate::sentiment::{write_scores, ScoreTriple, SentimentScore, DEFAULT_LEXICON_CSV};

/// Trading days generated before the first report (covers the 60-day
/// volume window and the 90-calendar-day data margin).
pub const WARMUP_DAYS: usize = 70;
/// Trading days generated after the last report so every report has an outcome day.
pub const TAIL_DAYS: usize = 2;
pub const FIRST_DAY: (i32, u32, u32) = (2021, 1, 4);

/// Coefficients of one equation: the constant, then [`REGRESSORS`] in order.
pub type Equation = [f64; 12];

pub const RANGE_PLANT: Equation = [
    0.022, 0.065, 0.044, 0.291, 0.002, -0.004, 0.006, -0.002, 0.002, 0.0007, 0.0033, -0.0037,
];
pub const RETEX_PLANT: Equation = [
    -0.018, 0.064, -0.065, 0.844, 0.064, -0.108, -0.015, 0.149, -0.039, 0.0136, 0.028, -0.113,
];
pub const DVOL_PLANT: Equation = [
    0.109, 0.177, 0.036, -0.464, 0.539, -0.016, 0.007, 0.005, 0.009, -0.0012, -0.0033, 0.0025,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plants {
    pub range: Equation,
    pub retex: Equation,
    pub dvol: Equation,
}

impl Default for Plants {
    fn default() -> Self {
        Self {
            range: RANGE_PLANT,
            retex: RETEX_PLANT,
            dvol: DVOL_PLANT,
        }
    }
}

impl Plants {
    /// Same plants with the `pos_lag` and `neg_lag` effects removed.
    pub fn without_sentiment(mut self) -> Self {
        for eq in [&mut self.range, &mut self.retex, &mut self.dvol] {
            eq[1] = 0.0;
            eq[2] = 0.0;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    /// Half-width of the uniform noise on range (×100 units).
    pub range_half_width: f64,
    pub retex_sd: f64,
    pub dvol_sd: f64,
}

impl Noise {
    pub const ZERO: Noise = Noise {
        range_half_width: 0.0,
        retex_sd: 0.0,
        dvol_sd: 0.0,
    };

    pub fn scaled(self, k: f64) -> Noise {
        Noise {
            range_half_width: self.range_half_width * k,
            retex_sd: self.retex_sd * k,
            dvol_sd: self.dvol_sd * k,
        }
    }
}

impl Default for Noise {
    fn default() -> Self {
        Self {
            range_half_width: 0.015,
            retex_sd: 0.2,
            dvol_sd: 0.35,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_stocks: usize,
    /// Trading days with reports in the test range.
    pub n_days: usize,
    /// Trading days with reports in the training range, before the test range.
    pub n_train_days: usize,
    pub reports_per_day: usize,
    /// Share of reports citing two stocks instead of one.
    pub multi_stock_share: f64,
    /// Dirichlet concentration of the score triples.
    pub score_concentration: f64,
    pub plants: Plants,
    pub noise: Noise,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            n_stocks: 200,
            n_days: 250,
            n_train_days: 40,
            reports_per_day: 40,
            multi_stock_share: 0.2,
            score_concentration: 2.0,
            plants: Plants::default(),
            noise: Noise::default(),
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_stocks == 0 || self.n_days == 0 || self.reports_per_day == 0 {
            return Err(Error::Argument("synthetic counts must be positive".into()));
        }
        // worst case every report cites two stocks
        if 2 * self.reports_per_day > self.n_stocks {
            return Err(Error::Argument(format!(
                "{} reports per day need at least {} stocks",
                self.reports_per_day,
                2 * self.reports_per_day
            )));
        }
        let n = self.noise;
        if [n.range_half_width, n.retex_sd, n.dvol_sd]
            .iter()
            .any(|v| !(v.is_finite() && *v >= 0.0))
        {
            return Err(Error::Argument("noise scales must be finite and non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.multi_stock_share) {
            return Err(Error::Argument("multi_stock_share must lie in [0, 1]".into()));
        }
        if !(self.score_concentration.is_finite() && self.score_concentration > 0.0) {
            return Err(Error::Argument("score_concentration must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub spec: SynthSpec,
    /// Names matching the coefficient arrays.
    pub regressors: Vec<String>,
    pub train_range: (NaiveDate, NaiveDate),
    pub test_range: (NaiveDate, NaiveDate),
    pub n_reports: usize,
    /// Stock-days carrying a planted outcome, train and test ranges together.
    pub n_outcome_rows: usize,
    /// Outcome ranges that came out negative and were floored.
    pub clamped_ranges: usize,
}

#[derive(Debug, Clone)]
pub struct SynthData {
    pub calendar: TradingCalendar,
    pub records: Vec<ReportRecord>,
    pub scores: Vec<SentimentScore>,
    pub bars: Vec<DailyBar>,
    pub indices: Vec<IndexSeries>,
    pub industry: IndustryMap,
    pub truth: GroundTruth,
}

pub const SYNTH_FILES: [&str; 9] = [
    "corpus.csv",
    "bars.csv",
    "indices.csv",
    "industry.csv",
    "calendar.csv",
    "scores.csv",
    "lexicon.csv",
    "dictionary.txt",
    "ground_truth.json",
];

const RANGE_FLOOR: f64 = 1e-6;
const BASELINE_RANGE: (f64, f64) = (0.02, 0.10);
const BASELINE_RETEX_SD: f64 = 0.02;
const BASELINE_DVOL_SD: f64 = 0.3;
const RETEX_REVERSION: f64 = 0.1;
const INDEX_SD: f64 = 0.01;
const VIX_MEAN: f64 = 20.0;
const VIX_PERSISTENCE: f64 = 0.9;
const VIX_SD: f64 = 1.0;
const FILLER_WORDS: [&str; 10] = [
    "公司",
    "业绩",
    "收入",
    "利润",
    "行业",
    "市场",
    "需求",
    "产能",
    "订单",
    "毛利率",
];
const RISK_SHARE: f64 = 0.3;
/// Sector assigned to stocks outside the named groups.
const UNNAMED_SECTOR: &str = "Software";

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn weekdays(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut d = start;
    while out.len() < n {
        if d.weekday().number_from_monday() <= 5 {
            out.push(d);
        }
        d = d + Days::new(1);
    }
    out
}

fn stock_code(i: usize) -> String {
    if i.is_multiple_of(2) {
        format!("{:06}.SH", 600_000 + i / 2)
    } else {
        format!("{:06}.SZ", 1 + i / 2)
    }
}

fn sector_of(i: usize) -> (String, String) {
    let k = i % (SECTORS.len() + 1);
    let name = SECTORS.get(k).copied().unwrap_or(UNNAMED_SECTOR);
    (format!("SEC{:02}", k + 1), name.to_string())
}

fn draw_score(rng: &mut ChaCha8Rng, alpha: f64) -> ScoreTriple {
    let g = Gamma::new(alpha, 1.0).expect("positive shape");
    let a: f64 = g.sample(rng);
    let b: f64 = g.sample(rng);
    let c: f64 = g.sample(rng);
    let s = a + b + c;
    let pos = a / s;
    let neg = c / s;
    ScoreTriple {
        pos,
        neu: (1.0 - pos - neg).max(0.0),
        neg,
    }
}

fn lexicon_words() -> [Vec<&'static str>; 3] {
    let mut classes: [Vec<&'static str>; 3] = Default::default();
    for line in DEFAULT_LEXICON_CSV.lines().skip(1) {
        if let Some((w, c)) = line.split_once(',') {
            let k = match c.trim() {
                "positive" => 0,
                "neutral" => 1,
                _ => 2,
            };
            classes[k].push(w);
        }
    }
    classes
}

fn draw_abstract(rng: &mut ChaCha8Rng, score: &ScoreTriple, words: &[Vec<&'static str>; 3]) -> String {
    let n = 3 + Poisson::new(6.0).expect("positive rate").sample(rng) as usize;
    let mut parts = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let u: f64 = rng.random();
        let class = if u < score.pos {
            0
        } else if u < score.pos + score.neu {
            1
        } else {
            2
        };
        let pool = &words[class];
        parts.push(format!(
            "{}{}",
            FILLER_WORDS[rng.random_range(0..FILLER_WORDS.len())],
            pool[rng.random_range(0..pool.len())]
        ));
    }
    let mut text = parts.join("，");
    text.push('。');
    if rng.random_bool(RISK_SHARE) {
        let neg = &words[2];
        text.push_str("风险提示：");
        text.push_str(neg[rng.random_range(0..neg.len())]);
        text.push('。');
    }
    text
}

fn dot(eq: &Equation, x: &[f64; 11]) -> f64 {
    eq[0] + eq[1..].iter().zip(x).map(|(b, v)| b * v).sum::<f64>()
}

/// Per-stock state while walking forward through the calendar.
#[derive(Clone)]
struct StockPath {
    bars: Vec<Ohlcv>,
    /// Cumulative excess log return, pulled back on baseline days.
    drift: f64,
}

/// Builds the bar for a day given its targets. `range` is in natural units.
fn make_bar(rng: &mut ChaCha8Rng, prev_close: f64, log_ret: f64, range: f64, volume: f64) -> Ohlcv {
    let close = prev_close * log_ret.exp();
    let bound = 0.5 * (range / 0.109).sqrt();
    let c: f64 = if bound > 0.0 {
        rng.random_range(-bound..=bound)
    } else {
        0.0
    };
    // GK = 0.109 c^2 + 2.006 (x^2 + |c| x) with u = max(0,c)+x, d = min(0,c)-x
    let rest = (range - 0.109 * c * c) / 2.006;
    let x = 0.5 * (-c.abs() + (c * c + 4.0 * rest).sqrt());
    let open = close * (-c).exp();
    let high = open * (c.max(0.0) + x).exp();
    let low = open * (c.min(0.0) - x).exp();
    Ohlcv {
        open,
        high: high.max(open).max(close),
        low: low.min(open).min(close),
        close,
        volume,
    }
}

pub fn generate(spec: &SynthSpec) -> Result<SynthData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (y, m, d) = FIRST_DAY;
    let start = NaiveDate::from_ymd_opt(y, m, d).expect("valid start date");
    let report_days = spec.n_train_days + spec.n_days;
    let n_cal = WARMUP_DAYS + report_days + TAIL_DAYS;
    let dates = weekdays(start, n_cal);
    let calendar = TradingCalendar::new(dates.clone());

    // index levels
    let mut levels: Vec<(String, Vec<f64>)> = Vec::new();
    for (id, start_level) in [(SSE, 3000.0), (SZSE, 10000.0), (CSI500, 6000.0)] {
        let mut v = vec![start_level];
        for _ in 1..n_cal {
            let last = *v.last().unwrap();
            v.push(last * (INDEX_SD * normal(&mut rng)).exp());
        }
        levels.push((id.to_string(), v));
    }
    let mut vix = vec![VIX_MEAN];
    for _ in 1..n_cal {
        let last = *vix.last().unwrap();
        vix.push((VIX_MEAN + VIX_PERSISTENCE * (last - VIX_MEAN) + VIX_SD * normal(&mut rng)).max(9.0));
    }
    levels.push((VIX.to_string(), vix));
    let n_sectors = SECTORS.len() + 1;
    for k in 0..n_sectors.min(spec.n_stocks) {
        let mut v = vec![1000.0];
        for _ in 1..n_cal {
            let last = *v.last().unwrap();
            v.push(last * (INDEX_SD * normal(&mut rng)).exp());
        }
        levels.push((format!("SEC{:02}", k + 1), v));
    }
    let level_of: HashMap<String, usize> = levels.iter().enumerate().map(|(i, (id, _))| (id.clone(), i)).collect();
    let log_ret = |id: &str, day: usize| {
        let v = &levels[level_of[id]].1;
        (v[day] / v[day - 1]).ln()
    };

    let mut industry = IndustryMap::default();
    let codes: Vec<String> = (0..spec.n_stocks).map(stock_code).collect();
    let sector_index: Vec<String> = (0..spec.n_stocks).map(|i| sector_of(i).0).collect();
    for (i, code) in codes.iter().enumerate() {
        let (index_id, sector) = sector_of(i);
        industry.insert(code.clone(), IndustryEntry { index_id, sector });
    }

    // reports
    let words = lexicon_words();
    let mut records = Vec::new();
    let mut scores = Vec::new();
    let mut released: HashMap<(usize, usize), ScoreTriple> = HashMap::new();
    for day in WARMUP_DAYS..WARMUP_DAYS + report_days {
        let n_multi = (0..spec.reports_per_day)
            .filter(|_| rng.random_bool(spec.multi_stock_share))
            .count();
        let picked = sample(&mut rng, spec.n_stocks, spec.reports_per_day + n_multi).into_vec();
        let mut cursor = 0;
        for k in 0..spec.reports_per_day {
            let take = if k < n_multi { 2 } else { 1 };
            let stocks = &picked[cursor..cursor + take];
            cursor += take;
            let score = draw_score(&mut rng, spec.score_concentration);
            let report_id = format!("SR{:04}{:03}", day - WARMUP_DAYS, k);
            let first = &codes[stocks[0]];
            records.push(ReportRecord {
                report_id: report_id.clone(),
                title: format!("{first}公司业绩点评"),
                abstract_text: draw_abstract(&mut rng, &score, &words),
                stock_codes: stocks.iter().map(|&s| codes[s].clone()).collect(),
                release_date: dates[day],
            });
            scores.push(SentimentScore { report_id, score });
            for &s in stocks {
                released.insert((s, day), score);
            }
        }
    }
    let citations = CitationIndex::from_records(&records);

    // bars, walking forward one day at a time
    let mut paths: Vec<StockPath> = (0..spec.n_stocks)
        .map(|_| StockPath {
            bars: Vec::with_capacity(n_cal),
            drift: 0.0,
        })
        .collect();
    let mut clamped = 0;
    let mut n_outcome_rows = 0;
    let (lo, hi) = BASELINE_RANGE;
    for day in 0..n_cal {
        for s in 0..spec.n_stocks {
            let path = &paths[s];
            let ind_id = &sector_index[s];
            let (range100, retex, dvol) = match day.checked_sub(1).and_then(|r| released.get(&(s, r)).map(|sc| (r, sc)))
            {
                Some((r, score)) => {
                    n_outcome_rows += 1;
                    let b = &path.bars;
                    let lag_range = garman_klass(b[r].open, b[r].high, b[r].low, b[r].close)? * RANGE_SCALE;
                    let lag_retex = (b[r].close / b[r - 1].close).ln() - log_ret(ind_id, r);
                    let mut sum = 0.0;
                    for bar in &b[r - VOLUME_LOOKBACK..r] {
                        sum += bar.volume;
                    }
                    let lag_dvol = (b[r].volume / (sum / VOLUME_LOOKBACK as f64)).ln();
                    let (num7, num90) = recommendation_counts(&citations, &codes[s], dates[r]);
                    let vix = &levels[level_of[VIX]].1;
                    let x = [
                        score.pos,
                        score.neg,
                        lag_range,
                        lag_dvol,
                        lag_retex,
                        log_ret(SZSE, r),
                        log_ret(SSE, r),
                        log_ret(CSI500, r),
                        vix[r] - vix[r - 1],
                        num90 as f64 / COUNT_SCALE,
                        num7 as f64 / COUNT_SCALE,
                    ];
                    let n = spec.noise;
                    let mut range = dot(&spec.plants.range, &x);
                    if n.range_half_width > 0.0 {
                        range += rng.random_range(-n.range_half_width..=n.range_half_width);
                    }
                    if range <= 0.0 {
                        clamped += 1;
                        range = RANGE_FLOOR;
                    }
                    let retex = dot(&spec.plants.retex, &x) + n.retex_sd * normal(&mut rng);
                    let dvol = dot(&spec.plants.dvol, &x) + n.dvol_sd * normal(&mut rng);
                    (range, retex, dvol)
                }
                None => (
                    rng.random_range(lo..hi),
                    -RETEX_REVERSION * path.drift + BASELINE_RETEX_SD * normal(&mut rng),
                    BASELINE_DVOL_SD * normal(&mut rng) - 0.5 * BASELINE_DVOL_SD * BASELINE_DVOL_SD,
                ),
            };
            let volume = if day < VOLUME_LOOKBACK {
                1e6 * (BASELINE_DVOL_SD * normal(&mut rng)).exp()
            } else {
                let mut sum = 0.0;
                for bar in &path.bars[day - VOLUME_LOOKBACK..day] {
                    sum += bar.volume;
                }
                dvol.exp() * (sum / VOLUME_LOOKBACK as f64)
            };
            let bar = if day == 0 {
                let close = rng.random_range(5.0..50.0);
                make_bar(&mut rng, close, 0.0, range100 / RANGE_SCALE, volume)
            } else {
                let prev = path.bars[day - 1].close;
                make_bar(
                    &mut rng,
                    prev,
                    retex + log_ret(ind_id, day),
                    range100 / RANGE_SCALE,
                    volume,
                )
            };
            let path = &mut paths[s];
            if day > 0 {
                path.drift += retex;
            }
            path.bars.push(bar);
        }
    }

    let bars: Vec<DailyBar> = dates
        .iter()
        .enumerate()
        .flat_map(|(day, date)| {
            let paths = &paths;
            let codes = &codes;
            (0..spec.n_stocks).map(move |s| DailyBar {
                stock_id: codes[s].clone(),
                date: *date,
                prices: paths[s].bars[day],
            })
        })
        .collect();
    let indices: Vec<IndexSeries> = levels
        .into_iter()
        .map(|(id, v)| {
            let mut series = IndexSeries::new(id);
            series.observations = dates.iter().copied().zip(v).collect();
            series
        })
        .collect();

    let train_range = (dates[WARMUP_DAYS], dates[WARMUP_DAYS + spec.n_train_days.max(1) - 1]);
    let test_range = (dates[WARMUP_DAYS + spec.n_train_days], dates[n_cal - 1]);
    let truth = GroundTruth {
        spec: spec.clone(),
        regressors: std::iter::once("constant".to_string())
            .chain(REGRESSORS.iter().map(|s| s.to_string()))
            .collect(),
        train_range,
        test_range,
        n_reports: records.len(),
        n_outcome_rows,
        clamped_ranges: clamped,
    };
    Ok(SynthData {
        calendar,
        records,
        scores,
        bars,
        indices,
        industry,
        truth,
    })
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

impl SynthData {
    pub fn market(&self) -> MarketData {
        MarketData::new(
            self.calendar.clone(),
            self.bars.clone(),
            self.indices.clone(),
            self.industry.clone(),
        )
        .0
    }

    /// Panel of the test-range reports, built in memory without the file round trip.
    pub fn test_panel(&self) -> Result<PanelBuild> {
        let (from, to) = self.truth.test_range;
        let scores: HashMap<String, ScoreTriple> = self.scores.iter().map(|s| (s.report_id.clone(), s.score)).collect();
        build_panel(
            &self.records_between(from, to),
            &scores,
            &self.market(),
            &CitationIndex::from_records(&self.records),
            PanelOptions::default(),
        )
    }

    /// Reports released in `[from, to]`.
    pub fn records_between(&self, from: NaiveDate, to: NaiveDate) -> Vec<ReportRecord> {
        self.records
            .iter()
            .filter(|r| r.release_date >= from && r.release_date <= to)
            .cloned()
            .collect()
    }

    /// Writes every file of [`SYNTH_FILES`] into `dir`, which must exist.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        write_corpus(&self.records, CorpusFormat::Delimited, create(dir, "corpus.csv")?)?;
        write_bars(&self.bars, create(dir, "bars.csv")?)?;
        write_indices(&self.indices, create(dir, "indices.csv")?)?;
        write_industry(&self.industry, create(dir, "industry.csv")?)?;
        write_calendar(&self.calendar, create(dir, "calendar.csv")?)?;
        write_scores(&self.scores, create(dir, "scores.csv")?)?;
        create(dir, "lexicon.csv")?.write_all(DEFAULT_LEXICON_CSV.as_bytes())?;
        create(dir, "dictionary.txt")?.write_all(DEFAULT_DICTIONARY_TXT.as_bytes())?;
        let mut gt = create(dir, "ground_truth.json")?;
        serde_json::to_writer_pretty(&mut gt, &self.truth).map_err(|e| Error::Parse(e.to_string()))?;
        gt.write_all(b"\n")?;
        gt.flush()?;
        Ok(())
    }
}
