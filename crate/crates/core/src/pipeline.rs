//! The command stages behind the CLI: ingest, label, score, analyze, synth.
//!
//! Every stage reads its inputs from the paths in a [`RunConfig`] and writes
//! into the configured output directory. Outputs depend only on the inputs
//! and the configuration.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    clean_report, default_dictionary, parse_corpus, parse_dictionary, write_rejects, CleanedReport, Corpus,
    CorpusFormat, CorpusOptions, Dictionary, TextCleaner, DEFAULT_RISK_WARNINGS,
};
use crate::econometrics::{
    build_panel, majority_group_tests, run_industry_regressions, run_paper_regressions, write_panel, DropReason,
    GroupTest, PanelOptions, RegressionFit, SeType, SectorOutcome, SectorResult, TTestMode, DEFAULT_MIN_ROWS,
};
use crate::error::{Error, Result, RowError};
use crate::labeling::{assign_labels, write_labels, Label, PoolEntry, DEFAULT_LOWER_QUANTILE, DEFAULT_UPPER_QUANTILE};
use crate::market::{load_market, Align, MarketData, MarketLoadReport, MarketSources, VixMode};
use crate::metrics::{label_window_return, metric_row, write_metric_dump, CitationIndex, VOLUME_LOOKBACK};
use crate::report::{
    industry_table_csv, industry_table_tex, industry_table_text, mean_test_table_csv, mean_test_table_tex,
    mean_test_table_text, regression_table_csv, regression_table_tex, regression_table_text, StarPreset,
};
use crate::sentiment::{
    classify_majority, daily_average_sentiment, daily_sentiment_gnuplot, default_lexicon, lexicon_counts,
    lexicon_score, load_external_scores, parse_lexicon, write_daily_sentiment, write_scores, ScoreTriple,
    SentimentLexicon, SentimentScore,
};
use crate::synthkit::{generate, GroundTruth, SynthSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scorer {
    Lexicon,
    #[default]
    External,
}

/// Run configuration, read from TOML. Relative paths resolve against the
/// directory holding the configuration file. Dates are `YYYY-MM-DD` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub bars: Option<PathBuf>,
    pub indices: Option<PathBuf>,
    pub industry: Option<PathBuf>,
    pub calendar: Option<PathBuf>,
    pub scores: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub risk_warnings: Option<Vec<String>>,
    pub train_start: Option<NaiveDate>,
    pub train_end: Option<NaiveDate>,
    pub test_start: Option<NaiveDate>,
    pub test_end: Option<NaiveDate>,
    pub scorer: Scorer,
    pub stars: StarPreset,
    pub se: SeType,
    pub ttest: TTestMode,
    pub vix: VixMode,
    pub min_rows: usize,
    pub max_reject_rate: f64,
    pub temperature: f64,
    pub upper_quantile: f64,
    pub lower_quantile: f64,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            corpus: None,
            bars: None,
            indices: None,
            industry: None,
            calendar: None,
            scores: None,
            lexicon: None,
            dictionary: None,
            risk_warnings: None,
            train_start: None,
            train_end: None,
            test_start: None,
            test_end: None,
            scorer: Scorer::default(),
            stars: StarPreset::default(),
            se: SeType::default(),
            ttest: TTestMode::default(),
            vix: VixMode::default(),
            min_rows: DEFAULT_MIN_ROWS,
            max_reject_rate: 0.05,
            temperature: 1.0,
            upper_quantile: DEFAULT_UPPER_QUANTILE,
            lower_quantile: DEFAULT_LOWER_QUANTILE,
            out: PathBuf::from("out"),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("configuration: {}", e.message())))
    }

    /// Reads the file and resolves its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(v) = p {
                if v.is_relative() {
                    *v = base.join(&*v);
                }
            }
        };
        for p in [
            &mut self.corpus,
            &mut self.bars,
            &mut self.indices,
            &mut self.industry,
            &mut self.calendar,
            &mut self.scores,
            &mut self.lexicon,
            &mut self.dictionary,
        ] {
            fix(p);
        }
        if self.out.is_relative() {
            self.out = base.join(&self.out);
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Range ordering and numeric settings.
    pub fn validate(&self) -> Result<()> {
        for (name, range) in [("train", self.train_range_opt()), ("test", self.test_range_opt())] {
            if let Some((a, b)) = range {
                if a > b {
                    return Err(Error::Config(format!("{name} range starts {a} after it ends {b}")));
                }
            }
        }
        if let (Some((_, train_end)), Some((test_start, _))) = (self.train_range_opt(), self.test_range_opt()) {
            if train_end >= test_start {
                return Err(Error::Config(format!(
                    "train range must end before the test range starts (train ends {train_end}, test starts {test_start})"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.max_reject_rate) {
            return Err(Error::Config(format!(
                "max_reject_rate {} outside [0, 1]",
                self.max_reject_rate
            )));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::Config(format!(
                "temperature {} must be positive",
                self.temperature
            )));
        }
        if self.upper_quantile < 0.0 || self.lower_quantile < 0.0 || self.upper_quantile + self.lower_quantile >= 1.0 {
            return Err(Error::Config(
                "label quantiles must be non-negative and sum below 1".into(),
            ));
        }
        if self.min_rows == 0 {
            return Err(Error::Config("min_rows must be positive".into()));
        }
        Ok(())
    }

    fn train_range_opt(&self) -> Option<(NaiveDate, NaiveDate)> {
        self.train_start.zip(self.train_end)
    }

    fn test_range_opt(&self) -> Option<(NaiveDate, NaiveDate)> {
        self.test_start.zip(self.test_end)
    }

    fn train_range(&self) -> Result<(NaiveDate, NaiveDate)> {
        self.train_range_opt()
            .ok_or_else(|| Error::Config("train_start and train_end are required".into()))
    }

    fn test_range(&self) -> Result<(NaiveDate, NaiveDate)> {
        self.test_range_opt()
            .ok_or_else(|| Error::Config("test_start and test_end are required".into()))
    }
}

fn required<'a>(p: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::Config(format!("`{key}` path is not configured")))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    write_text(dir, name, &text)
}

fn output_dir(cfg: &RunConfig) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out)?;
    Ok(cfg.out.clone())
}

pub fn load_corpus(cfg: &RunConfig) -> Result<Corpus> {
    let path = required(&cfg.corpus, "corpus")?;
    let opts = CorpusOptions {
        date_range: None,
        max_reject_rate: cfg.max_reject_rate,
    };
    parse_corpus(&read(path)?, CorpusFormat::from_path(path), &opts)
}

pub fn load_market_data(cfg: &RunConfig) -> Result<(MarketData, MarketLoadReport)> {
    let bars = read(required(&cfg.bars, "bars")?)?;
    let indices = read(required(&cfg.indices, "indices")?)?;
    let industry = read(required(&cfg.industry, "industry")?)?;
    let calendar = cfg.calendar.as_deref().map(read).transpose()?;
    load_market(
        MarketSources {
            bars: &bars,
            indices: &indices,
            industry: &industry,
            calendar: calendar.as_deref(),
        },
        cfg.max_reject_rate,
    )
}

pub fn load_lexicon(cfg: &RunConfig) -> Result<SentimentLexicon> {
    match &cfg.lexicon {
        Some(p) => parse_lexicon(&read(p)?),
        None => Ok(default_lexicon()),
    }
}

pub fn load_dictionary(cfg: &RunConfig) -> Result<Dictionary> {
    match &cfg.dictionary {
        Some(p) => parse_dictionary(&read(p)?),
        None => Ok(default_dictionary()),
    }
}

pub fn text_cleaner(cfg: &RunConfig) -> TextCleaner {
    let patterns = cfg
        .risk_warnings
        .clone()
        .unwrap_or_else(|| DEFAULT_RISK_WARNINGS.iter().map(|s| s.to_string()).collect());
    TextCleaner::new(patterns)
}

fn cleaned_reports(cfg: &RunConfig, corpus: &Corpus) -> Result<Vec<CleanedReport>> {
    let cleaner = text_cleaner(cfg);
    let dict = load_dictionary(cfg)?;
    Ok(corpus
        .records
        .iter()
        .map(|r| clean_report(r, &cleaner, &dict))
        .collect())
}

/// Scores for every report: the external file, or the lexicon scorer on the
/// cleaned text.
pub fn load_scores(cfg: &RunConfig, corpus: &Corpus) -> Result<(Vec<SentimentScore>, Vec<RowError>)> {
    match cfg.scorer {
        Scorer::External => {
            let path = cfg
                .scores
                .as_deref()
                .ok_or_else(|| Error::Config("scorer = external needs a `scores` path".into()))?;
            let known: HashSet<String> = corpus.records.iter().map(|r| r.report_id.clone()).collect();
            load_external_scores(&read(path)?, Some(&known), cfg.max_reject_rate)
        }
        Scorer::Lexicon => {
            let lexicon = load_lexicon(cfg)?;
            let scores = cleaned_reports(cfg, corpus)?
                .iter()
                .map(|c| {
                    Ok(SentimentScore {
                        report_id: c.report_id.clone(),
                        score: lexicon_score(&c.tokens, &lexicon, cfg.temperature)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((scores, Vec::new()))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceSummary {
    pub accepted: usize,
    pub rejected: usize,
    pub rejects: Vec<RowError>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestReport {
    pub corpus: SourceSummary,
    pub market: MarketLoadReport,
    pub scores: Option<SourceSummary>,
    pub metric_rows: usize,
}

fn summary<T>(accepted: &[T], rejects: &[RowError]) -> SourceSummary {
    SourceSummary {
        accepted: accepted.len(),
        rejected: rejects.len(),
        rejects: rejects.to_vec(),
    }
}

/// Validates every input and writes the cleaned corpus, the per-report
/// stock-day metrics and an ingest report.
pub fn cmd_ingest(cfg: &RunConfig) -> Result<IngestReport> {
    cfg.validate()?;
    let corpus = load_corpus(cfg)?;
    let (market, market_report) = load_market_data(cfg)?;
    let scores = match (cfg.scorer, &cfg.scores) {
        (Scorer::External, Some(_)) => {
            let (s, rejects) = load_scores(cfg, &corpus)?;
            Some(summary(&s, &rejects))
        }
        _ => None,
    };
    let cleaned = cleaned_reports(cfg, &corpus)?;
    let citations = CitationIndex::from_records(&corpus.records);

    let mut seen = HashSet::new();
    let mut metrics = Vec::new();
    for r in &corpus.records {
        let Ok(day) = market.calendar().align(r.release_date, Align::SameOrNext) else {
            continue;
        };
        for code in &r.stock_codes {
            if seen.insert((code.clone(), day)) {
                if let Ok(row) = metric_row(&market, &citations, code, day) {
                    metrics.push(row);
                }
            }
        }
    }
    metrics.sort_by(|a, b| (a.date, &a.stock_id).cmp(&(b.date, &b.stock_id)));

    let dir = output_dir(cfg)?;
    let mut cleaned_out = create(&dir, "cleaned.jsonl")?;
    for c in &cleaned {
        serde_json::to_writer(&mut cleaned_out, c).map_err(|e| Error::Parse(e.to_string()))?;
        cleaned_out.write_all(b"\n")?;
    }
    cleaned_out.flush()?;
    write_rejects(&corpus.rejects, create(&dir, "corpus_rejects.csv")?)?;
    write_metric_dump(&metrics, create(&dir, "metrics.csv")?)?;

    let report = IngestReport {
        corpus: summary(&corpus.records, &corpus.rejects),
        market: market_report,
        scores,
        metric_rows: metrics.len(),
    };
    write_json(&dir, "ingest_report.json", &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelReport {
    pub train_range: (NaiveDate, NaiveDate),
    pub pool_size: usize,
    pub positive: usize,
    pub neutral: usize,
    pub negative: usize,
    pub drops: BTreeMap<String, usize>,
}

/// Labels every (report, stock) pair released in the train range.
pub fn cmd_label(cfg: &RunConfig) -> Result<LabelReport> {
    cfg.validate()?;
    let (from, to) = cfg.train_range()?;
    let corpus = load_corpus(cfg)?;
    let (market, _) = load_market_data(cfg)?;
    let mut pool = Vec::new();
    let mut drops: BTreeMap<String, usize> = BTreeMap::new();
    for r in corpus
        .records
        .iter()
        .filter(|r| r.release_date >= from && r.release_date <= to)
    {
        for code in &r.stock_codes {
            let ret = market
                .calendar()
                .align(r.release_date, Align::SameOrNext)
                .and_then(|t| label_window_return(&market, code, t));
            match ret {
                Ok(window_return) => pool.push(PoolEntry {
                    report_id: r.report_id.clone(),
                    stock_id: code.clone(),
                    window_return,
                }),
                Err(e) => *drops.entry(drop_name(&e)).or_default() += 1,
            }
        }
    }
    if pool.is_empty() {
        return Err(Error::EmptyPanel);
    }
    let labels = assign_labels(&pool, cfg.upper_quantile, cfg.lower_quantile)?;
    let dir = output_dir(cfg)?;
    write_labels(&labels, create(&dir, "labels.csv")?)?;
    let count = |l: Label| labels.iter().filter(|x| x.label == l).count();
    let report = LabelReport {
        train_range: (from, to),
        pool_size: labels.len(),
        positive: count(Label::Positive),
        neutral: count(Label::Neutral),
        negative: count(Label::Negative),
        drops,
    };
    write_json(&dir, "label_report.json", &report)?;
    Ok(report)
}

fn drop_name(e: &Error) -> String {
    match e {
        Error::Mapping(_) => DropReason::NoIndustryMapping,
        Error::OutOfRange { .. } => DropReason::OutsideCalendar,
        Error::Gap { .. } => DropReason::MissingObservation,
        Error::History { .. } => DropReason::InsufficientHistory,
        _ => DropReason::InvalidValue,
    }
    .as_str()
    .to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreReport {
    pub scorer: Scorer,
    pub scored: usize,
    pub rejected: usize,
    pub rejects: Vec<RowError>,
    pub majority_positive: usize,
    pub majority_neutral: usize,
    pub majority_negative: usize,
}

/// Writes the score file in use and the majority-count class of every report.
pub fn cmd_score(cfg: &RunConfig) -> Result<ScoreReport> {
    cfg.validate()?;
    let corpus = load_corpus(cfg)?;
    let (mut scores, rejects) = load_scores(cfg, &corpus)?;
    scores.sort_by(|a, b| a.report_id.cmp(&b.report_id));
    let lexicon = load_lexicon(cfg)?;
    let mut cleaned = cleaned_reports(cfg, &corpus)?;
    cleaned.sort_by(|a, b| a.report_id.cmp(&b.report_id));

    let dir = output_dir(cfg)?;
    write_scores(&scores, create(&dir, "scores.csv")?)?;
    let mut w = csv::WriterBuilder::new().from_writer(create(&dir, "majority.csv")?);
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record([
        "report_id",
        "positive_words",
        "neutral_words",
        "negative_words",
        "class",
    ])
    .map_err(csv_err)?;
    let mut counts = [0usize; 3];
    for c in &cleaned {
        let n = lexicon_counts(&c.tokens, &lexicon);
        let class = classify_majority(&c.tokens, &lexicon);
        counts[class as usize] += 1;
        w.write_record([
            c.report_id.clone(),
            n.positive.to_string(),
            n.neutral.to_string(),
            n.negative.to_string(),
            class.as_str().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    let report = ScoreReport {
        scorer: cfg.scorer,
        scored: scores.len(),
        rejected: rejects.len(),
        rejects,
        majority_positive: counts[0],
        majority_neutral: counts[1],
        majority_negative: counts[2],
    };
    write_json(&dir, "score_report.json", &report)?;
    Ok(report)
}

/// Earliest market date `cmd_analyze` may read: the test start minus 90
/// calendar days, then minus a further 60 trading days.
pub fn firewall_cutoff(market: &MarketData, test_start: NaiveDate) -> NaiveDate {
    let cal = market.calendar();
    let first = test_start - Days::new(crate::market::CALENDAR_MARGIN_DAYS);
    let idx = cal
        .dates()
        .partition_point(|d| *d < first)
        .saturating_sub(VOLUME_LOOKBACK);
    cal.date_at(idx).unwrap_or(first).min(first)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientExport {
    pub regressor: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub stars: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitExport {
    pub outcome: String,
    pub n_obs: usize,
    pub df_resid: usize,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub sigma: f64,
    pub se_type: SeType,
    pub coefficients: Vec<CoefficientExport>,
}

impl FitExport {
    pub fn new(fit: &RegressionFit, stars: StarPreset) -> Self {
        Self {
            outcome: fit.name.clone(),
            n_obs: fit.n_obs,
            df_resid: fit.df_resid,
            r_squared: fit.r_squared,
            adj_r_squared: fit.adj_r_squared,
            sigma: fit.sigma,
            se_type: fit.se_type,
            coefficients: (0..fit.regressors.len())
                .map(|j| CoefficientExport {
                    regressor: fit.regressors[j].clone(),
                    coefficient: fit.coefficients[j],
                    std_error: fit.std_errors[j],
                    t_stat: fit.t_stats[j],
                    p_value: fit.p_values[j],
                    stars: stars.stars(fit.p_values[j]).to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorExport {
    pub sector: String,
    pub n_rows: usize,
    pub skipped: Option<String>,
    pub fits: Vec<FitExport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitsFile {
    /// Version of this file layout.
    pub format_version: u32,
    pub pooled: Vec<FitExport>,
    pub industries: Vec<SectorExport>,
    pub mean_tests: Vec<GroupTest>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub test_range: (NaiveDate, NaiveDate),
    pub market_cutoff: NaiveDate,
    pub reports_in_test_range: usize,
    pub panel_rows: usize,
    pub drops: BTreeMap<String, usize>,
    pub skipped_sectors: Vec<String>,
    pub untestable_variables: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOutput {
    pub fits: [RegressionFit; 3],
    pub sectors: Vec<SectorResult>,
    pub mean_tests: Vec<GroupTest>,
    pub report: AnalyzeReport,
}

pub const FITS_FORMAT_VERSION: u32 = 1;

/// Pooled, industry and mean-difference results for the test-range reports.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<AnalyzeOutput> {
    cfg.validate()?;
    let (from, to) = cfg.test_range()?;
    let corpus = load_corpus(cfg)?;
    let (full_market, _) = load_market_data(cfg)?;
    let cutoff = firewall_cutoff(&full_market, from);
    let market = full_market.restricted_from(cutoff);
    drop(full_market);

    let test_records: Vec<_> = corpus
        .records
        .iter()
        .filter(|r| r.release_date >= from && r.release_date <= to)
        .cloned()
        .collect();
    let test_ids: HashSet<&str> = test_records.iter().map(|r| r.report_id.as_str()).collect();
    let (all_scores, _) = load_scores(cfg, &corpus)?;
    // scores of training-range reports never enter the regressions
    let scores: HashMap<String, ScoreTriple> = all_scores
        .into_iter()
        .filter(|s| test_ids.contains(s.report_id.as_str()))
        .map(|s| (s.report_id, s.score))
        .collect();

    let citations = CitationIndex::from_records(&corpus.records);
    let panel = build_panel(
        &test_records,
        &scores,
        &market,
        &citations,
        PanelOptions { vix: cfg.vix },
    )?;
    let fits = run_paper_regressions(&panel.rows, cfg.se)?;
    let sectors = run_industry_regressions(&panel.rows, market.industry(), cfg.min_rows, cfg.se);

    let lexicon = load_lexicon(cfg)?;
    let cleaner = text_cleaner(cfg);
    let dict = load_dictionary(cfg)?;
    let classes: HashMap<String, Label> = test_records
        .iter()
        .map(|r| {
            let c = clean_report(r, &cleaner, &dict);
            (c.report_id, classify_majority(&c.tokens, &lexicon))
        })
        .collect();
    let mean_tests = majority_group_tests(&panel.rows, &classes, cfg.ttest);

    let daily_rows: Vec<(NaiveDate, ScoreTriple)> = panel
        .rows
        .iter()
        .map(|r| {
            (
                r.release_date,
                ScoreTriple {
                    pos: r.pos_lag,
                    neu: scores[&r.report_id].neu,
                    neg: r.neg_lag,
                },
            )
        })
        .collect();
    let daily = daily_average_sentiment(&daily_rows);

    let dir = output_dir(cfg)?;
    write_panel(&panel.rows, create(&dir, "panel.csv")?)?;
    let stars = cfg.stars;
    write_text(
        &dir,
        "table3.txt",
        &regression_table_text("Regression results", &fits, stars),
    )?;
    write_text(&dir, "table3.csv", &regression_table_csv(&fits, stars))?;
    write_text(
        &dir,
        "table3.tex",
        &regression_table_tex("Regression Results", &fits, stars),
    )?;
    write_text(&dir, "table4.txt", &industry_table_text(&sectors, stars))?;
    write_text(&dir, "table4.csv", &industry_table_csv(&sectors, stars))?;
    write_text(&dir, "table4.tex", &industry_table_tex(&sectors, stars))?;
    write_text(&dir, "table5.txt", &mean_test_table_text(&mean_tests))?;
    write_text(&dir, "table5.csv", &mean_test_table_csv(&mean_tests))?;
    write_text(&dir, "table5.tex", &mean_test_table_tex(&mean_tests))?;
    write_daily_sentiment(&daily, create(&dir, "daily_sentiment.csv")?)?;
    write_text(
        &dir,
        "daily_sentiment.gp",
        &daily_sentiment_gnuplot("daily_sentiment.csv"),
    )?;

    let fits_file = FitsFile {
        format_version: FITS_FORMAT_VERSION,
        pooled: fits.iter().map(|f| FitExport::new(f, stars)).collect(),
        industries: sectors
            .iter()
            .map(|s| match &s.outcome {
                SectorOutcome::Fitted { fits } => SectorExport {
                    sector: s.sector.clone(),
                    n_rows: s.n_rows,
                    skipped: None,
                    fits: fits.iter().map(|f| FitExport::new(f, stars)).collect(),
                },
                SectorOutcome::Skipped { reason } => SectorExport {
                    sector: s.sector.clone(),
                    n_rows: s.n_rows,
                    skipped: Some(reason.clone()),
                    fits: Vec::new(),
                },
            })
            .collect(),
        mean_tests: mean_tests.clone(),
    };
    write_json(&dir, "fits.json", &fits_file)?;

    let report = AnalyzeReport {
        test_range: (from, to),
        market_cutoff: cutoff,
        reports_in_test_range: test_records.len(),
        panel_rows: panel.rows.len(),
        drops: panel.drops.iter().map(|(k, v)| (k.as_str().to_string(), *v)).collect(),
        skipped_sectors: sectors
            .iter()
            .filter(|s| matches!(s.outcome, SectorOutcome::Skipped { .. }))
            .map(|s| s.sector.clone())
            .collect(),
        untestable_variables: mean_tests
            .iter()
            .filter(|t| t.result.is_none())
            .map(|t| t.variable.clone())
            .collect(),
    };
    write_json(&dir, "analyze_report.json", &report)?;
    Ok(AnalyzeOutput {
        fits,
        sectors,
        mean_tests,
        report,
    })
}

/// Generates a synthetic dataset into `dir` together with a `config.toml`
/// that runs the other commands on it.
pub fn cmd_synth(spec: &SynthSpec, dir: &Path) -> Result<GroundTruth> {
    let data = generate(spec)?;
    fs::create_dir_all(dir)?;
    data.write_to(dir)?;
    let truth = data.truth;
    let cfg = RunConfig {
        corpus: Some("corpus.csv".into()),
        bars: Some("bars.csv".into()),
        indices: Some("indices.csv".into()),
        industry: Some("industry.csv".into()),
        calendar: Some("calendar.csv".into()),
        scores: Some("scores.csv".into()),
        lexicon: Some("lexicon.csv".into()),
        dictionary: Some("dictionary.txt".into()),
        train_start: Some(truth.train_range.0),
        train_end: Some(truth.train_range.1),
        test_start: Some(truth.test_range.0),
        test_end: Some(truth.test_range.1),
        seed: spec.seed,
        ..RunConfig::default()
    };
    write_text(dir, "config.toml", &cfg.to_toml()?)?;
    Ok(truth)
}
