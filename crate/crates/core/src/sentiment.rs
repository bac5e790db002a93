//! Report sentiment on the probability simplex `(pos, neu, neg)`.
//!
//! Scores come either from the built-in lexicon scorer or from an external
//! score file (`report_id,pos,neu,neg`), which is how a separately trained
//! classifier plugs in.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowError};
use crate::io::{check_reject_rate, csv_err, csv_writer, decode_utf8, parse_f64, read_table};
pub use crate::labeling::Label;

/// Tolerance on `pos + neu + neg = 1` for every score held in memory.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;
/// Tolerance accepted when reading score files; accepted rows are renormalized.
pub const INGEST_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub pos: f64,
    pub neu: f64,
    pub neg: f64,
}

impl ScoreTriple {
    pub const UNIFORM: ScoreTriple = ScoreTriple {
        pos: 1.0 / 3.0,
        neu: 1.0 / 3.0,
        neg: 1.0 / 3.0,
    };

    pub fn new(pos: f64, neu: f64, neg: f64) -> Result<Self> {
        let t = ScoreTriple { pos, neu, neg };
        t.check(SIMPLEX_TOLERANCE).map_err(Error::Domain)?;
        Ok(t)
    }

    pub fn sum(&self) -> f64 {
        self.pos + self.neu + self.neg
    }

    fn check(&self, tolerance: f64) -> std::result::Result<(), String> {
        for (name, v) in [("pos", self.pos), ("neu", self.neu), ("neg", self.neg)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} = {v} outside [0, 1]"));
            }
        }
        let sum = self.sum();
        if (sum - 1.0).abs() > tolerance {
            return Err(format!("components sum to {sum}"));
        }
        Ok(())
    }

    pub fn is_on_simplex(&self) -> bool {
        self.check(SIMPLEX_TOLERANCE).is_ok()
    }

    fn renormalized(self) -> Self {
        let s = self.sum();
        ScoreTriple {
            pos: self.pos / s,
            neu: self.neu / s,
            neg: self.neg / s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    pub report_id: String,
    #[serde(flatten)]
    pub score: ScoreTriple,
}

/// Word → sentiment class.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    words: HashMap<String, Label>,
}

impl SentimentLexicon {
    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Label)>,
        S: Into<String>,
    {
        let mut words = HashMap::new();
        for (w, class) in entries {
            let w = w.into();
            if words.insert(w.clone(), class).is_some() {
                return Err(Error::Argument(format!("lexicon lists {w:?} more than once")));
            }
        }
        Ok(Self { words })
    }

    pub fn class_of(&self, word: &str) -> Option<Label> {
        self.words.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Entries sorted by word.
    pub fn entries(&self) -> Vec<(&str, Label)> {
        let mut v: Vec<_> = self.words.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        v.sort();
        v
    }
}

pub const LEXICON_HEADER: [&str; 2] = ["word", "class"];

/// Built-in lexicon used when no lexicon file is configured.
pub const DEFAULT_LEXICON_CSV: &str = include_str!("../resources/lexicon.csv");

pub fn default_lexicon() -> SentimentLexicon {
    parse_lexicon(DEFAULT_LEXICON_CSV.as_bytes()).expect("built-in lexicon parses")
}

/// Lexicon file: CSV `word,class` with class one of positive/neutral/negative.
pub fn parse_lexicon(bytes: &[u8]) -> Result<SentimentLexicon> {
    let text = decode_utf8(bytes)?;
    let table = read_table(text, "lexicon", &LEXICON_HEADER)?;
    if let Some(e) = table.errors.first() {
        return Err(Error::Parse(format!("lexicon {e}")));
    }
    let mut entries = Vec::with_capacity(table.rows.len());
    for (line, rec) in table.rows {
        let class = match rec[1].trim() {
            "positive" => Label::Positive,
            "neutral" => Label::Neutral,
            "negative" => Label::Negative,
            other => return Err(Error::Parse(format!("lexicon line {line}: unknown class {other:?}"))),
        };
        let word = rec[0].trim();
        if word.is_empty() {
            return Err(Error::Parse(format!("lexicon line {line}: empty word")));
        }
        entries.push((word.to_string(), class));
    }
    SentimentLexicon::from_entries(entries)
}

pub fn write_lexicon<W: Write>(lexicon: &SentimentLexicon, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(LEXICON_HEADER).map_err(csv_err)?;
    for (word, class) in lexicon.entries() {
        w.write_record([word, class.as_str()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LexiconCounts {
    pub positive: usize,
    pub neutral: usize,
    pub negative: usize,
}

pub fn lexicon_counts<S: AsRef<str>>(tokens: &[S], lexicon: &SentimentLexicon) -> LexiconCounts {
    let mut c = LexiconCounts::default();
    for t in tokens {
        match lexicon.class_of(t.as_ref()) {
            Some(Label::Positive) => c.positive += 1,
            Some(Label::Neutral) => c.neutral += 1,
            Some(Label::Negative) => c.negative += 1,
            None => {}
        }
    }
    c
}

/// Softmax of the lexicon hit counts divided by `temperature`; uniform when
/// nothing matches.
pub fn lexicon_score<S: AsRef<str>>(tokens: &[S], lexicon: &SentimentLexicon, temperature: f64) -> Result<ScoreTriple> {
    if lexicon.is_empty() {
        return Err(Error::Config("sentiment lexicon is empty".into()));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::Argument(format!("temperature {temperature} must be positive")));
    }
    let c = lexicon_counts(tokens, lexicon);
    if c.positive + c.neutral + c.negative == 0 {
        return Ok(ScoreTriple::UNIFORM);
    }
    let z = [c.positive, c.neutral, c.negative].map(|v| v as f64 / temperature);
    let top = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e = z.map(|v| (v - top).exp());
    let total: f64 = e.iter().sum();
    Ok(ScoreTriple {
        pos: e[0] / total,
        neu: e[1] / total,
        neg: e[2] / total,
    })
}

/// Positive when positive hits outnumber negative ones, negative for the
/// reverse, neutral on equality. Neutral words do not count.
pub fn classify_majority<S: AsRef<str>>(tokens: &[S], lexicon: &SentimentLexicon) -> Label {
    let c = lexicon_counts(tokens, lexicon);
    match c.positive.cmp(&c.negative) {
        std::cmp::Ordering::Greater => Label::Positive,
        std::cmp::Ordering::Less => Label::Negative,
        std::cmp::Ordering::Equal => Label::Neutral,
    }
}

pub const SCORE_HEADER: [&str; 4] = ["report_id", "pos", "neu", "neg"];

/// Reads a score file. Rows off the simplex (beyond 1e-6), with unknown or
/// repeated report ids, or unparsable, are rejected with their line number.
/// `known_ids = None` skips the id check.
pub fn load_external_scores(
    bytes: &[u8],
    known_ids: Option<&HashSet<String>>,
    max_reject_rate: f64,
) -> Result<(Vec<SentimentScore>, Vec<RowError>)> {
    let text = decode_utf8(bytes)?;
    let table = read_table(text, "scores", &SCORE_HEADER)?;
    let mut rejects = table.errors;
    let mut scores = Vec::with_capacity(table.rows.len());
    let mut seen = HashSet::new();
    for (line, rec) in table.rows {
        let parsed = (|| {
            let id = rec[0].trim().to_string();
            if let Some(known) = known_ids {
                if !known.contains(&id) {
                    return Err(format!("unknown report id {id:?}"));
                }
            }
            let triple = ScoreTriple {
                pos: parse_f64(&rec[1], "pos")?,
                neu: parse_f64(&rec[2], "neu")?,
                neg: parse_f64(&rec[3], "neg")?,
            };
            triple.check(INGEST_TOLERANCE)?;
            if !seen.insert(id.clone()) {
                return Err(format!("repeated report id {id:?}"));
            }
            Ok(SentimentScore {
                report_id: id,
                score: triple.renormalized(),
            })
        })();
        match parsed {
            Ok(s) => scores.push(s),
            Err(msg) => rejects.push(RowError::new(line, msg)),
        }
    }
    rejects.sort_by_key(|r| r.line);
    check_reject_rate("scores", rejects.len(), scores.len() + rejects.len(), max_reject_rate)?;
    Ok((scores, rejects))
}

pub fn write_scores<W: Write>(scores: &[SentimentScore], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SCORE_HEADER).map_err(csv_err)?;
    for s in scores {
        w.write_record([
            s.report_id.clone(),
            s.score.pos.to_string(),
            s.score.neu.to_string(),
            s.score.neg.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DailySentiment {
    pub date: NaiveDate,
    pub mean_pos: f64,
    pub mean_neu: f64,
    pub mean_neg: f64,
    pub n_reports: usize,
}

/// Unweighted per-day means, in date order. Within a day the sum runs in
/// input order.
pub fn daily_average_sentiment(rows: &[(NaiveDate, ScoreTriple)]) -> Vec<DailySentiment> {
    let mut days: BTreeMap<NaiveDate, (f64, f64, f64, usize)> = BTreeMap::new();
    for (date, s) in rows {
        let acc = days.entry(*date).or_default();
        acc.0 += s.pos;
        acc.1 += s.neu;
        acc.2 += s.neg;
        acc.3 += 1;
    }
    days.into_iter()
        .map(|(date, (p, u, g, n))| {
            let k = n as f64;
            DailySentiment {
                date,
                mean_pos: p / k,
                mean_neu: u / k,
                mean_neg: g / k,
                n_reports: n,
            }
        })
        .collect()
}

pub const DAILY_HEADER: [&str; 5] = ["date", "mean_pos", "mean_neu", "mean_neg", "n_reports"];

pub fn write_daily_sentiment<W: Write>(days: &[DailySentiment], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(DAILY_HEADER).map_err(csv_err)?;
    for d in days {
        w.write_record([
            d.date.to_string(),
            format!("{:.6}", d.mean_pos),
            format!("{:.6}", d.mean_neu),
            format!("{:.6}", d.mean_neg),
            d.n_reports.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// gnuplot script drawing the three daily mean series from `data_file`.
pub fn daily_sentiment_gnuplot(data_file: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set xdata time\n\
         set timefmt '%Y-%m-%d'\n\
         set format x '%Y-%m'\n\
         set yrange [0:1]\n\
         set key outside\n\
         set title 'Average daily sentiment score'\n\
         set terminal pngcairo size 1200,500\n\
         set output 'daily_sentiment.png'\n\
         plot '{data_file}' every ::1 using 1:2 with lines title 'positive', \\\n\
         \x20    '' every ::1 using 1:3 with lines title 'neutral', \\\n\
         \x20    '' every ::1 using 1:4 with lines title 'negative'\n"
    )
}
