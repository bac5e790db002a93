//! The three pooled next-day regressions, industry subsets, and the
//! positive-vs-negative group mean tests.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ols::{ols_fit, Design, RegressionFit, SeType};
use super::panel::PanelRow;
use super::ttest::{mean_difference_test, MeanTestResult, TTestMode};
use crate::error::{Error, Result};
use crate::market::IndustryMap;
use crate::sentiment::Label;

/// Regressors in reporting order; the constant is prepended by the design.
pub const REGRESSORS: [&str; 11] = [
    "pos_lag",
    "neg_lag",
    "range_lag",
    "dvol_lag",
    "retex_lag",
    "szse_lag",
    "sse_lag",
    "csi500_lag",
    "vix_lag",
    "num90_lag",
    "num7_lag",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Range,
    Retex,
    Dvol,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::Range, Outcome::Retex, Outcome::Dvol];

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Range => "range",
            Outcome::Retex => "retex",
            Outcome::Dvol => "dvol",
        }
    }

    pub fn value(self, row: &PanelRow) -> f64 {
        match self {
            Outcome::Range => row.outcome_range,
            Outcome::Retex => row.outcome_retex,
            Outcome::Dvol => row.outcome_dvol,
        }
    }
}

pub fn regressor_values(row: &PanelRow) -> Vec<f64> {
    vec![
        row.pos_lag,
        row.neg_lag,
        row.range_lag,
        row.dvol_lag,
        row.retex_lag,
        row.szse_lag,
        row.sse_lag,
        row.csi500_lag,
        row.vix_lag,
        row.num90_lag,
        row.num7_lag,
    ]
}

pub fn panel_design(rows: &[PanelRow]) -> Result<Design> {
    let data: Vec<Vec<f64>> = rows.iter().map(regressor_values).collect();
    Design::with_intercept(&REGRESSORS, &data)
}

/// Range, excess-return and volume-change fits, in that order.
pub fn run_paper_regressions(rows: &[PanelRow], se: SeType) -> Result<[RegressionFit; 3]> {
    if rows.is_empty() {
        return Err(Error::EmptyPanel);
    }
    let design = panel_design(rows)?;
    let fit = |o: Outcome| {
        let y: Vec<f64> = rows.iter().map(|r| o.value(r)).collect();
        ols_fit(o.name(), &design, &y, se)
    };
    Ok([fit(Outcome::Range)?, fit(Outcome::Retex)?, fit(Outcome::Dvol)?])
}

/// Named industry groups; any other sector falls into [`OTHER_SECTOR`].
pub const SECTORS: [&str; 15] = [
    "Material",
    "Telecom",
    "Real Estate",
    "Public utilities",
    "Media",
    "Apparel",
    "Automobile",
    "Business Service",
    "Food, staples, retail",
    "Consumer Service",
    "Healthcare",
    "Bank",
    "Transport",
    "BioTech",
    "Capital Goods",
];
pub const OTHER_SECTOR: &str = "Other";
pub const DEFAULT_MIN_ROWS: usize = 50;

pub fn sector_group(sector: &str) -> &'static str {
    SECTORS
        .iter()
        .find(|s| s.eq_ignore_ascii_case(sector.trim()))
        .copied()
        .unwrap_or(OTHER_SECTOR)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SectorOutcome {
    Fitted { fits: Vec<RegressionFit> },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorResult {
    pub sector: String,
    pub n_rows: usize,
    #[serde(flatten)]
    pub outcome: SectorOutcome,
}

/// One entry per sector group in reporting order, "Other" last.
pub fn run_industry_regressions(
    rows: &[PanelRow],
    industry: &IndustryMap,
    min_rows: usize,
    se: SeType,
) -> Vec<SectorResult> {
    let mut groups: HashMap<&'static str, Vec<PanelRow>> = HashMap::new();
    for r in rows {
        let sector = industry
            .get(&r.stock_id)
            .map(|e| sector_group(&e.sector))
            .unwrap_or(OTHER_SECTOR);
        groups.entry(sector).or_default().push(r.clone());
    }
    SECTORS
        .iter()
        .chain(std::iter::once(&OTHER_SECTOR))
        .map(|&sector| {
            let subset = groups.remove(sector).unwrap_or_default();
            let n_rows = subset.len();
            let outcome = if n_rows < min_rows {
                SectorOutcome::Skipped {
                    reason: format!("{n_rows} rows, fewer than {min_rows}"),
                }
            } else {
                match run_paper_regressions(&subset, se) {
                    Ok(fits) => SectorOutcome::Fitted { fits: fits.to_vec() },
                    Err(e) => SectorOutcome::Skipped { reason: e.to_string() },
                }
            };
            SectorResult {
                sector: sector.to_string(),
                n_rows,
                outcome,
            }
        })
        .collect()
}

/// Variables compared between majority-positive and majority-negative reports.
pub const GROUP_TEST_VARIABLES: [&str; 6] = [
    "retex_t",
    "retex_t_minus_1",
    "retex_t_plus_1",
    "retex_3day",
    "dvol",
    "range",
];

fn group_variable(name: &str, row: &PanelRow) -> Option<f64> {
    match name {
        "retex_t" => Some(row.retex_lag),
        "retex_t_minus_1" => row.retex_pre,
        "retex_t_plus_1" => Some(row.outcome_retex),
        "retex_3day" => row.three_day_retex(),
        "dvol" => Some(row.dvol_lag),
        "range" => Some(row.range_lag),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTest {
    pub variable: String,
    pub result: Option<MeanTestResult>,
    /// Why the test could not be run.
    pub note: Option<String>,
}

/// Positive minus negative group means, one entry per [`GROUP_TEST_VARIABLES`] row.
/// Timing is relative to the release day `t`.
pub fn majority_group_tests(rows: &[PanelRow], classes: &HashMap<String, Label>, mode: TTestMode) -> Vec<GroupTest> {
    GROUP_TEST_VARIABLES
        .iter()
        .map(|&var| {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for r in rows {
                let Some(v) = group_variable(var, r) else { continue };
                match classes.get(&r.report_id) {
                    Some(Label::Positive) => pos.push(v),
                    Some(Label::Negative) => neg.push(v),
                    _ => {}
                }
            }
            match mean_difference_test(var, &pos, &neg, mode) {
                Ok(res) => GroupTest {
                    variable: var.to_string(),
                    result: Some(res),
                    note: None,
                },
                Err(e) => GroupTest {
                    variable: var.to_string(),
                    result: None,
                    note: Some(e.to_string()),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::IndustryEntry;
    use chrono::NaiveDate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(n: usize, seed: u64) -> Vec<PanelRow> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = NaiveDate::from_ymd_opt(2022, 3, 1).unwrap();
        (0..n)
            .map(|i| {
                let pos: f64 = rng.random();
                let neg: f64 = rng.random::<f64>() * (1.0 - pos);
                let mut row = PanelRow {
                    report_id: format!("r{i}"),
                    stock_id: format!("{:06}.SZ", i % 40),
                    release_date: d,
                    outcome_date: d,
                    pos_lag: pos,
                    neg_lag: neg,
                    range_lag: rng.random(),
                    retex_lag: rng.random::<f64>() - 0.5,
                    dvol_lag: rng.random::<f64>() - 0.5,
                    outcome_range: 0.0,
                    outcome_retex: 0.0,
                    outcome_dvol: 0.0,
                    szse_lag: rng.random::<f64>() * 0.02,
                    sse_lag: rng.random::<f64>() * 0.02,
                    csi500_lag: rng.random::<f64>() * 0.02,
                    vix_lag: rng.random::<f64>() - 0.5,
                    num90_lag: rng.random_range(0..20) as f64 / 100.0,
                    num7_lag: rng.random_range(0..5) as f64 / 100.0,
                    retex_pre: Some(rng.random::<f64>() - 0.5),
                };
                row.outcome_range = 0.1 + 0.065 * row.pos_lag + 0.044 * row.neg_lag + 0.3 * row.range_lag;
                row.outcome_retex = 0.064 * row.pos_lag - 0.065 * row.neg_lag;
                row.outcome_dvol = 0.177 * row.pos_lag + 0.5 * row.dvol_lag;
                row
            })
            .collect()
    }

    #[test]
    fn exact_model_recovered_in_reporting_order() {
        let rows = random_rows(300, 1);
        let [range, retex, dvol] = run_paper_regressions(&rows, SeType::Classical).unwrap();
        assert_eq!(range.regressors[0], "constant");
        assert_eq!(&range.regressors[1..], &REGRESSORS.map(String::from));
        assert!((range.coefficient("pos_lag").unwrap() - 0.065).abs() < 1e-10);
        assert!((range.coefficient("constant").unwrap() - 0.1).abs() < 1e-10);
        assert!((retex.coefficient("neg_lag").unwrap() + 0.065).abs() < 1e-10);
        assert!((dvol.coefficient("pos_lag").unwrap() - 0.177).abs() < 1e-10);
        assert!(dvol.coefficient("vix_lag").unwrap().abs() < 1e-10);
    }

    #[test]
    fn single_row_is_argument_error() {
        let rows = random_rows(1, 2);
        assert!(matches!(
            run_paper_regressions(&rows, SeType::Classical),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn industry_partition_and_skips() {
        let rows = random_rows(400, 3);
        let mut industry = IndustryMap::default();
        for i in 0..40 {
            let sector = match i % 4 {
                0 => "Transport",
                1 => "Bank",
                2 => "Media",
                _ => "Shipbuilding",
            };
            industry.insert(
                format!("{i:06}.SZ"),
                IndustryEntry {
                    index_id: "X".into(),
                    sector: sector.into(),
                },
            );
        }
        let results = run_industry_regressions(&rows, &industry, 50, SeType::Classical);
        assert_eq!(results.len(), 16);
        assert_eq!(results.last().unwrap().sector, "Other");
        assert_eq!(results.iter().map(|r| r.n_rows).sum::<usize>(), rows.len());
        let transport = results.iter().find(|r| r.sector == "Transport").unwrap();
        assert_eq!(transport.n_rows, 100);
        assert!(matches!(transport.outcome, SectorOutcome::Fitted { .. }));
        let other = results.iter().find(|r| r.sector == "Other").unwrap();
        assert_eq!(other.n_rows, 100);
        let material = results.iter().find(|r| r.sector == "Material").unwrap();
        assert!(matches!(material.outcome, SectorOutcome::Skipped { .. }));

        let small = run_industry_regressions(&rows[..40], &industry, 50, SeType::Classical);
        assert!(small.iter().all(|r| matches!(r.outcome, SectorOutcome::Skipped { .. })));
    }

    #[test]
    fn group_tests_layout_and_sign() {
        let rows = random_rows(200, 4);
        let classes: HashMap<String, Label> = rows
            .iter()
            .map(|r| {
                let l = if r.outcome_retex > 0.01 {
                    Label::Positive
                } else if r.outcome_retex < -0.01 {
                    Label::Negative
                } else {
                    Label::Neutral
                };
                (r.report_id.clone(), l)
            })
            .collect();
        let tests = majority_group_tests(&rows, &classes, TTestMode::Welch);
        let names: Vec<_> = tests.iter().map(|t| t.variable.as_str()).collect();
        assert_eq!(names, GROUP_TEST_VARIABLES);
        let plus1 = tests[2].result.as_ref().unwrap();
        assert!(plus1.t_stat > 0.0);

        let none: HashMap<String, Label> = HashMap::new();
        let empty = majority_group_tests(&rows, &none, TTestMode::Welch);
        assert!(empty.iter().all(|t| t.result.is_none() && t.note.is_some()));
    }
}
