//! Regression and mean-test tables in text, CSV and LaTeX form.
//!
//! The text layout puts each estimate on one line and its t-statistic in
//! parentheses on the line below.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::econometrics::{GroupTest, RegressionFit, SectorOutcome, SectorResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarPreset {
    /// `*` p < 0.05, `**` p < 0.01, `***` p < 0.001
    #[default]
    Table3,
    /// `*` p < 0.1, `**` p < 0.05, `***` p < 0.01
    Table4,
}

impl StarPreset {
    pub fn thresholds(self) -> [f64; 3] {
        match self {
            StarPreset::Table3 => [0.05, 0.01, 0.001],
            StarPreset::Table4 => [0.1, 0.05, 0.01],
        }
    }

    pub fn stars(self, p: f64) -> &'static str {
        let [one, two, three] = self.thresholds();
        if p < three {
            "***"
        } else if p < two {
            "**"
        } else if p < one {
            "*"
        } else {
            ""
        }
    }

    pub fn legend_text(self) -> String {
        let [one, two, three] = self.thresholds();
        format!("* p-value < {one}, ** p-value < {two}, *** p-value < {three}")
    }

    pub fn legend_tex(self) -> String {
        let [one, two, three] = self.thresholds();
        format!("* p-value $< {one}$, ** p-value $< {two}$, *** p-value $< {three}$")
    }
}

/// Display names for the regressors, constant first.
pub const REGRESSOR_LABELS: [(&str, &str, &str); 12] = [
    ("constant", "Constant", "Constant"),
    ("pos_lag", "Pos_{t-1}", r"$\widehat{Pos}_{t-1}$"),
    ("neg_lag", "Neg_{t-1}", r"$\widehat{Neg}_{t-1}$"),
    ("range_lag", "Range_{t-1}", r"$Range_{t-1}$"),
    ("dvol_lag", "dVolume_{t-1}", r"$\Delta Volume_{t-1}$"),
    ("retex_lag", "Ret^ex_{t-1}", r"$Ret^{ex}_{t-1}$"),
    ("szse_lag", "SZSE_{t-1}", r"$SZSE_{t-1}$"),
    ("sse_lag", "SSE_{t-1}", r"$SSE_{t-1}$"),
    ("csi500_lag", "CSI500_{t-1}", r"$CSI500_{t-1}$"),
    ("vix_lag", "VIX_{t-1}", r"$VIX_{t-1}$"),
    ("num90_lag", "Num90", r"$Num90$"),
    ("num7_lag", "Num7", r"$Num7$"),
];

fn labels_for(name: &str) -> (&str, &str) {
    REGRESSOR_LABELS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, t, x)| (*t, *x))
        .unwrap_or((name, name))
}

fn outcome_labels(name: &str) -> (&'static str, &'static str) {
    match name {
        "range" => ("Range", "$Range$"),
        "retex" => ("Ret^ex", "$Ret^{ex}$"),
        "dvol" => ("dVolume", r"$\Delta volume$"),
        _ => ("?", "?"),
    }
}

/// Three decimals, four for magnitudes below 0.01.
pub fn format_estimate(v: f64) -> String {
    if v != 0.0 && v.abs() < 0.01 {
        format!("{v:.4}")
    } else {
        format!("{v:.3}")
    }
}

pub fn format_t(v: f64) -> String {
    format!("({v:.3})")
}

fn pad_row(out: &mut String, cells: &[String], widths: &[usize]) {
    let mut line = String::new();
    for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
        if i == 0 {
            let _ = write!(line, "{c:<w$}");
        } else {
            let _ = write!(line, "  {c:>w$}");
        }
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

fn column_widths(rows: &[Vec<String>]) -> Vec<usize> {
    let n = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    (0..n)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|c| c.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// Estimate rows and parenthesized t-stat rows, one column per fit.
fn regression_grid(fits: &[RegressionFit], stars: StarPreset) -> Vec<Vec<String>> {
    let mut rows = vec![std::iter::once(String::new())
        .chain(fits.iter().map(|f| outcome_labels(&f.name).0.to_string()))
        .collect::<Vec<_>>()];
    let Some(first) = fits.first() else { return rows };
    for (j, name) in first.regressors.iter().enumerate() {
        let mut est = vec![labels_for(name).0.to_string()];
        let mut ts = vec![String::new()];
        for f in fits {
            est.push(format!(
                "{}{}",
                format_estimate(f.coefficients[j]),
                stars.stars(f.p_values[j])
            ));
            ts.push(format_t(f.t_stats[j]));
        }
        rows.push(est);
        rows.push(ts);
    }
    rows.push(
        std::iter::once("Observations".to_string())
            .chain(fits.iter().map(|f| f.n_obs.to_string()))
            .collect(),
    );
    rows.push(
        std::iter::once("R-squared".to_string())
            .chain(fits.iter().map(|f| format!("{:.3}", f.r_squared)))
            .collect(),
    );
    rows
}

pub fn regression_table_text(title: &str, fits: &[RegressionFit], stars: StarPreset) -> String {
    let rows = regression_grid(fits, stars);
    let widths = column_widths(&rows);
    let mut out = format!("{title}\n");
    for r in &rows {
        pad_row(&mut out, r, &widths);
    }
    let _ = writeln!(out, "Note: t-statistics in parentheses. {}", stars.legend_text());
    out
}

pub const REGRESSION_CSV_HEADER: [&str; 9] = [
    "outcome",
    "regressor",
    "coefficient",
    "std_error",
    "t_stat",
    "p_value",
    "stars",
    "n_obs",
    "r_squared",
];

fn csv_line(cells: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(cells).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

fn fit_csv_rows(prefix: &[String], fit: &RegressionFit, stars: StarPreset, out: &mut String) {
    for (j, name) in fit.regressors.iter().enumerate() {
        let mut cells = prefix.to_vec();
        cells.extend([
            fit.name.clone(),
            name.clone(),
            fit.coefficients[j].to_string(),
            fit.std_errors[j].to_string(),
            fit.t_stats[j].to_string(),
            fit.p_values[j].to_string(),
            stars.stars(fit.p_values[j]).to_string(),
            fit.n_obs.to_string(),
            fit.r_squared.to_string(),
        ]);
        out.push_str(&csv_line(&cells));
    }
}

pub fn regression_table_csv(fits: &[RegressionFit], stars: StarPreset) -> String {
    let mut out = csv_line(&REGRESSION_CSV_HEADER.map(String::from));
    for f in fits {
        fit_csv_rows(&[], f, stars, &mut out);
    }
    out
}

pub fn regression_table_tex(caption: &str, fits: &[RegressionFit], stars: StarPreset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\begin{{table}}[htbp]");
    let _ = writeln!(out, "\\centering");
    let _ = writeln!(out, "\\caption{{{caption}}}");
    let _ = writeln!(out, "\\begin{{tabular}}{{l{}}}", "c".repeat(fits.len()));
    let _ = writeln!(out, "\\hline");
    let head: Vec<&str> = fits.iter().map(|f| outcome_labels(&f.name).1).collect();
    let _ = writeln!(out, " & {} \\\\", head.join(" & "));
    let _ = writeln!(out, "\\hline");
    if let Some(first) = fits.first() {
        for (j, name) in first.regressors.iter().enumerate() {
            let est: Vec<String> = fits
                .iter()
                .map(|f| format!("{}{}", format_estimate(f.coefficients[j]), stars.stars(f.p_values[j])))
                .collect();
            let ts: Vec<String> = fits.iter().map(|f| format_t(f.t_stats[j])).collect();
            let _ = writeln!(out, "{} & {} \\\\", labels_for(name).1, est.join(" & "));
            let _ = writeln!(out, " & {} \\\\", ts.join(" & "));
        }
    }
    let _ = writeln!(out, "\\hline");
    let obs: Vec<String> = fits.iter().map(|f| f.n_obs.to_string()).collect();
    let _ = writeln!(out, "Observations & {} \\\\", obs.join(" & "));
    let _ = writeln!(out, "\\hline");
    let _ = writeln!(out, "\\end{{tabular}}");
    let _ = writeln!(out, "\\begin{{tablenotes}}");
    let _ = writeln!(out, "\\item In parentheses the t-statistics. {}", stars.legend_tex());
    let _ = writeln!(out, "\\end{{tablenotes}}");
    let _ = writeln!(out, "\\end{{table}}");
    out
}

const SENTIMENT_REGRESSORS: [&str; 2] = ["pos_lag", "neg_lag"];

/// One block per sector: sentiment estimates and t-stats for each outcome,
/// or a "skipped" line.
pub fn industry_table_text(results: &[SectorResult], stars: StarPreset) -> String {
    let mut rows: Vec<Vec<String>> = vec![vec![
        "Sector".into(),
        "N".into(),
        String::new(),
        "Range".into(),
        "Ret^ex".into(),
        "dVolume".into(),
    ]];
    let mut skipped = Vec::new();
    for r in results {
        match &r.outcome {
            SectorOutcome::Fitted { fits } => {
                for (k, reg) in SENTIMENT_REGRESSORS.iter().enumerate() {
                    let name = if k == 0 { r.sector.clone() } else { String::new() };
                    let n = if k == 0 { r.n_rows.to_string() } else { String::new() };
                    let mut est = vec![name, n, labels_for(reg).0.to_string()];
                    let mut ts = vec![String::new(), String::new(), String::new()];
                    for f in fits {
                        let j = f.index_of(reg).expect("sentiment regressor present");
                        est.push(format!(
                            "{}{}",
                            format_estimate(f.coefficients[j]),
                            stars.stars(f.p_values[j])
                        ));
                        ts.push(format_t(f.t_stats[j]));
                    }
                    rows.push(est);
                    rows.push(ts);
                }
            }
            SectorOutcome::Skipped { reason } => {
                rows.push(vec![r.sector.clone(), r.n_rows.to_string(), "skipped".into()]);
                skipped.push(format!("{}: {reason}", r.sector));
            }
        }
    }
    let widths = column_widths(&rows);
    let mut out = String::from("Regression on industry subsets\n");
    for r in &rows {
        pad_row(&mut out, r, &widths);
    }
    let _ = writeln!(out, "Note: t-statistics in parentheses. {}", stars.legend_text());
    for s in skipped {
        let _ = writeln!(out, "Skipped {s}");
    }
    out
}

pub fn industry_table_csv(results: &[SectorResult], stars: StarPreset) -> String {
    let mut header = vec!["sector".to_string(), "n_rows".to_string(), "status".to_string()];
    header.extend(REGRESSION_CSV_HEADER.map(String::from));
    let mut out = csv_line(&header);
    for r in results {
        match &r.outcome {
            SectorOutcome::Fitted { fits } => {
                let prefix = [r.sector.clone(), r.n_rows.to_string(), "fitted".to_string()];
                for f in fits {
                    fit_csv_rows(&prefix, f, stars, &mut out);
                }
            }
            SectorOutcome::Skipped { .. } => {
                let mut cells = vec![r.sector.clone(), r.n_rows.to_string(), "skipped".to_string()];
                cells.extend(std::iter::repeat_n(String::new(), REGRESSION_CSV_HEADER.len()));
                out.push_str(&csv_line(&cells));
            }
        }
    }
    out
}

pub fn industry_table_tex(results: &[SectorResult], stars: StarPreset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\begin{{table}}[htbp]");
    let _ = writeln!(out, "\\centering");
    let _ = writeln!(out, "\\caption{{Regression on Industry Subsets}}");
    let _ = writeln!(out, "\\begin{{tabular}}{{llcccc}}");
    let _ = writeln!(out, "\\hline");
    let _ = writeln!(out, "Sector & N & & $Range$ & $Ret^{{ex}}$ & $\\Delta volume$ \\\\");
    let _ = writeln!(out, "\\hline");
    for r in results {
        match &r.outcome {
            SectorOutcome::Fitted { fits } => {
                for (k, reg) in SENTIMENT_REGRESSORS.iter().enumerate() {
                    let (name, n) = if k == 0 {
                        (tex_escape(&r.sector), r.n_rows.to_string())
                    } else {
                        (String::new(), String::new())
                    };
                    let est: Vec<String> = fits
                        .iter()
                        .map(|f| {
                            let j = f.index_of(reg).expect("sentiment regressor present");
                            format!("{}{}", format_estimate(f.coefficients[j]), stars.stars(f.p_values[j]))
                        })
                        .collect();
                    let ts: Vec<String> = fits
                        .iter()
                        .map(|f| format_t(f.t_stats[f.index_of(reg).expect("sentiment regressor present")]))
                        .collect();
                    let _ = writeln!(out, "{name} & {n} & {} & {} \\\\", labels_for(reg).1, est.join(" & "));
                    let _ = writeln!(out, " & & & {} \\\\", ts.join(" & "));
                }
            }
            SectorOutcome::Skipped { .. } => {
                let _ = writeln!(
                    out,
                    "{} & {} & \\multicolumn{{4}}{{c}}{{skipped}} \\\\",
                    tex_escape(&r.sector),
                    r.n_rows
                );
            }
        }
    }
    let _ = writeln!(out, "\\hline");
    let _ = writeln!(out, "\\end{{tabular}}");
    let _ = writeln!(out, "\\begin{{tablenotes}}");
    let _ = writeln!(out, "\\item In parentheses the t-statistics. {}", stars.legend_tex());
    let _ = writeln!(out, "\\end{{tablenotes}}");
    let _ = writeln!(out, "\\end{{table}}");
    out
}

fn tex_escape(s: &str) -> String {
    s.replace('&', "\\&").replace('_', "\\_")
}

/// Display names of the group-test variables; timing relative to the release day `t`.
pub const GROUP_TEST_LABELS: [(&str, &str, &str); 6] = [
    ("retex_t", "Ret^ex_t", r"$Ret^{ex}_{t}$"),
    ("retex_t_minus_1", "Ret^ex_{t-1}", r"$Ret^{ex}_{t-1}$"),
    ("retex_t_plus_1", "Ret^ex_{t+1}", r"$Ret^{ex}_{t+1}$"),
    ("retex_3day", "3-day average Ret^ex", r"3-day average $Ret^{ex}$"),
    ("dvol", "dVolume", r"$\Delta volume$"),
    ("range", "Range", r"$Range$"),
];

fn group_label(name: &str) -> (&str, &str) {
    GROUP_TEST_LABELS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, t, x)| (*t, *x))
        .unwrap_or((name, name))
}

fn mean_sd(m: f64, sd: f64) -> String {
    format!("{} ({})", format_estimate(m), format_estimate(sd))
}

pub fn mean_test_table_text(tests: &[GroupTest]) -> String {
    let mut rows: Vec<Vec<String>> = vec![vec![
        "Variable".into(),
        "Positive mean (sd)".into(),
        "Negative mean (sd)".into(),
        "Difference".into(),
        "t-stat".into(),
        "p-value".into(),
    ]];
    for t in tests {
        let label = group_label(&t.variable).0.to_string();
        match &t.result {
            Some(r) => rows.push(vec![
                label,
                mean_sd(r.mean_a, r.sd_a),
                mean_sd(r.mean_b, r.sd_b),
                format_estimate(r.mean_a - r.mean_b),
                format!("{:.3}", r.t_stat),
                format!("{:.4}", r.p_value),
            ]),
            None => rows.push(vec![label, "untestable".into()]),
        }
    }
    let widths = column_widths(&rows);
    let mut out = String::from("Test for the difference in means (positive vs negative majority class)\n");
    for r in &rows {
        pad_row(&mut out, r, &widths);
    }
    if let Some(r) = tests.iter().find_map(|t| t.result.as_ref()) {
        let _ = writeln!(
            out,
            "Note: {} two-sample t-test; positive n = {}, negative n = {}.",
            match r.mode {
                crate::econometrics::TTestMode::Welch => "Welch",
                crate::econometrics::TTestMode::Pooled => "pooled-variance",
            },
            r.n_a,
            r.n_b
        );
    }
    for t in tests {
        if let Some(note) = &t.note {
            let _ = writeln!(out, "Untestable {}: {note}", group_label(&t.variable).0);
        }
    }
    out
}

pub const MEAN_TEST_CSV_HEADER: [&str; 11] = [
    "variable",
    "mean_pos",
    "sd_pos",
    "n_pos",
    "mean_neg",
    "sd_neg",
    "n_neg",
    "difference",
    "t_stat",
    "df",
    "p_value",
];

pub fn mean_test_table_csv(tests: &[GroupTest]) -> String {
    let mut out = csv_line(&MEAN_TEST_CSV_HEADER.map(String::from));
    for t in tests {
        let cells: Vec<String> = match &t.result {
            Some(r) => vec![
                t.variable.clone(),
                r.mean_a.to_string(),
                r.sd_a.to_string(),
                r.n_a.to_string(),
                r.mean_b.to_string(),
                r.sd_b.to_string(),
                r.n_b.to_string(),
                (r.mean_a - r.mean_b).to_string(),
                r.t_stat.to_string(),
                r.df.to_string(),
                r.p_value.to_string(),
            ],
            None => std::iter::once(t.variable.clone())
                .chain(std::iter::repeat_n(String::new(), MEAN_TEST_CSV_HEADER.len() - 1))
                .collect(),
        };
        out.push_str(&csv_line(&cells));
    }
    out
}

pub fn mean_test_table_tex(tests: &[GroupTest]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\begin{{table}}[htbp]");
    let _ = writeln!(out, "\\centering");
    let _ = writeln!(out, "\\caption{{Test for the Difference in Means}}");
    let _ = writeln!(out, "\\begin{{tabular}}{{lcccc}}");
    let _ = writeln!(out, "\\hline");
    let _ = writeln!(out, "Variable & Positive & Negative & Mean Difference & $t$-Stat \\\\");
    let _ = writeln!(out, "\\hline");
    for t in tests {
        let label = group_label(&t.variable).1;
        match &t.result {
            Some(r) => {
                let _ = writeln!(
                    out,
                    "{label} & {} & {} & {} & {:.3} \\\\",
                    format_estimate(r.mean_a),
                    format_estimate(r.mean_b),
                    format_estimate(r.mean_a - r.mean_b),
                    r.t_stat
                );
                let _ = writeln!(
                    out,
                    " & ({}) & ({}) & & \\\\",
                    format_estimate(r.sd_a),
                    format_estimate(r.sd_b)
                );
            }
            None => {
                let _ = writeln!(out, "{label} & \\multicolumn{{4}}{{c}}{{untestable}} \\\\");
            }
        }
    }
    let _ = writeln!(out, "\\hline");
    let _ = writeln!(out, "\\end{{tabular}}");
    let _ = writeln!(out, "\\end{{table}}");
    out
}
