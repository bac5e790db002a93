//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p reportsent-core --test acceptance`.

use std::cell::Cell;
use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::time::{Duration, Instant};

use chrono::{Days, NaiveDate};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use reportsent::econometrics::{mean_difference_test, ols_fit, run_paper_regressions, Design, SeType, TTestMode};
use reportsent::labeling::{assign_labels, Label, PoolEntry};
use reportsent::metrics::garman_klass;
use reportsent::pipeline::{cmd_analyze, cmd_ingest, cmd_synth, RunConfig};
use reportsent::report::{StarPreset, GROUP_TEST_LABELS, REGRESSOR_LABELS};
use reportsent::sentiment::{
    classify_majority, daily_average_sentiment, lexicon_counts, lexicon_score, load_external_scores, ScoreTriple,
    SentimentLexicon,
};
use reportsent::synthkit::{generate, Plants, SynthSpec};

mod common;
use common::NormalEquations;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    Outcome { passed: ok, detail }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

// Double-double arithmetic for the range oracle.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn from(a: f64) -> Dd {
        Dd(a, 0.0)
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.0 + o.0;
        let bb = s - self.0;
        let e = (self.0 - (s - bb)) + (o.0 - bb) + self.1 + o.1;
        let hi = s + e;
        Dd(hi, e - (hi - s))
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let hi = p + e;
        Dd(hi, e - (hi - p))
    }

    fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from(k))
    }

    fn value(self) -> f64 {
        self.0 + self.1
    }
}

/// ln(x / o) through ln_1p of the exactly-formed difference.
fn log_ratio(x: f64, o: f64) -> Dd {
    let q = (x - o) / o;
    Dd::from(q.ln_1p())
}

/// The range estimator expanded term by term and summed in double-double.
fn range_oracle(o: f64, h: f64, l: f64, c: f64) -> f64 {
    let u = log_ratio(h, o);
    let d = log_ratio(l, o);
    let cc = log_ratio(c, o);
    let terms = [
        u.mul(u).scale(0.511),
        u.mul(d).scale(-2.0 * 0.511),
        d.mul(d).scale(0.511),
        cc.mul(u).scale(-0.019),
        cc.mul(d).scale(-0.019),
        u.mul(d).scale(2.0 * 0.019),
        cc.mul(cc).scale(-0.383),
    ];
    terms.into_iter().fold(Dd::from(0.0), Dd::add).value()
}

fn random_bar(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    let o = 10f64.powf(rng.random_range(-1.0..3.0));
    let mut c = 0.03 * normal(rng);
    let mut up = rng.random_range(0.0..0.04);
    let mut down = rng.random_range(0.0..0.04);
    match rng.random_range(0..10) {
        0 => c = 0.0,
        1 => up = 0.0,
        2 => down = 0.0,
        _ => {}
    }
    let close = o * c.exp();
    let high = (o * (c.max(0.0) + up).exp()).max(o).max(close);
    let low = (o * (c.min(0.0) - down).exp()).min(o).min(close);
    (o, high, low, close)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let bars: Vec<_> = (0..10_000).map(|_| random_bar(&mut rng)).collect();
    let started = Instant::now();
    let mut worst = 0.0f64;
    for &(o, h, l, c) in &bars {
        let got = match garman_klass(o, h, l, c) {
            Ok(v) => v,
            Err(e) => return fail(format!("valid bar ({o}, {h}, {l}, {c}) rejected: {e}")),
        };
        let want = range_oracle(o, h, l, c);
        let err = if want == 0.0 {
            got.abs()
        } else {
            ((got - want) / want).abs()
        };
        worst = worst.max(err);
    }
    let zero_ok = [0.01, 1.0, 37.25, 4096.5].iter().all(|&p| {
        garman_klass(p, p, p, p)
            .map(|v| v == 0.0 && v.is_sign_positive())
            .unwrap_or(false)
    });
    let elapsed = started.elapsed();
    check(
        worst <= 1e-10 && zero_ok && elapsed < Duration::from_secs(1),
        format!("10000 bars, max relative error {worst:.1e} (limit 1e-10), flat bar exactly 0: {zero_ok}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=500usize {
        let mut seen = HashSet::new();
        let pool: Vec<PoolEntry> = (0..n)
            .map(|i| {
                let mut r = 0.05 * normal(&mut rng);
                while !seen.insert(r.to_bits()) {
                    r = 0.05 * normal(&mut rng);
                }
                PoolEntry {
                    report_id: format!("R{i:04}"),
                    stock_id: format!("{:06}.SH", 600000 + i % 37),
                    window_return: r,
                }
            })
            .collect();
        let labels = |p: &[PoolEntry]| -> HashMap<(String, String), Label> {
            assign_labels(p, 0.3, 0.3)
                .unwrap()
                .into_iter()
                .map(|l| ((l.report_id, l.stock_id), l.label))
                .collect()
        };
        let base = labels(&pool);
        let tail = (0.3 * n as f64).floor() as usize;
        let count = |l: Label| base.values().filter(|&&x| x == l).count();
        if (count(Label::Positive), count(Label::Neutral), count(Label::Negative)) != (tail, n - 2 * tail, tail) {
            return fail(format!("n = {n}: counts do not match floor(0.3n)"));
        }
        let k = 10f64.powf(rng.random_range(-3.0..3.0));
        let scaled: Vec<PoolEntry> = pool
            .iter()
            .map(|e| PoolEntry {
                window_return: e.window_return * k,
                ..e.clone()
            })
            .collect();
        let mut shuffled = pool.clone();
        shuffled.shuffle(&mut rng);
        if labels(&scaled) != base {
            return fail(format!("n = {n}: labels change under rescaling by {k}"));
        }
        if labels(&shuffled) != base {
            return fail(format!("n = {n}: labels change under permutation"));
        }
    }
    pass("n = 1..500: counts floor(0.3n) / n - 2 floor(0.3n) / floor(0.3n), invariant to rescaling and permutation")
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let (mut worst, mut worst_orth) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let k = rng.random_range(2..=10usize);
        let n = rng.random_range((3 * k).max(20)..=500usize);
        let names: Vec<String> = (1..k).map(|j| format!("x{j}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (1..k)
                    .map(|j| (1.0 + j as f64 * 0.5) * normal(&mut rng) + 0.2 * j as f64)
                    .collect()
            })
            .collect();
        let beta: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<f64> = rows
            .iter()
            .map(|r| beta[0] + r.iter().zip(&beta[1..]).map(|(x, b)| x * b).sum::<f64>() + normal(&mut rng))
            .collect();
        let design = Design::with_intercept(&refs, &rows).unwrap();
        let fit = match ols_fit("oracle", &design, &y, SeType::Classical) {
            Ok(f) => f,
            Err(e) => return fail(format!("fit failed on n = {n}, k = {k}: {e}")),
        };
        let oracle = NormalEquations::solve(&design, &y);
        for j in 0..k {
            worst = worst
                .max(rel(fit.coefficients[j], oracle.beta[j]))
                .max(rel(fit.std_errors[j], oracle.se[j]))
                .max(rel(fit.t_stats[j], oracle.beta[j] / oracle.se[j]));
        }
        let xmax = (0..n)
            .flat_map(|i| design.row(i).to_vec())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = n as f64 * xmax * ymax;
        for j in 0..k {
            let dot: f64 = (0..n).map(|i| design.get(i, j) * fit.residuals[i]).sum();
            worst_orth = worst_orth.max(dot.abs() / scale);
        }
    }
    check(
        worst <= 1e-8 && worst_orth < 1e-8,
        format!("100 systems, max relative deviation {worst:.1e} (limit 1e-8), max |X'e| / scale {worst_orth:.1e}"),
    )
}

const PLANTED: [(usize, &str); 5] = [
    (0, "pos_lag"),
    (0, "neg_lag"),
    (1, "pos_lag"),
    (1, "neg_lag"),
    (2, "pos_lag"),
];

fn planted_value(p: &Plants, outcome: usize, name: &str) -> f64 {
    let eq = [p.range, p.retex, p.dvol][outcome];
    eq[if name == "pos_lag" { 1 } else { 2 }]
}

/// Runs synth, ingest and analyze through files; returns how many of the
/// planted coefficients were recovered.
fn recovery_run(seed: u64, root: &Path) -> Result<usize, String> {
    let spec = SynthSpec {
        seed,
        ..SynthSpec::default()
    };
    let data = root.join(format!("seed{seed}"));
    cmd_synth(&spec, &data).map_err(|e| e.to_string())?;
    let cfg = RunConfig::load(&data.join("config.toml")).map_err(|e| e.to_string())?;
    cmd_ingest(&cfg).map_err(|e| e.to_string())?;
    let a = cmd_analyze(&cfg).map_err(|e| e.to_string())?;
    let ok = PLANTED
        .iter()
        .filter(|(o, name)| {
            let fit = &a.fits[*o];
            let want = planted_value(&spec.plants, *o, name);
            let b = fit.coefficient(name).unwrap();
            let se = fit.std_error(name).unwrap();
            (b - want).abs() <= 3.0 * se && b.signum() == want.signum()
        })
        .count();
    std::fs::remove_dir_all(&data).ok();
    Ok(ok)
}

fn run_parallel<T: Send>(seeds: std::ops::Range<u64>, f: impl Fn(u64) -> T + Sync) -> Vec<T> {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let seeds: Vec<u64> = seeds.collect();
    let chunk = seeds.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(|&seed| f(seed)).collect::<Vec<T>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

fn criterion_4() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let results = run_parallel(0..100, |seed| recovery_run(seed, root.path()));
    let mut full = 0;
    for (seed, r) in results.iter().enumerate() {
        match r {
            Ok(5) => full += 1,
            Ok(_) => {}
            Err(e) => return fail(format!("seed {seed}: {e}")),
        }
    }
    check(
        full >= 95,
        format!(
            "{full} of 100 seeds recover all five planted coefficients within 3 SE with the planted sign (need 95)"
        ),
    )
}

fn criterion_5() -> Outcome {
    let results = run_parallel(0..1000, |seed| -> Result<[bool; 6], String> {
        let spec = SynthSpec {
            seed: 1_000_000 + seed,
            n_stocks: 40,
            n_days: 30,
            n_train_days: 1,
            reports_per_day: 10,
            plants: Plants::default().without_sentiment(),
            ..SynthSpec::default()
        };
        let panel = generate(&spec)
            .and_then(|d| d.test_panel())
            .map_err(|e| e.to_string())?;
        let fits = run_paper_regressions(&panel.rows, SeType::Classical).map_err(|e| e.to_string())?;
        let mut hits = [false; 6];
        for (o, fit) in fits.iter().enumerate() {
            for (j, name) in ["pos_lag", "neg_lag"].iter().enumerate() {
                hits[2 * o + j] = fit.t_stat(name).unwrap().abs() >= 3.0;
            }
        }
        Ok(hits)
    });
    let mut counts = [0usize; 6];
    for (seed, r) in results.iter().enumerate() {
        match r {
            Ok(h) => (0..6).for_each(|i| counts[i] += h[i] as usize),
            Err(e) => return fail(format!("null seed {seed}: {e}")),
        }
    }
    let worst = *counts.iter().max().unwrap();
    check(
        worst <= 10,
        format!(
            "1000 null runs, |t| >= 3 counts (range pos/neg, retex pos/neg, dvol pos/neg) {counts:?}, max rate {:.1}% (limit 1%)",
            worst as f64 / 10.0
        ),
    )
}

fn on_simplex(s: &ScoreTriple) -> bool {
    [s.pos, s.neu, s.neg].iter().all(|v| *v >= 0.0) && (s.pos + s.neu + s.neg - 1.0).abs() <= 1e-9
}

fn word_pool() -> (SentimentLexicon, Vec<&'static str>) {
    let lx = SentimentLexicon::from_entries([
        ("增持", Label::Positive),
        ("看好", Label::Positive),
        ("超预期", Label::Positive),
        ("稳步", Label::Neutral),
        ("维持", Label::Neutral),
        ("下滑", Label::Negative),
        ("减值", Label::Negative),
        ("损失", Label::Negative),
    ])
    .unwrap();
    let words = vec![
        "增持",
        "看好",
        "超预期",
        "稳步",
        "维持",
        "下滑",
        "减值",
        "损失",
        "公司",
        "业绩",
        "行业",
    ];
    (lx, words)
}

fn tokens_strategy(words: Vec<&'static str>, max_len: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(words), 0..max_len)
}

fn criterion_6() -> Outcome {
    let cases = Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    };
    let (lx, words) = word_pool();
    let mut runner = TestRunner::new(cases.clone());
    let lexicon = runner.run(&(tokens_strategy(words, 60), 0.01f64..50.0), |(tokens, temp)| {
        let s = lexicon_score(&tokens, &lx, temp).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(on_simplex(&s), "{s:?}");
        Ok(())
    });

    let mut runner = TestRunner::new(cases.clone());
    let weights = (1e-6f64..1.0, 1e-6f64..1.0, 1e-6f64..1.0, -2e-6f64..2e-6);
    let external = runner.run(&weights, |(a, b, c, drift)| {
        let t = a + b + c;
        let (pos, neu, neg) = (a / t + drift, b / t, c / t);
        let csv = format!("report_id,pos,neu,neg\nR1,{pos},{neu},{neg}\n");
        let (scores, rejects) =
            load_external_scores(csv.as_bytes(), None, 1.0).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let off = (pos + neu + neg - 1.0).abs();
        if off < 0.9e-6 {
            prop_assert_eq!(scores.len(), 1);
        } else if off > 1.1e-6 {
            prop_assert_eq!(rejects.len(), 1);
        }
        for s in &scores {
            prop_assert!(on_simplex(&s.score), "{:?}", s.score);
        }
        Ok(())
    });

    let mut runner = TestRunner::new(cases);
    let triple = (1e-9f64..1.0, 1e-9f64..1.0, 1e-9f64..1.0).prop_map(|(a, b, c)| {
        let t = a + b + c;
        ScoreTriple {
            pos: a / t,
            neu: b / t,
            neg: c / t,
        }
    });
    let rows = prop::collection::vec((0u64..5, triple), 1..40);
    let start = NaiveDate::from_ymd_opt(2022, 3, 1).unwrap();
    let daily = runner.run(&rows, |rows| {
        let dated: Vec<(NaiveDate, ScoreTriple)> = rows.into_iter().map(|(d, s)| (start + Days::new(d), s)).collect();
        for day in daily_average_sentiment(&dated) {
            let s = ScoreTriple {
                pos: day.mean_pos,
                neu: day.mean_neu,
                neg: day.mean_neg,
            };
            prop_assert!(on_simplex(&s), "{s:?}");
        }
        Ok(())
    });

    let failures: Vec<String> = [
        ("lexicon_score", lexicon.map_err(|e| e.to_string())),
        ("load_external_scores", external.map_err(|e| e.to_string())),
        ("daily average", daily.map_err(|e| e.to_string())),
    ]
    .into_iter()
    .filter_map(|(name, r)| r.err().map(|e| format!("{name}: {e}")))
    .collect();
    if failures.is_empty() {
        pass("10000 cases each for lexicon scores, ingested scores and daily averages stay on the simplex (1e-9)")
    } else {
        fail(failures.join("; "))
    }
}

fn criterion_7() -> Outcome {
    let a = [2.1, 2.5, 2.3, 2.7];
    let b = [1.1, 1.4, 1.2];
    let ab = mean_difference_test("x", &a, &b, TTestMode::Welch).unwrap();
    let ba = mean_difference_test("x", &b, &a, TTestMode::Welch).unwrap();
    let same = mean_difference_test("x", &a, &a, TTestMode::Welch).unwrap();
    check(
        (ab.t_stat - 7.462).abs() <= 1e-3 && same.t_stat == 0.0 && ba.t_stat == -ab.t_stat,
        format!(
            "Welch t = {:.6} (reference 7.462 +/- 1e-3), identical groups t = {}, swapped t = {:.6}",
            ab.t_stat, same.t_stat, ba.t_stat
        ),
    )
}

const GOLDEN_FILES: [&str; 3] = ["table3.txt", "table3.tex", "table5.txt"];

fn table3_layout(text: &str) -> Result<(), String> {
    let lines: Vec<&str> = text.lines().collect();
    for (_, label, _) in REGRESSOR_LABELS {
        let i = lines
            .iter()
            .position(|l| l.split_whitespace().next() == Some(label))
            .ok_or(format!("row {label} missing"))?;
        let t_row = lines.get(i + 1).ok_or(format!("no t-stat row after {label}"))?;
        let cells: Vec<&str> = t_row.split_whitespace().collect();
        if cells.len() != 3 || !cells.iter().all(|c| c.starts_with('(') && c.ends_with(')')) {
            return Err(format!("t-stat row after {label} is {t_row:?}"));
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let spec = SynthSpec {
        seed: 2023,
        n_stocks: 60,
        n_days: 40,
        n_train_days: 5,
        reports_per_day: 15,
        ..SynthSpec::default()
    };
    let data = dir.path().join("data");
    if let Err(e) = cmd_synth(&spec, &data) {
        return fail(e.to_string());
    }
    let mut cfg = RunConfig::load(&data.join("config.toml")).unwrap();
    cfg.out = dir.path().join("out");
    if let Err(e) = cmd_analyze(&cfg) {
        return fail(e.to_string());
    }
    let read = |name: &str| std::fs::read_to_string(cfg.out.join(name)).unwrap();

    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut problems = Vec::new();
    for name in GOLDEN_FILES {
        let got = read(name);
        let path = golden.join(name);
        if update {
            std::fs::create_dir_all(&golden).unwrap();
            std::fs::write(&path, &got).unwrap();
        } else {
            match std::fs::read_to_string(&path) {
                Ok(want) if want == got => {}
                Ok(_) => problems.push(format!("{name} differs from its golden file")),
                Err(e) => problems.push(format!("{}: {e}", path.display())),
            }
        }
    }
    if let Err(e) = table3_layout(&read("table3.txt")) {
        problems.push(e);
    }
    let tex = read("table3.tex");
    if !tex.contains("* p-value $< 0.05$") || !tex.contains(&StarPreset::Table3.legend_tex()) {
        problems.push("table3.tex lacks the star legend".into());
    }
    let table5 = read("table5.txt");
    let rows = GROUP_TEST_LABELS
        .iter()
        .filter(|(_, label, _)| table5.lines().any(|l| l.starts_with(label)))
        .count();
    if rows != 6 {
        problems.push(format!("table5.txt has {rows} of 6 variable rows"));
    }
    if problems.is_empty() {
        pass(format!(
            "golden files match; 12 coefficient rows with t-stats in parentheses, star legend, six mean-test rows{}",
            if update { " (goldens rewritten)" } else { "" }
        ))
    } else {
        fail(problems.join("; "))
    }
}

fn criterion_9() -> Outcome {
    let (lx, words) = word_pool();
    let fixtures: [(&[&str], Label); 7] = [
        (&["增持", "看好", "下滑"], Label::Positive),
        (&["增持", "下滑"], Label::Neutral),
        (&["减值", "损失", "超预期"], Label::Negative),
        (&["稳步", "维持", "稳步", "增持"], Label::Positive),
        (&["稳步", "维持", "稳步"], Label::Neutral),
        (&["公司", "业绩"], Label::Neutral),
        (&[], Label::Neutral),
    ];
    for (tokens, want) in fixtures {
        let got = classify_majority(tokens, &lx);
        if got != want {
            return fail(format!("{tokens:?} classified {got:?}, expected {want:?}"));
        }
    }

    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    });
    let (pos_neg, full) = (Cell::new(0usize), Cell::new(0usize));
    let agree = runner.run(&tokens_strategy(words, 30), |tokens| {
        let c = lexicon_counts(&tokens, &lx);
        let class = classify_majority(&tokens, &lx);
        let s = lexicon_score(&tokens, &lx, 1.0).unwrap();
        if c.positive != c.negative {
            let by_score = if s.pos > s.neg {
                Label::Positive
            } else {
                Label::Negative
            };
            prop_assert_eq!(class, by_score, "{:?}", tokens);
            pos_neg.set(pos_neg.get() + 1);
            let distinct = c.positive != c.neutral && c.neutral != c.negative;
            if distinct && c.neutral < c.positive.max(c.negative) {
                let top = [
                    (s.pos, Label::Positive),
                    (s.neu, Label::Neutral),
                    (s.neg, Label::Negative),
                ]
                .into_iter()
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap()
                .1;
                prop_assert_eq!(class, top, "{:?}", tokens);
                full.set(full.get() + 1);
            }
        } else {
            prop_assert_eq!(class, Label::Neutral);
        }
        Ok(())
    });
    match agree {
        Ok(()) => pass(format!(
            "7 rule fixtures; agrees with the lexicon-score argmax over pos/neg on {} untied cases and with the full argmax on {} cases where neutral is not the top count",
            pos_neg.get(),
            full.get()
        )),
        Err(e) => fail(e.to_string()),
    }
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("range estimator oracle", criterion_1, Duration::from_secs(1)),
        ("labeling proportions", criterion_2, Duration::from_secs(5)),
        ("OLS oracle", criterion_3, Duration::from_secs(10)),
        ("planted-effect recovery", criterion_4, Duration::from_secs(300)),
        ("null calibration", criterion_5, Duration::from_secs(300)),
        ("simplex invariants", criterion_6, Duration::from_secs(1)),
        ("Welch t-test", criterion_7, Duration::from_secs(1)),
        ("table layout", criterion_8, Duration::from_secs(60)),
        ("majority classifier", criterion_9, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        let in_time = elapsed <= *budget;
        let ok = outcome.passed && in_time;
        failed += usize::from(!ok);
        let timing = if in_time { "" } else { ", over budget" };
        println!(
            "criterion {}: {} {name}: {} [{:.2}s of {}s{timing}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
