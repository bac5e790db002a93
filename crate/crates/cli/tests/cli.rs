use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reportsent"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn synth(dir: &Path, seed: u64, extra: &[&str]) -> PathBuf {
    let data = dir.join("data");
    let seed = seed.to_string();
    let mut args = vec!["synth", "--out", data.to_str().unwrap(), "--seed", &seed];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    data.join("config.toml")
}

const SMALL: [&str; 8] = [
    "--n-stocks",
    "40",
    "--n-days",
    "30",
    "--n-train-days",
    "10",
    "--reports-per-day",
    "10",
];

#[test]
fn every_verb_succeeds_on_synthetic_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synth(dir.path(), 1, &SMALL);
    let out = dir.path().join("out");
    for verb in ["ingest", "label", "score", "analyze"] {
        let o = run(&[verb, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{verb}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).starts_with(verb));
    }
    assert!(out.join("table3.txt").is_file());
    assert!(out.join("labels.csv").is_file());
}

#[test]
fn analyze_matches_the_golden_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synth(
        dir.path(),
        2023,
        &[
            "--n-stocks",
            "60",
            "--n-days",
            "40",
            "--n-train-days",
            "5",
            "--reports-per-day",
            "15",
        ],
    );
    let out = dir.path().join("out");
    let o = run(&[
        "analyze",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden");
    for name in ["table3.txt", "table3.tex", "table5.txt"] {
        assert_eq!(
            fs::read_to_string(out.join(name)).unwrap(),
            fs::read_to_string(golden.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synth(dir.path(), 2, &SMALL);
    let mut runs = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        for verb in ["ingest", "score", "analyze"] {
            assert_eq!(
                code(&run(&[
                    verb,
                    "--config",
                    cfg.to_str().unwrap(),
                    "--out",
                    out.to_str().unwrap()
                ])),
                0
            );
        }
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let p = e.unwrap().path();
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    fs::read(&p).unwrap(),
                )
            })
            .collect();
        files.sort();
        runs.push(files);
    }
    assert!(runs[0] == runs[1]);
}

#[test]
fn configuration_problems_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synth(dir.path(), 3, &SMALL);

    let text = fs::read_to_string(&cfg).unwrap();
    let train_end = text.lines().find(|l| l.starts_with("train_end")).unwrap();
    let test_start = text.lines().find(|l| l.starts_with("test_start")).unwrap();
    let overlapping = text.replace(train_end, &test_start.replace("test_start", "train_end"));
    let bad = dir.path().join("data/overlap.toml");
    fs::write(&bad, overlapping).unwrap();
    let o = run(&["analyze", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("configuration error"));

    let missing = dir.path().join("nope.toml");
    assert_eq!(code(&run(&["label", "--config", missing.to_str().unwrap()])), 1);

    let unknown = dir.path().join("data/unknown.toml");
    fs::write(&unknown, format!("{text}\nsurprise = true\n")).unwrap();
    assert_eq!(code(&run(&["ingest", "--config", unknown.to_str().unwrap()])), 1);

    assert_eq!(code(&run(&["synth"])), 1);
    assert_eq!(
        code(&run(&[
            "synth",
            "--out",
            dir.path().join("x").to_str().unwrap(),
            "--n-stocks",
            "3"
        ])),
        1
    );
}

#[test]
fn data_problems_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synth(dir.path(), 4, &SMALL);
    fs::write(dir.path().join("data/bars.csv"), "ticker,day,price\nx,y,z\n").unwrap();
    let o = run(&["ingest", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("data error"));
}

#[test]
fn degenerate_regressions_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synth(dir.path(), 5, &SMALL);
    let scores = dir.path().join("data/scores.csv");
    let flat: String = fs::read_to_string(&scores)
        .unwrap()
        .lines()
        .enumerate()
        .map(|(i, l)| {
            if i == 0 {
                format!("{l}\n")
            } else {
                format!("{},0.2,0.5,0.3\n", l.split(',').next().unwrap())
            }
        })
        .collect();
    fs::write(&scores, flat).unwrap();
    let o = run(&[
        "analyze",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("numerical failure"));
}

#[test]
fn flags_override_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = synth(dir.path(), 6, &SMALL);
    let out = dir.path().join("out");
    let o = run(&[
        "analyze",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--stars",
        "table4",
        "--se",
        "robust",
        "--ttest",
        "pooled",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table3 = fs::read_to_string(out.join("table3.txt")).unwrap();
    assert!(table3.contains("p-value < 0.1"), "{table3}");
    let fits = fs::read_to_string(out.join("fits.json")).unwrap();
    assert!(fits.contains("\"robust\""));
    let table5 = fs::read_to_string(out.join("table5.txt")).unwrap();
    assert!(!table5.contains("Welch"));
}
