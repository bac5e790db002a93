//! Oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::path::{Path, PathBuf};

use reportsent::econometrics::Design;
use reportsent::pipeline::{cmd_synth, RunConfig};
use reportsent::synthkit::{GroundTruth, SynthSpec};

/// OLS through `(X'X) b = X'y`, solved by Gaussian elimination with partial
/// pivoting. Deliberately a different route from the library's QR.
pub struct NormalEquations {
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub xtx_inv: Vec<Vec<f64>>,
}

fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..k {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..2 * k {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[k..].to_vec()).collect()
}

impl NormalEquations {
    pub fn solve(design: &Design, y: &[f64]) -> Self {
        let (n, k) = (design.n_rows(), design.n_cols());
        let mut xtx = vec![vec![0.0; k]; k];
        let mut xty = vec![0.0; k];
        for i in 0..n {
            let r = design.row(i);
            for p in 0..k {
                xty[p] += r[p] * y[i];
                for q in 0..k {
                    xtx[p][q] += r[p] * r[q];
                }
            }
        }
        let inv = invert(&xtx);
        let beta: Vec<f64> = (0..k).map(|p| (0..k).map(|q| inv[p][q] * xty[q]).sum()).collect();
        let rss: f64 = (0..n)
            .map(|i| {
                let fitted: f64 = design.row(i).iter().zip(&beta).map(|(x, b)| x * b).sum();
                (y[i] - fitted).powi(2)
            })
            .sum();
        let s2 = rss / (n - k) as f64;
        let se = (0..k).map(|p| (s2 * inv[p][p]).sqrt()).collect();
        Self { beta, se, xtx_inv: inv }
    }

    /// HC1 standard errors.
    pub fn hc1(&self, design: &Design, y: &[f64]) -> Vec<f64> {
        let (n, k) = (design.n_rows(), design.n_cols());
        let mut meat = vec![vec![0.0; k]; k];
        for i in 0..n {
            let r = design.row(i);
            let e = y[i] - r.iter().zip(&self.beta).map(|(x, b)| x * b).sum::<f64>();
            for p in 0..k {
                for q in 0..k {
                    meat[p][q] += e * e * r[p] * r[q];
                }
            }
        }
        let c = &self.xtx_inv;
        (0..k)
            .map(|j| {
                let v: f64 = (0..k)
                    .flat_map(|p| (0..k).map(move |q| (p, q)))
                    .map(|(p, q)| c[j][p] * meat[p][q] * c[q][j])
                    .sum();
                (v * n as f64 / (n - k) as f64).sqrt()
            })
            .collect()
    }
}

/// Small synthetic dataset written to `dir/data`, with its run configuration
/// pointed at `dir/out`.
pub fn small_dataset(dir: &Path, seed: u64) -> (RunConfig, GroundTruth) {
    let spec = SynthSpec {
        seed,
        n_stocks: 40,
        n_days: 30,
        n_train_days: 10,
        reports_per_day: 10,
        ..SynthSpec::default()
    };
    let data = dir.join("data");
    let truth = cmd_synth(&spec, &data).unwrap();
    let mut cfg = RunConfig::load(&data.join("config.toml")).unwrap();
    cfg.out = dir.join("out");
    (cfg, truth)
}

pub fn read_dir_sorted(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            (PathBuf::from(p.file_name().unwrap()), bytes)
        })
        .collect()
}
