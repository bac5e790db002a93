use serde::{Deserialize, Serialize};

use super::dist::t_two_sided_p;
use crate::error::{Error, Result};

/// A column is treated as collinear when its Householder pivot falls below
/// this fraction of its own norm.
const RANK_TOLERANCE: f64 = 1e-10;

/// Dense `n x k` regressor matrix with named columns, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    names: Vec<String>,
    n: usize,
    k: usize,
    data: Vec<f64>,
}

impl Design {
    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let k = names.len();
        let mut data = Vec::with_capacity(rows.len() * k);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(Error::Argument(format!(
                    "design row {i} has {} values, expected {k}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            names,
            n: rows.len(),
            k,
            data,
        })
    }

    /// Same as [`Design::from_rows`] with a leading `constant` column of ones.
    pub fn with_intercept(names: &[&str], rows: &[Vec<f64>]) -> Result<Self> {
        let mut all = vec!["constant".to_string()];
        all.extend(names.iter().map(|s| s.to_string()));
        let rows: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| std::iter::once(1.0).chain(r.iter().copied()).collect())
            .collect();
        Self::from_rows(all, &rows)
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_cols(&self) -> usize {
        self.k
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.k + j]
    }

    fn has_intercept(&self) -> bool {
        (0..self.k).any(|j| (0..self.n).all(|i| self.get(i, j) == 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeType {
    /// `s^2 (X'X)^-1`
    #[default]
    Classical,
    /// White sandwich with the `n / (n - k)` correction (HC1).
    Robust,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub name: String,
    pub regressors: Vec<String>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub n_obs: usize,
    pub df_resid: usize,
    pub rss: f64,
    pub sigma: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub se_type: SeType,
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl RegressionFit {
    pub fn index_of(&self, regressor: &str) -> Option<usize> {
        self.regressors.iter().position(|r| r == regressor)
    }

    pub fn coefficient(&self, regressor: &str) -> Option<f64> {
        self.index_of(regressor).map(|i| self.coefficients[i])
    }

    pub fn t_stat(&self, regressor: &str) -> Option<f64> {
        self.index_of(regressor).map(|i| self.t_stats[i])
    }

    pub fn std_error(&self, regressor: &str) -> Option<f64> {
        self.index_of(regressor).map(|i| self.std_errors[i])
    }
}

/// Least squares by Householder QR.
pub fn ols_fit(name: &str, design: &Design, response: &[f64], se_type: SeType) -> Result<RegressionFit> {
    let (n, k) = (design.n, design.k);
    if response.len() != n {
        return Err(Error::Argument(format!(
            "{n} design rows but {} responses",
            response.len()
        )));
    }
    if k == 0 || n <= k {
        return Err(Error::Argument(format!(
            "{name}: {n} observations cannot identify {k} parameters"
        )));
    }
    if design.data.iter().chain(response).any(|v| !v.is_finite()) {
        return Err(Error::Argument(format!(
            "{name}: non-finite value in regression inputs"
        )));
    }

    // column-major working copy, reduced in place to R
    let mut a: Vec<Vec<f64>> = (0..k).map(|j| (0..n).map(|i| design.get(i, j)).collect()).collect();
    let col_norms: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    let mut qty = response.to_vec();
    let mut diag = vec![0.0; k];
    let mut deficient = Vec::new();

    for j in 0..k {
        let alpha_norm = norm(&a[j][j..]);
        if alpha_norm <= RANK_TOLERANCE * col_norms[j] || col_norms[j] == 0.0 {
            deficient.push(design.names[j].clone());
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -alpha_norm } else { alpha_norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        diag[j] = alpha;
        a[j][j] = alpha;
        for x in a[j][j + 1..].iter_mut() {
            *x = 0.0;
        }
        for col in a.iter_mut().skip(j + 1) {
            reflect(&v, vtv, &mut col[j..]);
        }
        reflect(&v, vtv, &mut qty[j..]);
    }
    if !deficient.is_empty() {
        return Err(Error::Singular { columns: deficient });
    }

    // R[i][j] = a[j][i] for i <= j
    let r = |i: usize, j: usize| if i == j { diag[i] } else { a[j][i] };

    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = qty[i];
        for j in i + 1..k {
            s -= r(i, j) * beta[j];
        }
        beta[i] = s / r(i, i);
    }

    // inverse of the upper-triangular R, row by row from the bottom
    let mut rinv = vec![vec![0.0; k]; k];
    for i in (0..k).rev() {
        rinv[i][i] = 1.0 / r(i, i);
        for j in i + 1..k {
            let mut s = 0.0;
            for m in i + 1..=j {
                s += r(i, m) * rinv[m][j];
            }
            rinv[i][j] = -s / r(i, i);
        }
    }
    // (X'X)^-1 = R^-1 R^-T
    let mut xtx_inv = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let start = i.max(j);
            xtx_inv[i][j] = (start..k).map(|m| rinv[i][m] * rinv[j][m]).sum();
        }
    }

    let residuals: Vec<f64> = (0..n)
        .map(|i| response[i] - design.row(i).iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>())
        .collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let df_resid = n - k;
    let s2 = rss / df_resid as f64;

    let variances: Vec<f64> = match se_type {
        SeType::Classical => (0..k).map(|i| s2 * xtx_inv[i][i]).collect(),
        SeType::Robust => {
            let mut meat = vec![vec![0.0; k]; k];
            for (i, e) in residuals.iter().enumerate() {
                let x = design.row(i);
                let w = e * e;
                for p in 0..k {
                    for q in p..k {
                        meat[p][q] += w * x[p] * x[q];
                    }
                }
            }
            for p in 0..k {
                for q in 0..p {
                    meat[p][q] = meat[q][p];
                }
            }
            let scale = n as f64 / df_resid as f64;
            (0..k)
                .map(|i| {
                    let row: Vec<f64> = (0..k)
                        .map(|q| (0..k).map(|p| xtx_inv[i][p] * meat[p][q]).sum())
                        .collect();
                    scale * (0..k).map(|q| row[q] * xtx_inv[q][i]).sum::<f64>()
                })
                .collect()
        }
    };
    let std_errors: Vec<f64> = variances.iter().map(|v| v.max(0.0).sqrt()).collect();
    let t_stats: Vec<f64> = beta.iter().zip(&std_errors).map(|(b, s)| b / s).collect();
    let p_values: Vec<f64> = t_stats.iter().map(|t| t_two_sided_p(*t, df_resid as f64)).collect();

    let tss = if design.has_intercept() {
        let mean = response.iter().sum::<f64>() / n as f64;
        response.iter().map(|y| (y - mean).powi(2)).sum::<f64>()
    } else {
        response.iter().map(|y| y * y).sum::<f64>()
    };
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
    let dof_model = if design.has_intercept() { 1.0 } else { 0.0 };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n as f64 - dof_model) / df_resid as f64;

    Ok(RegressionFit {
        name: name.to_string(),
        regressors: design.names.clone(),
        coefficients: beta,
        std_errors,
        t_stats,
        p_values,
        n_obs: n,
        df_resid,
        rss,
        sigma: s2.sqrt(),
        r_squared,
        adj_r_squared,
        se_type,
        residuals,
    })
}

fn norm(v: &[f64]) -> f64 {
    // scaled to avoid overflow on large columns
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

fn reflect(v: &[f64], vtv: f64, x: &mut [f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * dot / vtv;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}
