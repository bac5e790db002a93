use serde::{Deserialize, Serialize};

use super::dist::t_two_sided_p;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestMode {
    /// Unequal variances, Welch–Satterthwaite degrees of freedom.
    #[default]
    Welch,
    /// Pooled variance, `n_a + n_b - 2` degrees of freedom.
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanTestResult {
    pub variable: String,
    pub mean_a: f64,
    pub sd_a: f64,
    pub n_a: usize,
    pub mean_b: f64,
    pub sd_b: f64,
    pub n_b: usize,
    pub t_stat: f64,
    pub df: f64,
    pub p_value: f64,
    pub mode: TTestMode,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sample test of `mean(a) - mean(b)`.
pub fn mean_difference_test(variable: &str, a: &[f64], b: &[f64], mode: TTestMode) -> Result<MeanTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Argument(format!(
            "{variable}: each group needs at least 2 values (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Argument(format!("{variable}: non-finite value in test groups")));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let diff = ma - mb;

    let (se2, df) = match mode {
        TTestMode::Welch => {
            let (qa, qb) = (va / na, vb / nb);
            let se2 = qa + qb;
            let denom = qa * qa / (na - 1.0) + qb * qb / (nb - 1.0);
            let df = if denom > 0.0 { se2 * se2 / denom } else { na + nb - 2.0 };
            (se2, df)
        }
        TTestMode::Pooled => {
            let df = na + nb - 2.0;
            let sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
            (sp2 * (1.0 / na + 1.0 / nb), df)
        }
    };

    let (t_stat, p_value) = if diff == 0.0 {
        (0.0, 1.0)
    } else if se2 == 0.0 {
        (diff.signum() * f64::INFINITY, 0.0)
    } else {
        let t = diff / se2.sqrt();
        (t, t_two_sided_p(t, df))
    };

    Ok(MeanTestResult {
        variable: variable.to_string(),
        mean_a: ma,
        sd_a: va.sqrt(),
        n_a: a.len(),
        mean_b: mb,
        sd_b: vb.sqrt(),
        n_b: b.len(),
        t_stat,
        df,
        p_value,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: [f64; 4] = [2.1, 2.5, 2.3, 2.7];
    const B: [f64; 3] = [1.1, 1.4, 1.2];

    #[test]
    fn welch_fixture() {
        let r = mean_difference_test("x", &A, &B, TTestMode::Welch).unwrap();
        assert!((r.t_stat - 7.462_025_072_446_364).abs() < 1e-10);
        assert!((r.df - 4.864_321_608_040_199).abs() < 1e-10);
        assert!((r.p_value - 7.685_454_258_006_665e-4).abs() < 1e-10);
        assert_eq!((r.n_a, r.n_b), (4, 3));
    }

    #[test]
    fn pooled_fixture() {
        let r = mean_difference_test("x", &A, &B, TTestMode::Pooled).unwrap();
        assert!((r.t_stat - 6.877_303_054_053_766).abs() < 1e-10);
        assert_eq!(r.df, 5.0);
    }

    #[test]
    fn identical_groups() {
        let r = mean_difference_test("x", &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], TTestMode::Welch).unwrap();
        assert_eq!(r.t_stat, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn constant_groups() {
        let r = mean_difference_test("x", &[2.0, 2.0], &[1.0, 1.0], TTestMode::Welch).unwrap();
        assert_eq!(r.t_stat, f64::INFINITY);
        assert_eq!(r.p_value, 0.0);
    }

    #[test]
    fn small_groups_rejected() {
        assert!(matches!(
            mean_difference_test("x", &[1.0], &[1.0, 2.0], TTestMode::Welch),
            Err(Error::Argument(_))
        ));
    }

    proptest! {
        #[test]
        fn swap_negates_and_shift_invariant(
            a in prop::collection::vec(-100.0f64..100.0, 2..30),
            b in prop::collection::vec(-100.0f64..100.0, 2..30),
            c in -50.0f64..50.0,
            pooled in any::<bool>(),
        ) {
            let mode = if pooled { TTestMode::Pooled } else { TTestMode::Welch };
            let ab = mean_difference_test("x", &a, &b, mode).unwrap();
            let ba = mean_difference_test("x", &b, &a, mode).unwrap();
            prop_assert_eq!(ab.t_stat, -ba.t_stat);
            let sa: Vec<f64> = a.iter().map(|x| x + c).collect();
            let sb: Vec<f64> = b.iter().map(|x| x + c).collect();
            let shifted = mean_difference_test("x", &sa, &sb, mode).unwrap();
            if ab.t_stat.is_finite() && ab.t_stat.abs() > 1e-6 {
                prop_assert!(((shifted.t_stat - ab.t_stat) / ab.t_stat).abs() < 1e-9);
            }
        }
    }
}
