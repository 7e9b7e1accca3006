use serde::Serialize;

use crate::error::{Error, Result};

/// c(α) of the asymptotic Kolmogorov law, √(−ln(α/2)/2); c(0.01) = 1.6276.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

pub fn ks_critical_value(alpha: f64, n: usize) -> f64 {
    ks_coefficient(alpha) / (n as f64).sqrt()
}

pub fn ks_critical_value_two_sample(alpha: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub n: usize,
    /// Size of the second sample for two-sample tests.
    pub m: Option<usize>,
    pub passed: bool,
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::domain("ks_statistic", "empty sample"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::domain("ks_statistic", "sample contains NaN"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// sup |F_n − F| over the sample: max over i of i/n − F(x₍ᵢ₎) and F(x₍ᵢ₎) − (i−1)/n.
pub fn ks_statistic_one_sample<F>(values: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let v = sorted(values)?;
    let n = v.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x)?;
        let i = i as f64;
        d = d.max((i + 1.0) / n - f).max(f - i / n);
    }
    Ok(d)
}

/// sup |F_n − G_m| between two empirical CDFs; ties are stepped over together.
pub fn ks_statistic_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

pub fn ks_test_one_sample<F>(values: &[f64], cdf: F, alpha: f64) -> Result<KsReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let statistic = ks_statistic_one_sample(values, cdf)?;
    let critical_value = ks_critical_value(alpha, values.len());
    Ok(KsReport { statistic, critical_value, alpha, n: values.len(), m: None, passed: statistic < critical_value })
}

pub fn ks_test_two_sample(a: &[f64], b: &[f64], alpha: f64) -> Result<KsReport> {
    let statistic = ks_statistic_two_sample(a, b)?;
    let critical_value = ks_critical_value_two_sample(alpha, a.len(), b.len());
    Ok(KsReport { statistic, critical_value, alpha, n: a.len(), m: Some(b.len()), passed: statistic < critical_value })
}
