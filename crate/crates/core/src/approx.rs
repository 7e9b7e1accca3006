//! Distances between fully specified laws, fitting the ancillary Laplace parameter
//! λ, quantile tables, and density crossover points.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::dist::{Distribution, DistributionSpec};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};

type Dist64 = DistributionSpec<f64>;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes a unimodal f on [a, b] until the bracket is narrower than `tol`.
/// Returns (x, f(x), iterations).
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iters = 0;
    while b - a > tol && iters < 500 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        iters += 1;
    }
    Ok(if fc <= fd { (c, fc, iters) } else { (d, fd, iters) })
}

fn support_scale(d1: &Dist64, d2: &Dist64) -> f64 {
    d1.scale_hint().max(d2.scale_hint())
}

fn location(d: &Dist64) -> f64 {
    d.moments().mean
}

/// sup_x |F₁(x) − F₂(x)|: a 2001-point grid over [0, 12σ_max] (both sides of the
/// origin when a law is shifted), then golden-section refinement to 1e-10 in x around
/// every grid local maximum.
pub fn ks_distance(d1: &Dist64, d2: &Dist64) -> Result<f64> {
    const GRID: usize = 2001;
    let reach = 12.0 * support_scale(d1, d2);
    let symmetric = d1.is_symmetric() && d2.is_symmetric();
    let (lo, hi) = if symmetric {
        (0.0, reach)
    } else {
        let shift = location(d1).abs().max(location(d2).abs());
        (-reach - shift, reach + shift)
    };
    let gap = |x: f64| -> Result<f64> { Ok((d1.cdf(x)? - d2.cdf(x)?).abs()) };
    let xs: Vec<f64> = (0..GRID).map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64).collect();
    let gs = xs.iter().map(|&x| gap(x)).collect::<Result<Vec<f64>>>()?;
    let mut best = gs.iter().copied().fold(0.0, f64::max);
    for i in 0..GRID {
        let left = if i > 0 { gs[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < GRID { gs[i + 1] } else { f64::NEG_INFINITY };
        if gs[i] > 0.0 && gs[i] >= left && gs[i] >= right {
            let a = xs[i.saturating_sub(1)];
            let b = xs[(i + 1).min(GRID - 1)];
            let (_, neg, _) = golden_section_min(|x| gap(x).map(|g| -g), a, b, 1e-10)?;
            best = best.max(-neg);
        }
    }
    Ok(best)
}

/// ∫|F₁ − F₂| dx over ℝ. Each half-line is truncated where both tails fall below 1e-13
/// and split at the sign changes of the integrand; symmetric pairs integrate one side
/// and double it.
pub fn wasserstein_distance(d1: &Dist64, d2: &Dist64) -> Result<f64> {
    const TAIL: f64 = 1e-13;
    let cfg = QuadratureConfig { rel_tol: 1e-11, abs_tol: 1e-12, ..QuadratureConfig::default() };
    let upper_reach = d1.isf(TAIL)?.max(d2.isf(TAIL)?).max(0.0);
    let upper = |x: f64| -> f64 {
        match (d1.sf(x), d2.sf(x)) {
            (Ok(a), Ok(b)) => a - b,
            _ => f64::NAN,
        }
    };
    let mut total = half_line(&upper, upper_reach, &cfg)?;
    if d1.is_symmetric() && d2.is_symmetric() {
        total *= 2.0;
    } else {
        let lower_reach = (-d1.quantile(TAIL)?).max(-d2.quantile(TAIL)?).max(0.0);
        let lower = |x: f64| -> f64 {
            match (d1.cdf(-x), d2.cdf(-x)) {
                (Ok(a), Ok(b)) => a - b,
                _ => f64::NAN,
            }
        };
        total += half_line(&lower, lower_reach, &cfg)?;
    }
    Ok(total)
}

/// ∫₀^{reach} |h|, split at the sign changes of h.
fn half_line<H: Fn(f64) -> f64>(h: &H, reach: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if reach <= 0.0 {
        return Ok(0.0);
    }
    let roots = sign_changes(h, 0.0, reach, 400)?;
    let cfg = cfg.clone().with_singularities(std::iter::once(0.0).chain(roots.iter().copied()));
    Ok(integrate(|x| h(x).abs(), 0.0, reach, &cfg)?.value)
}

/// Strict sign changes of h on an n-point grid over [a, b], each polished by bisection
/// to 1e-12. Grid points where h is not finite are skipped; exact zeros carry the last
/// nonzero sign forward.
fn sign_changes<H: Fn(f64) -> f64>(h: &H, a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let v = h(x);
        if !v.is_finite() || v == 0.0 {
            continue;
        }
        if let Some((xl, vl)) = last {
            if vl.signum() != v.signum() {
                roots.push(bisect(h, xl, x, vl)?);
            }
        }
        last = Some((x, v));
    }
    Ok(roots)
}

fn bisect<H: Fn(f64) -> f64>(h: &H, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let s = f_lo.signum();
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if !v.is_finite() {
            return Err(Error::RootFinding(format!("non-finite value at {mid} while bisecting")));
        }
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Points in (lo, hi) where pdf₁ − pdf₂ changes sign, located on a 10⁴-point grid.
pub fn pdf_crossings(d1: &Dist64, d2: &Dist64, domain: (f64, f64)) -> Result<Vec<f64>> {
    pdf_crossings_with(d1, d2, domain, 10_000)
}

pub fn pdf_crossings_with(d1: &Dist64, d2: &Dist64, domain: (f64, f64), grid: usize) -> Result<Vec<f64>> {
    let (lo, hi) = domain;
    if !(lo < hi) || grid < 2 {
        return Err(Error::domain("pdf_crossings", "need lo < hi and at least two grid points"));
    }
    let h = |x: f64| match (d1.pdf(x), d2.pdf(x)) {
        (Ok(a), Ok(b)) => a - b,
        _ => f64::NAN,
    };
    sign_changes(&h, lo, hi, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Ks,
    Wasserstein,
}

impl Metric {
    pub fn distance(&self, d1: &Dist64, d2: &Dist64) -> Result<f64> {
        match self {
            Metric::Ks => ks_distance(d1, d2),
            Metric::Wasserstein => wasserstein_distance(d1, d2),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Ks => "ks",
            Metric::Wasserstein => "wasserstein",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ks" => Ok(Metric::Ks),
            "wasserstein" | "w" => Ok(Metric::Wasserstein),
            _ => Err(Error::Parse { input: s.into(), detail: "metric must be ks or wasserstein".into() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub lambda_star: f64,
    pub distance_star: f64,
    pub metric: Metric,
    pub sigma: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

pub const DEFAULT_BRACKET: (f64, f64) = (1.0, 2.5);
const SCAN_POINTS: usize = 50;

/// λ minimizing the distance between K(σ) and CL(0, σ/λ): a 50-point scan of the
/// bracket that must be unimodal, then golden-section search to |Δλ| ≤ 1e-6.
pub fn fit_lambda(sigma: f64, metric: Metric, bracket: (f64, f64)) -> Result<FitResult> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::domain("fit_lambda", format!("need 0 < lo < hi, got ({lo}, {hi})")));
    }
    let bessel = Dist64::bessel(sigma)?;
    let objective = |lambda: f64| -> Result<f64> { metric.distance(&bessel, &Dist64::laplace_lambda(lambda, sigma)?) };
    let scan = (0..SCAN_POINTS)
        .map(|i| {
            let l = lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64;
            objective(l).map(|d| (l, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let imin = scan.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).map(|(i, _)| i).unwrap_or(0);
    let descending = scan[..=imin].windows(2).all(|w| w[1].1 <= w[0].1);
    let ascending = scan[imin..].windows(2).all(|w| w[1].1 >= w[0].1);
    if !descending || !ascending || imin == 0 || imin == SCAN_POINTS - 1 {
        return Err(Error::Ambiguous { scan });
    }
    let (lambda_star, distance_star, iterations) =
        golden_section_min(objective, scan[imin - 1].0, scan[imin + 1].0, 1e-6)?;
    Ok(FitResult { lambda_star, distance_star, metric, sigma, iterations: iterations + SCAN_POINTS, bracket })
}

/// (1 − α)-quantiles of several laws side by side, with percent deviations from a
/// reference column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileTable {
    pub alphas: Vec<f64>,
    pub columns: Vec<Dist64>,
    #[serde(skip)]
    pub reference: usize,
    pub values: Vec<Vec<f64>>,
    pub deviations_pct: Vec<Vec<f64>>,
}

pub const DEFAULT_ALPHAS: [f64; 5] = [0.5, 0.317, 0.1, 0.05, 0.01];

/// K(1); CL(0, 1/λ) for λ ∈ {1, √2, 1.54, 1.83, 2}; M(s) for s ∈ {1, 1.2, 1.5}.
pub fn default_columns() -> Vec<Dist64> {
    let mut cols = vec![Dist64::bessel(1.0).expect("valid")];
    for l in [1.0, std::f64::consts::SQRT_2, 1.54, 1.83, 2.0] {
        cols.push(Dist64::laplace_lambda(l, 1.0).expect("valid"));
    }
    for s in [1.0, 1.2, 1.5] {
        cols.push(Dist64::martin_maas(s).expect("valid"));
    }
    cols
}

pub fn quantile_table(alphas: &[f64], columns: &[Dist64], reference: usize) -> Result<QuantileTable> {
    if reference >= columns.len() {
        return Err(Error::domain("quantile_table", format!("reference column {reference} out of range")));
    }
    if alphas.is_empty() {
        return Err(Error::domain("quantile_table", "no alphas given"));
    }
    let values = alphas
        .iter()
        .map(|&a| columns.iter().map(|d| d.isf(a)).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<_>>>()?;
    let deviations_pct = values
        .iter()
        .map(|row| {
            let r = row[reference];
            row.iter().map(|&v| if r == 0.0 { 0.0 } else { 100.0 * (v / r - 1.0) }).collect()
        })
        .collect();
    Ok(QuantileTable { alphas: alphas.to_vec(), columns: columns.to_vec(), reference, values, deviations_pct })
}

impl QuantileTable {
    pub fn default_layout() -> Result<Self> {
        quantile_table(&DEFAULT_ALPHAS, &default_columns(), 0)
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["alpha".to_string()];
        h.extend(self.columns.iter().map(|c| c.to_string()));
        h.extend(self.columns.iter().map(|c| format!("dev_pct[{c}]")));
        h
    }

    /// alpha, one column per law, then one deviation column per law.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(self.header())?;
        for (i, a) in self.alphas.iter().enumerate() {
            let mut rec = vec![format!("{a:.16e}")];
            rec.extend(self.values[i].iter().map(|v| format!("{v:.16e}")));
            rec.extend(self.deviations_pct[i].iter().map(|v| format!("{v:.16e}")));
            wtr.write_record(rec)?;
        }
        wtr.flush()?;
        Ok(())
    }
}
