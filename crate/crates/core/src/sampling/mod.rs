//! Seeded sampling through the mixture/product representations of each law, and the
//! KS machinery used to check that different representations agree.

mod ks;
mod rng;

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::Serialize;

pub use ks::{
    ks_coefficient, ks_critical_value, ks_critical_value_two_sample, ks_statistic_one_sample, ks_statistic_two_sample,
    ks_test_one_sample, ks_test_two_sample, KsReport,
};
pub use rng::{derive_seed, Rng, GENERATOR_ID};

use crate::dist::{Distribution, DistributionSpec, GalShape};
use crate::error::{Error, Result};

type Dist64 = DistributionSpec<f64>;

/// How variates are constructed from normal, exponential and gamma draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "String")]
pub enum Representation {
    /// σ·Z₁·Z₂
    Product,
    /// σ·√S·Z with S = Z′² ~ χ²₁
    ChiMixture,
    /// s·(W₁ − W₂), W exponential
    Difference,
    /// s·√(2W)·Z
    NormalMixture,
    /// σ·√G·Z with G ~ gamma(τ, 1)
    GammaMixture,
    /// sum of n Laplace draws, each s·(W₁ − W₂)
    DirectSum,
    /// s·(G₁ − G₂) with G ~ gamma(n, 1)
    GammaDifference,
    /// ±s·Z²/2
    Square,
    /// σ·Φ⁻¹(U)
    InverseCdf,
    /// √a·√(U/a)·Z with U = σ²S, S ~ χ²₁
    Divisible(f64),
}

impl Representation {
    pub fn default_for(dist: &Dist64) -> Self {
        match dist {
            DistributionSpec::BesselK(_) => Representation::Product,
            DistributionSpec::ClassicalLaplace(_) => Representation::Difference,
            DistributionSpec::MartinMaas(_) => Representation::Square,
            DistributionSpec::SymmetricGAL(_) => Representation::GammaMixture,
            DistributionSpec::LaplaceMean(_) => Representation::DirectSum,
            DistributionSpec::ZeroMeanNormal(_) => Representation::InverseCdf,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Representation::Product => "product".into(),
            Representation::ChiMixture => "chi_mixture".into(),
            Representation::Difference => "difference".into(),
            Representation::NormalMixture => "normal_mixture".into(),
            Representation::GammaMixture => "gamma_mixture".into(),
            Representation::DirectSum => "direct_sum".into(),
            Representation::GammaDifference => "gamma_difference".into(),
            Representation::Square => "square".into(),
            Representation::InverseCdf => "inverse_cdf".into(),
            Representation::Divisible(a) => format!("divisible:a={a}"),
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl From<Representation> for String {
    fn from(r: Representation) -> String {
        r.name()
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "product" => Representation::Product,
            "chi_mixture" => Representation::ChiMixture,
            "difference" => Representation::Difference,
            "normal_mixture" => Representation::NormalMixture,
            "gamma_mixture" => Representation::GammaMixture,
            "direct_sum" => Representation::DirectSum,
            "gamma_difference" => Representation::GammaDifference,
            "square" => Representation::Square,
            "inverse_cdf" => Representation::InverseCdf,
            other => {
                let a = other
                    .strip_prefix("divisible:a=")
                    .and_then(|a| a.parse::<f64>().ok())
                    .filter(|a| *a > 0.0 && a.is_finite());
                match a {
                    Some(a) => Representation::Divisible(a),
                    None => {
                        return Err(Error::Parse {
                            input: s.into(),
                            detail: "unknown representation; expected one of product, chi_mixture, \
                                     difference, normal_mixture, gamma_mixture, direct_sum, \
                                     gamma_difference, square, inverse_cdf, divisible:a=<a>"
                                .into(),
                        })
                    }
                }
            }
        })
    }
}

/// A seeded sample plus everything needed to regenerate it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub generator_id: String,
    pub dist: Dist64,
    pub representation: Representation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub mean_std_error: f64,
    pub variance_std_error: f64,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn regenerate(&self) -> Result<SampleBatch> {
        sample(&self.dist, self.representation, self.values.len(), self.seed)
    }

    pub fn summary(&self) -> SampleSummary {
        summarize(&self.values)
    }

    /// Metadata as (key, value) pairs, in the order they are written to CSV.
    pub fn metadata(&self) -> Vec<(&'static str, String)> {
        vec![
            ("seed", self.seed.to_string()),
            ("generator_id", self.generator_id.clone()),
            ("dist", self.dist.to_string()),
            ("representation_id", self.representation.name()),
            ("n", self.values.len().to_string()),
        ]
    }

    /// Single-column CSV: `# key=value` header lines, a `value` header, then one
    /// value per row in 17-significant-digit scientific notation.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in self.metadata() {
            writeln!(w, "# {k}={v}")?;
        }
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["value"])?;
        for v in &self.values {
            wtr.write_record([format!("{v:.16e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Reads the value column of a CSV written by [`SampleBatch::write_csv`], skipping
/// `#` comment lines.
pub fn read_values_csv<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = rec.get(0).unwrap_or("");
        let v = field.trim().parse::<f64>().map_err(|e| Error::Io(format!("bad value {field:?}: {e}")))?;
        out.push(v);
    }
    Ok(out)
}

pub fn summarize(values: &[f64]) -> SampleSummary {
    let n = values.len();
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for &v in values {
        let d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    let variance = m2 / (nf - 1.0);
    let m4 = m4 / nf;
    let m2n = m2 / nf;
    SampleSummary {
        n,
        mean,
        variance,
        mean_std_error: (variance / nf).sqrt(),
        variance_std_error: ((m4 - m2n * m2n) / nf).sqrt(),
    }
}

fn unsupported(dist: &Dist64, r: Representation) -> Error {
    Error::Domain { func: "sample", detail: format!("representation {r} does not generate {dist}") }
}

/// Draws n variates of `dist` through `representation`.
pub fn sample(dist: &Dist64, representation: Representation, n: usize, seed: u64) -> Result<SampleBatch> {
    use Representation as R;
    if n == 0 {
        return Err(Error::domain("sample", "sample size must be >= 1"));
    }
    let mut rng = Rng::new(seed);
    let mut draw: Box<dyn FnMut(&mut Rng) -> f64> = match (dist, representation) {
        (DistributionSpec::BesselK(d), R::Product) => {
            let s = d.sigma();
            Box::new(move |r| s * r.normal() * r.normal())
        }
        (DistributionSpec::BesselK(d), R::ChiMixture) => {
            let s = d.sigma();
            Box::new(move |r| {
                let z1 = r.normal();
                s * (z1 * z1).sqrt() * r.normal()
            })
        }
        (DistributionSpec::BesselK(d), R::GammaMixture) => {
            let g = std::f64::consts::SQRT_2 * d.sigma();
            Box::new(move |r| g * r.gamma(0.5).sqrt() * r.normal())
        }
        (DistributionSpec::BesselK(d), R::Divisible(a)) => {
            let s2 = d.sigma() * d.sigma();
            Box::new(move |r| {
                let z1 = r.normal();
                let u = s2 * z1 * z1;
                a.sqrt() * (u / a).sqrt() * r.normal()
            })
        }
        (DistributionSpec::ClassicalLaplace(d), R::Difference) => {
            let (s, th) = (d.s(), d.theta());
            Box::new(move |r| th + s * (r.exponential() - r.exponential()))
        }
        (DistributionSpec::ClassicalLaplace(d), R::NormalMixture) => {
            let (s, th) = (d.s(), d.theta());
            Box::new(move |r| th + s * (2.0 * r.exponential()).sqrt() * r.normal())
        }
        (DistributionSpec::ClassicalLaplace(d), R::GammaMixture) => {
            let (s, th) = (d.s(), d.theta());
            let g = std::f64::consts::SQRT_2 * s;
            Box::new(move |r| th + g * r.gamma(1.0).sqrt() * r.normal())
        }
        (DistributionSpec::SymmetricGAL(d), R::GammaMixture) => {
            let (s, t) = (d.sigma(), d.tau());
            Box::new(move |r| s * r.gamma(t).sqrt() * r.normal())
        }
        (DistributionSpec::SymmetricGAL(d), R::Product | R::ChiMixture) if d.shape() == GalShape::HalfOdd(0) => {
            let b = Dist64::bessel(d.kernel_scale())?;
            return relabel(sample(&b, representation, n, seed)?, *dist);
        }
        (DistributionSpec::SymmetricGAL(d), R::DirectSum | R::GammaDifference) => {
            let GalShape::Integer(terms) = d.shape() else {
                return Err(unsupported(dist, representation));
            };
            return relabel(laplace_sum_values(terms, d.kernel_scale(), representation, n, seed)?, *dist);
        }
        (DistributionSpec::LaplaceMean(d), R::DirectSum | R::GammaDifference) => {
            let mut b = laplace_sum_values(d.n(), d.s(), representation, n, seed)?;
            let nt = f64::from(d.n());
            b.values.iter_mut().for_each(|v| *v /= nt);
            return relabel(b, *dist);
        }
        (DistributionSpec::LaplaceMean(d), R::GammaMixture) => {
            let nt = f64::from(d.n());
            let g = std::f64::consts::SQRT_2 * d.s() / nt;
            Box::new(move |r| g * r.gamma(nt).sqrt() * r.normal())
        }
        (DistributionSpec::MartinMaas(d), R::Square) => {
            let s = d.s();
            Box::new(move |r| {
                let z = r.normal();
                let sign = if r.uniform() < 0.5 { -1.0 } else { 1.0 };
                sign * s * z * z * 0.5
            })
        }
        (DistributionSpec::ZeroMeanNormal(d), R::InverseCdf) => {
            let s = d.sigma();
            Box::new(move |r| s * r.normal())
        }
        _ => return Err(unsupported(dist, representation)),
    };
    let values = (0..n).map(|_| draw(&mut rng)).collect();
    Ok(SampleBatch { values, seed, generator_id: GENERATOR_ID.to_string(), dist: *dist, representation })
}

fn relabel(mut b: SampleBatch, dist: Dist64) -> Result<SampleBatch> {
    b.dist = dist;
    Ok(b)
}

/// Sum of `terms` CL(0, s) variables; labelled as the equivalent GAL(√2 s, terms).
fn laplace_sum_values(terms: u32, s: f64, r: Representation, n: usize, seed: u64) -> Result<SampleBatch> {
    if terms == 0 {
        return Err(Error::domain("sample_laplace_sum", "number of terms must be >= 1"));
    }
    let dist = Dist64::gal(std::f64::consts::SQRT_2 * s, f64::from(terms))?;
    if n == 0 {
        return Err(Error::domain("sample", "sample size must be >= 1"));
    }
    let mut rng = Rng::new(seed);
    let shape = f64::from(terms);
    let values = (0..n)
        .map(|_| match r {
            Representation::DirectSum => (0..terms).map(|_| s * (rng.exponential() - rng.exponential())).sum(),
            _ => s * (rng.gamma(shape) - rng.gamma(shape)),
        })
        .collect();
    Ok(SampleBatch { values, seed, generator_id: GENERATOR_ID.to_string(), dist, representation: r })
}

pub fn sample_bessel(sigma: f64, n: usize, seed: u64, representation: Representation) -> Result<SampleBatch> {
    match representation {
        Representation::Product | Representation::ChiMixture => {}
        other => return Err(unsupported(&Dist64::bessel(sigma)?, other)),
    }
    sample(&Dist64::bessel(sigma)?, representation, n, seed)
}

pub fn sample_laplace(s: f64, n: usize, seed: u64) -> Result<SampleBatch> {
    sample(&Dist64::laplace(s)?, Representation::Difference, n, seed)
}

pub fn sample_gal(sigma: f64, tau: f64, n: usize, seed: u64) -> Result<SampleBatch> {
    sample(&Dist64::gal(sigma, tau)?, Representation::GammaMixture, n, seed)
}

/// T = Y₁ + … + Y_{n_terms} with Yᵢ ~ CL(0, s); the batch is labelled GAL(√2·s, n_terms).
pub fn sample_laplace_sum(
    n_terms: u32,
    s: f64,
    n: usize,
    seed: u64,
    representation: Representation,
) -> Result<SampleBatch> {
    match representation {
        Representation::DirectSum | Representation::GammaDifference => {}
        other => {
            return Err(Error::Domain {
                func: "sample_laplace_sum",
                detail: format!("representation {other} does not generate a Laplace sum"),
            })
        }
    }
    crate::dist::check_scale("LaplaceMean", "s", s)?;
    laplace_sum_values(n_terms, s, representation, n, seed)
}

/// Outcome of the sum-of-two-Bessel check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselSumReport {
    pub sigma: f64,
    /// KS of Y₁ + Y₂ against CL(0, σ), the law implied by the ch.f. 1/(1 + σ²t²).
    pub against_laplace_sigma: KsReport,
    /// KS of Y₁ + Y₂ against CL(0, σ/√2).
    pub against_laplace_sigma_over_sqrt2: KsReport,
}

impl BesselSumReport {
    /// The sum matches CL(0, σ) and the test has power to reject CL(0, σ/√2).
    pub fn passed(&self) -> bool {
        self.against_laplace_sigma.passed && !self.against_laplace_sigma_over_sqrt2.passed
    }
}

/// Draws Y₁ + Y₂ from two independent K(σ) batches (seeds `seed` and
/// `derive_seed(seed, 1)`) and runs one-sample KS tests at the 1% level against both
/// candidate Laplace scales.
pub fn verify_bessel_sum_is_laplace(sigma: f64, n: usize, seed: u64) -> Result<BesselSumReport> {
    if n < 10_000 {
        return Err(Error::domain("verify_bessel_sum_is_laplace", "need n >= 10^4"));
    }
    let y1 = sample_bessel(sigma, n, seed, Representation::Product)?;
    let y2 = sample_bessel(sigma, n, derive_seed(seed, 1), Representation::Product)?;
    let sum: Vec<f64> = y1.values.iter().zip(&y2.values).map(|(a, b)| a + b).collect();
    let full = Dist64::laplace(sigma)?;
    let reduced = Dist64::laplace(sigma / std::f64::consts::SQRT_2)?;
    Ok(BesselSumReport {
        sigma,
        against_laplace_sigma: ks_test_one_sample(&sum, |x| full.cdf(x), 0.01)?,
        against_laplace_sigma_over_sqrt2: ks_test_one_sample(&sum, |x| reduced.cdf(x), 0.01)?,
    })
}

/// One-sample KS of a batch against its own labelled law.
pub fn ks_against_own_law(batch: &SampleBatch, alpha: f64) -> Result<KsReport> {
    let d = batch.dist;
    ks_test_one_sample(&batch.values, |x| d.cdf(x), alpha)
}
