//! Brute-force numerical counterparts of the closed forms: quadrature of integral
//! representations and Monte-Carlo transforms. Deliberately independent of the
//! series and continued fractions in `specfun`.

use std::f64::consts::{FRAC_2_PI, PI};

use serde::Serialize;

use crate::dist::{Distribution, DistributionSpec};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::sampling::SampleBatch;
use crate::specfun::ln_gamma;

type Dist64 = DistributionSpec<f64>;

/// Density of the product of independent X and Y at z:
/// ∫ f_X(x) f_Y(z/x) dx/|x|, integrated on each half-line in u = ln|x|.
pub fn product_density<FX, FY>(f_x: FX, f_y: FY, z: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    FX: Fn(f64) -> f64,
    FY: Fn(f64) -> f64,
{
    let half = |sign: f64| {
        let g = |u: f64| {
            let x = sign * u.exp();
            let w = z / x;
            if !w.is_finite() {
                return 0.0;
            }
            f_x(x) * f_y(w)
        };
        integrate(g, f64::NEG_INFINITY, f64::INFINITY, &plain(cfg))
    };
    Ok(half(1.0)?.value + half(-1.0)?.value)
}

/// The same tolerances without singular splits (used after a change of variables
/// has moved the singularities away).
fn plain(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig { singularity_points: Vec::new(), ..cfg.clone() }
}

/// Bessel density as the compounding integral
/// (1/(πσ)) ∫₀^∞ e^{−y²/(2x²)} e^{−x²/(2σ²)} dx/x, with x = e^u.
pub fn compound_density(sigma: f64, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::param("BesselK", format!("sigma must be > 0, got {sigma}")));
    }
    if y == 0.0 {
        return Err(Error::Singularity { family: "BesselK", at: 0.0 });
    }
    let g = |u: f64| {
        let x2 = (2.0 * u).exp();
        (-y * y / (2.0 * x2) - x2 / (2.0 * sigma * sigma)).exp()
    };
    Ok(integrate(g, f64::NEG_INFINITY, f64::INFINITY, &plain(cfg))?.value / (PI * sigma))
}

/// ∫_{−∞}^{y} pdf, split at `cfg.singularity_points`.
pub fn cdf_by_quadrature<F: Fn(f64) -> f64>(pdf: F, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(integrate(pdf, f64::NEG_INFINITY, y, cfg)?.value)
}

/// ∫ x^k pdf(x) dx over ℝ, split at `cfg.singularity_points`.
pub fn moment_by_quadrature<F: Fn(f64) -> f64>(pdf: F, k: u32, cfg: &QuadratureConfig) -> Result<f64> {
    let g = |x: f64| {
        let p = pdf(x);
        if p == 0.0 {
            0.0
        } else {
            x.powi(k as i32) * p
        }
    };
    Ok(integrate(g, f64::NEG_INFINITY, f64::INFINITY, cfg)?.value)
}

/// A distribution's pdf as a plain closure; evaluation errors become NaN so that a
/// quadrature touching them fails loudly instead of integrating a hole.
pub fn pdf_fn(d: &Dist64) -> impl Fn(f64) -> f64 + '_ {
    move |y| d.pdf(y).unwrap_or(f64::NAN)
}

/// Quadrature settings with the distribution's singular points registered.
pub fn config_for(d: &Dist64) -> QuadratureConfig {
    QuadratureConfig::default().with_singularities(d.singular_points())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChfEstimate {
    /// Sample mean of cos(tY).
    pub estimate: f64,
    pub std_error: f64,
    /// Sample mean of sin(tY); zero in expectation for symmetric laws.
    pub sin_estimate: f64,
    pub sin_std_error: f64,
}

fn mean_and_se(it: impl Iterator<Item = f64>, n: f64) -> (f64, f64) {
    let (mut s, mut s2) = (0.0, 0.0);
    for v in it {
        s += v;
        s2 += v * v;
    }
    let m = s / n;
    let var = if n > 1.0 { ((s2 - n * m * m) / (n - 1.0)).max(0.0) } else { 0.0 };
    (m, (var / n).sqrt())
}

pub fn chf_by_monte_carlo(batch: &SampleBatch, t: f64) -> Result<ChfEstimate> {
    if batch.values.is_empty() {
        return Err(Error::domain("chf_by_monte_carlo", "empty batch"));
    }
    let n = batch.values.len() as f64;
    let (estimate, std_error) = mean_and_se(batch.values.iter().map(|&y| (t * y).cos()), n);
    let (sin_estimate, sin_std_error) = mean_and_se(batch.values.iter().map(|&y| (t * y).sin()), n);
    Ok(ChfEstimate { estimate, std_error, sin_estimate, sin_std_error })
}

/// Symmetric GAL density as the normal-variance mixture
/// ∫₀^∞ φ(y; 0, σ²w) w^{τ−1} e^{−w}/Γ(τ) dw, valid for every τ > 0.
pub fn gal_mixture_density(sigma: f64, tau: f64, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(sigma > 0.0) || !(tau > 0.0) {
        return Err(Error::param("SymmetricGAL", "sigma and tau must be > 0"));
    }
    if y == 0.0 && tau <= 0.5 {
        return Err(Error::Singularity { family: "SymmetricGAL", at: 0.0 });
    }
    let lg = ln_gamma(tau);
    // w = e^u removes the w^{τ−1} endpoint behaviour
    let g = |u: f64| {
        let w = u.exp();
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        let v = sigma * sigma * w;
        let ln = -y * y / (2.0 * v) - 0.5 * (2.0 * PI * v).ln() + tau * u - w - lg;
        ln.exp()
    };
    Ok(integrate(g, f64::NEG_INFINITY, f64::INFINITY, &plain(cfg))?.value)
}

/// K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt.
pub fn bessel_k_by_quadrature(nu: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("bessel_k_by_quadrature", "x must be > 0"));
    }
    // e^{x}-scaled integrand keeps large x representable
    let g = |t: f64| {
        let e = (-x * (t.cosh() - 1.0)).exp();
        if e == 0.0 {
            0.0
        } else {
            e * (nu * t).cosh()
        }
    };
    Ok(integrate(g, 0.0, f64::INFINITY, &plain(cfg))?.value * (-x).exp())
}

/// L₀(x) = (2/π) ∫₀^{π/2} sinh(x cos θ) dθ.
pub fn struve_l0_by_quadrature(x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(FRAC_2_PI * integrate(|th: f64| (x * th.cos()).sinh(), 0.0, PI / 2.0, &plain(cfg))?.value)
}

/// L₋₁(x) = L₁(x) + 2/π with L₁(x) = (2x/π) ∫₀^{π/2} sinh(x cos θ) sin²θ dθ.
pub fn struve_l_minus1_by_quadrature(x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let l1 = integrate(|th: f64| (x * th.cos()).sinh() * th.sin().powi(2), 0.0, PI / 2.0, &plain(cfg))?;
    Ok(FRAC_2_PI * x * l1.value + FRAC_2_PI)
}

/// ∫ₓ^∞ K0(t) dt with K0 itself from its integral representation.
pub fn k0_tail_by_quadrature(x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    // swap the order: ∫ₓ^∞ ∫₀^∞ e^{−t cosh u} du dt = ∫₀^∞ e^{−x cosh u}/cosh u du
    let g = |u: f64| {
        let c = u.cosh();
        if x == 0.0 {
            c.recip()
        } else {
            (-x * (c - 1.0)).exp() / c
        }
    };
    Ok(integrate(g, 0.0, f64::INFINITY, &plain(cfg))?.value * (-x).exp())
}

/// erf(x) = (2/√π) ∫₀ˣ e^{−t²} dt.
pub fn erf_by_quadrature(x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(2.0 / PI.sqrt() * integrate(|t: f64| (-t * t).exp(), 0.0, x, &plain(cfg))?.value)
}
