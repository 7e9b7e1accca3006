//! Real-valued special functions behind every closed form in the crate.
//!
//! Everything here is pure and deterministic; no function keeps state between calls.

mod bessel;
mod erf;
mod gamma;
mod struve;

pub use bessel::{bessel_k0, bessel_k0_scaled, bessel_k1, bessel_k1_scaled, bessel_k_half, bessel_kn, MAX_HALF_ORDER};
pub use erf::{erf, erfc, erfc_inv, inverse_normal_cdf, normal_cdf, normal_sf};
pub use gamma::{gamma, ln_gamma};
pub use struve::{
    k0_integral, k0_integral_from, k0_tail, k0_tail_bickley, k0_tail_struve, struve_l0, struve_l0_with,
    struve_l_minus1, struve_l_minus1_with, K0_TAIL_SWITCH,
};

use crate::error::{Error, Result};
use crate::real::Real;

/// Truncation targets for the convergent series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalAccuracy {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        EvalAccuracy { rel_tol: 1e-12, abs_tol: 1e-300 }
    }
}

impl EvalAccuracy {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol >= 0.0) {
            return Err(Error::domain(
                "EvalAccuracy::new",
                format!("need rel_tol > 0 and abs_tol >= 0, got ({rel_tol}, {abs_tol})"),
            ));
        }
        Ok(EvalAccuracy { rel_tol, abs_tol })
    }

    /// Series run until terms drop below half an ulp of the partial sum.
    pub fn machine<T: Real>() -> Self {
        EvalAccuracy { rel_tol: T::epsilon().as_f64() * 0.5, abs_tol: 0.0 }
    }
}

pub(crate) fn check_positive<T: Real>(func: &'static str, x: T) -> Result<()> {
    if x.is_nan() || x <= T::zero() {
        return Err(Error::domain(func, format!("argument must be > 0, got {x}")));
    }
    Ok(())
}

pub(crate) fn check_nonnegative<T: Real>(func: &'static str, x: T) -> Result<()> {
    if x.is_nan() || x < T::zero() {
        return Err(Error::domain(func, format!("argument must be >= 0, got {x}")));
    }
    Ok(())
}
