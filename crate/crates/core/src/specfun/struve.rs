//! Modified Struve functions and the integral of K0.
//!
//! ∫₀ˣ K0(t) dt = (πx/2)[K0(x)L₋₁(x) + K1(x)L₀(x)], and ∫₀^∞ K0 = π/2.

use super::bessel::{bessel_k0, bessel_k1};
use super::{check_nonnegative, EvalAccuracy};
use crate::error::Result;
use crate::real::Real;

/// Above this argument [`k0_tail`] switches from the Struve closed form to the
/// Bickley-integral evaluation.
pub const K0_TAIL_SWITCH: f64 = 12.0;

const MAX_TERMS: usize = 2000;

fn series<T: Real>(first: T, ratio: impl Fn(T) -> T, acc: EvalAccuracy) -> T {
    let tol = T::lit(acc.rel_tol);
    let floor = T::lit(acc.abs_tol);
    let mut term = first;
    let mut sum = first;
    for k in 0..MAX_TERMS {
        term = term * ratio(T::from_usize_lossy(k));
        sum = sum + term;
        if term <= tol * sum || term <= floor {
            break;
        }
    }
    sum
}

/// L₀(x) = Σ (x/2)^{2k+1} / Γ(k+3/2)².
pub fn struve_l0<T: Real>(x: T) -> Result<T> {
    struve_l0_with(x, EvalAccuracy::default())
}

pub fn struve_l0_with<T: Real>(x: T, acc: EvalAccuracy) -> Result<T> {
    check_nonnegative("struve_l0", x)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    let q = x * x * T::lit(0.25);
    let first = T::lit(2.0) * x / T::PI();
    Ok(series(first, |k| q / ((k + T::lit(1.5)) * (k + T::lit(1.5))), acc))
}

/// L₋₁(x) = Σ (x/2)^{2k} / (Γ(k+1/2) Γ(k+3/2)).
pub fn struve_l_minus1<T: Real>(x: T) -> Result<T> {
    struve_l_minus1_with(x, EvalAccuracy::default())
}

pub fn struve_l_minus1_with<T: Real>(x: T, acc: EvalAccuracy) -> Result<T> {
    check_nonnegative("struve_l_minus1", x)?;
    let first = T::FRAC_2_PI();
    if x == T::zero() {
        return Ok(first);
    }
    let q = x * x * T::lit(0.25);
    Ok(series(first, |k| q / ((k + T::lit(0.5)) * (k + T::lit(1.5))), acc))
}

/// (πx/2)[k0·L₋₁(x) + k1·L₀(x)] for caller-supplied K0(x), K1(x) values.
pub fn k0_integral_from<T: Real>(x: T, k0: T, k1: T) -> Result<T> {
    let acc = EvalAccuracy::machine::<T>();
    let l_m1 = struve_l_minus1_with(x, acc)?;
    let l0 = struve_l0_with(x, acc)?;
    Ok(T::FRAC_PI_2() * x * (k0 * l_m1 + k1 * l0))
}

/// ∫₀ˣ K0(t) dt through the Struve closed form.
pub fn k0_integral<T: Real>(x: T) -> Result<T> {
    check_nonnegative("k0_integral", x)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    k0_integral_from(x, bessel_k0(x)?, bessel_k1(x)?)
}

/// ∫ₓ^∞ K0(t) dt as π/2 minus the Struve closed form. Loses relative accuracy
/// for large x through cancellation.
pub fn k0_tail_struve<T: Real>(x: T) -> Result<T> {
    check_nonnegative("k0_tail_struve", x)?;
    Ok(T::FRAC_PI_2() - k0_integral(x)?)
}

/// ∫ₓ^∞ K0(t) dt = Ki₁(x) = ∫₀^∞ e^{-x cosh u} / cosh u du, by the trapezoidal
/// rule, which converges geometrically for this even analytic integrand.
pub fn k0_tail_bickley<T: Real>(x: T) -> Result<T> {
    check_nonnegative("k0_tail_bickley", x)?;
    if x == T::zero() {
        return Ok(T::FRAC_PI_2());
    }
    // step ∝ 1/√x keeps the discretisation error below 1e-17 for x >= 1
    let h = T::lit(0.15).min(T::lit(0.5) / x.sqrt());
    let eps = T::epsilon() * T::lit(1e-2);
    let half = T::lit(0.5);
    let mut sum = half; // u = 0: e^0 / cosh 0, halved
    for j in 1..100_000 {
        let u = h * T::from_usize_lossy(j);
        let sh = (u * half).sinh();
        let g = (-x * T::lit(2.0) * sh * sh).exp() / u.cosh();
        sum = sum + g;
        if g < eps * sum {
            break;
        }
    }
    Ok(T::lit(2.0) * h * sum * (-x).exp() * half)
}

/// ∫ₓ^∞ K0(t) dt for x >= 0. Equals π/2 at the origin.
pub fn k0_tail<T: Real>(x: T) -> Result<T> {
    check_nonnegative("k0_tail", x)?;
    if x <= T::lit(K0_TAIL_SWITCH) {
        k0_tail_struve(x)
    } else {
        k0_tail_bickley(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

    #[test]
    fn values_at_origin() {
        assert_eq!(struve_l0(0.0_f64).unwrap(), 0.0);
        assert_eq!(struve_l_minus1(0.0_f64).unwrap(), FRAC_2_PI);
        assert_eq!(k0_tail(0.0_f64).unwrap(), FRAC_PI_2);
        assert_eq!(k0_integral(0.0_f64).unwrap(), 0.0);
    }

    #[test]
    fn reference_values() {
        // mpmath struvel(0, x), struvel(-1, x)
        let l0: f64 = struve_l0(1.0).unwrap();
        assert!((l0 - 0.710_243_185_937_890_9).abs() < 1e-13);
        let lm1: f64 = struve_l_minus1(1.0).unwrap();
        assert!((lm1 - 0.863_384_153_423_39).abs() < 1e-13);
    }

    #[test]
    fn l_minus1_bounded_below() {
        for &x in &[1e-6, 0.01, 0.5, 3.0] {
            assert!(struve_l_minus1(x).unwrap() > FRAC_2_PI);
        }
    }

    #[test]
    fn negative_arguments_rejected() {
        assert!(struve_l0(-1.0_f64).is_err());
        assert!(struve_l_minus1(-1.0_f64).is_err());
        assert!(k0_tail(-0.1_f64).is_err());
        assert!(k0_tail(f64::NAN).is_err());
    }

    #[test]
    fn branch_consistency_near_switch() {
        for &x in &[10.8, 11.5, 12.0, 12.5, 13.2] {
            let a: f64 = k0_tail_struve(x).unwrap();
            let b: f64 = k0_tail_bickley(x).unwrap();
            assert!((a / b - 1.0).abs() < 1e-9, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn bickley_matches_reference() {
        // mpmath quad(besselk(0,t), [x, inf])
        for &(x, want) in &[(1.0, 0.328_286_478_171_118_35), (30.0, 2.098_841_748_283_691e-14)] {
            let got: f64 = k0_tail_bickley(x).unwrap();
            assert!((got / want - 1.0).abs() < 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn tail_is_decreasing() {
        let mut prev = f64::INFINITY;
        let mut x = 0.0;
        while x < 40.0 {
            let t = k0_tail(x).unwrap();
            assert!(t < prev, "not decreasing at {x}");
            prev = t;
            x += 0.37;
        }
    }
}
