//! Modified Bessel functions of the second kind.
//!
//! K0 and K1 use the logarithmic power series for x <= 2 and Steed's continued
//! fraction (Thompson & Barnett) above, which is accurate to a few ulps there.

use super::{check_positive, EvalAccuracy};
use crate::error::{Error, Result};
use crate::real::Real;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;
const MAX_ITER: usize = 1000;

/// Largest r accepted by [`bessel_k_half`].
pub const MAX_HALF_ORDER: u32 = 20;

/// (K0(x), K1(x)) from the small-argument series.
fn k01_series<T: Real>(x: T) -> (T, T) {
    let eps = T::lit(EvalAccuracy::machine::<T>().rel_tol);
    let half = T::lit(0.5);
    let y = x * x * T::lit(0.25);
    let log_term = (x * half).ln() + T::lit(EULER_GAMMA);

    // K0 = -(ln(x/2) + γ) I0(x) + Σ (y^k / k!²) H_k
    let mut term = T::one();
    let mut harmonic = T::zero();
    let mut i0 = T::one();
    let mut s0 = T::zero();
    // K1 = 1/x + ln(x/2) I1(x) - (x/4) Σ (ψ(k+1) + ψ(k+2)) y^k / (k!(k+1)!)
    let mut t1 = T::one();
    let mut i1_sum = T::one();
    let mut psi_sum = T::one() - T::lit(2.0 * EULER_GAMMA); // k = 0: ψ(1) + ψ(2)
    let mut h_next = T::one(); // H_{k+1}

    for k in 1..MAX_ITER {
        let kf = T::from_usize_lossy(k);
        term = term * y / (kf * kf);
        harmonic = harmonic + kf.recip();
        i0 = i0 + term;
        s0 = s0 + term * harmonic;

        t1 = t1 * y / (kf * (kf + T::one()));
        let h_k = h_next;
        h_next = h_next + (kf + T::one()).recip();
        i1_sum = i1_sum + t1;
        psi_sum = psi_sum + t1 * (h_k + h_next - T::lit(2.0 * EULER_GAMMA));

        if term <= eps * i0 && t1 <= eps * i1_sum {
            break;
        }
    }
    let k0 = -log_term * i0 + s0;
    let i1 = x * half * i1_sum;
    let k1 = x.recip() + (x * half).ln() * i1 - x * T::lit(0.25) * psi_sum;
    (k0, k1)
}

/// (e^x K0(x), e^x K1(x)) by Steed's algorithm for CF2; requires x > 1.
fn k01_cf2_scaled<T: Real>(x: T) -> (T, T) {
    let two = T::lit(2.0);
    let eps = T::epsilon();
    let mut a = T::lit(-0.25);
    let mut b = two * (x + T::one());
    let mut d = b.recip();
    let mut delta = d;
    let mut f = d;
    let mut prev = T::zero();
    let mut cur = T::one();
    let mut q = -a;
    let mut c = -a;
    let mut s = T::one() + q * delta;

    for k in 2..MAX_ITER {
        let kf = T::from_usize_lossy(k);
        a = a - two * (kf - T::one());
        b = b + two;
        d = (b + a * d).recip();
        delta = delta * (b * d - T::one());
        f = f + delta;

        let t = (prev - (b - two) * cur) / a;
        prev = cur;
        cur = t;
        c = c * (-a / kf);
        q = q + c * t;
        s = s + q * delta;
        if (q * delta).abs() < s.abs() * eps * T::lit(0.5) {
            break;
        }
    }
    let k0 = (T::PI() / (two * x)).sqrt() / s;
    let k1 = k0 * (T::lit(0.5) + x - T::lit(0.25) * f) / x;
    (k0, k1)
}

fn k01<T: Real>(x: T) -> (T, T) {
    if x <= T::lit(SERIES_LIMIT) {
        k01_series(x)
    } else {
        let (k0, k1) = k01_cf2_scaled(x);
        let e = (-x).exp();
        (k0 * e, k1 * e)
    }
}

fn k01_scaled<T: Real>(x: T) -> (T, T) {
    if x <= T::lit(SERIES_LIMIT) {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k01_cf2_scaled(x)
    }
}

/// K0(x) for x > 0. Underflows to 0 for very large x.
pub fn bessel_k0<T: Real>(x: T) -> Result<T> {
    check_positive("bessel_k0", x)?;
    Ok(k01(x).0)
}

/// K1(x) for x > 0.
pub fn bessel_k1<T: Real>(x: T) -> Result<T> {
    check_positive("bessel_k1", x)?;
    Ok(k01(x).1)
}

/// e^x K0(x), finite for every x > 0.
pub fn bessel_k0_scaled<T: Real>(x: T) -> Result<T> {
    check_positive("bessel_k0_scaled", x)?;
    Ok(k01_scaled(x).0)
}

/// e^x K1(x).
pub fn bessel_k1_scaled<T: Real>(x: T) -> Result<T> {
    check_positive("bessel_k1_scaled", x)?;
    Ok(k01_scaled(x).1)
}

/// Integer order K_n(x) by upward recurrence from K0 and K1.
pub fn bessel_kn<T: Real>(n: u32, x: T) -> Result<T> {
    check_positive("bessel_kn", x)?;
    let (mut prev, mut cur) = k01(x);
    if n == 0 {
        return Ok(prev);
    }
    for m in 1..n {
        let next = prev + T::lit(2.0 * f64::from(m)) / x * cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// K_{r+1/2}(x) as the finite sum of elementary functions
/// √(π/(2x)) e^{-x} Σ_{k=0}^{r} (r+k)! / ((r-k)! k!) (2x)^{-k}.
pub fn bessel_k_half<T: Real>(r: u32, x: T) -> Result<T> {
    check_positive("bessel_k_half", x)?;
    if r > MAX_HALF_ORDER {
        return Err(Error::Range {
            func: "bessel_k_half",
            detail: format!("order r = {r} exceeds the factorial cap {MAX_HALF_ORDER}"),
        });
    }
    let inv_2x = (T::lit(2.0) * x).recip();
    let mut coeff = T::one();
    let mut power = T::one();
    let mut sum = T::one();
    for k in 0..r {
        // (r+k+1)!/((r-k-1)!(k+1)!) from the k-th coefficient
        coeff = coeff * T::lit(f64::from(r + k + 1)) * T::lit(f64::from(r - k)) / T::lit(f64::from(k + 1));
        power = power * inv_2x;
        sum = sum + coeff * power;
    }
    Ok((T::PI() / (T::lit(2.0) * x)).sqrt() * (-x).exp() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 40-digit mpmath evaluations.
    const K0_REF: [(f64, f64); 6] = [
        (1e-8, 18.536_612_259_610_778),
        (0.1, 2.427_069_024_702_016_6),
        (1.0, 0.421_024_438_240_708_33),
        (2.0, 0.113_893_872_749_533_44),
        (5.0, 3.691_098_334_042_594_6e-3),
        (12.0, 2.200_825_397_311_491_4e-6),
    ];
    const K1_REF: [(f64, f64); 5] = [
        (0.1, 9.853_844_780_870_606),
        (1.0, 0.601_907_230_197_234_6),
        (2.0, 0.139_865_881_816_522_4),
        (5.0, 4.044_613_445_452_164e-3),
        (12.0, 2.290_757_464_767_187_8e-6),
    ];

    #[test]
    fn k0_reference_values() {
        for &(x, want) in &K0_REF {
            let got: f64 = bessel_k0(x).unwrap();
            assert!((got / want - 1.0).abs() < 1e-14, "K0({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn k1_reference_values() {
        for &(x, want) in &K1_REF {
            let got: f64 = bessel_k1(x).unwrap();
            assert!((got / want - 1.0).abs() < 1e-14, "K1({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn branches_meet_at_two() {
        let below = k01_series(2.0_f64);
        let e = (-2.0_f64).exp();
        let (a, b) = k01_cf2_scaled(2.0_f64);
        assert!((below.0 / (a * e) - 1.0).abs() < 1e-14);
        assert!((below.1 / (b * e) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_k0(0.0_f64).is_err());
        assert!(bessel_k0(-1.0_f64).is_err());
        assert!(bessel_k0(f64::NAN).is_err());
        assert!(bessel_k1(0.0_f64).is_err());
        assert!(bessel_k_half(0, 0.0_f64).is_err());
    }

    #[test]
    fn large_argument_underflows_to_zero() {
        assert_eq!(bessel_k0(800.0_f64).unwrap(), 0.0);
        assert!(bessel_k0(700.0_f64).unwrap() > 0.0);
        assert!(bessel_k0_scaled(800.0_f64).unwrap() > 0.0);
    }

    #[test]
    fn monotone_and_ordered() {
        let xs = [1e-6, 1e-3, 0.3, 1.0, 1.9, 2.1, 4.0, 10.0, 50.0];
        for w in xs.windows(2) {
            assert!(bessel_k0(w[0]).unwrap() > bessel_k0(w[1]).unwrap());
        }
        for &x in &xs {
            assert!(bessel_k1(x).unwrap() > bessel_k0(x).unwrap());
        }
    }

    #[test]
    fn half_order_small_cases() {
        let x = 1.3_f64;
        let r0: f64 = bessel_k_half(0, x).unwrap();
        assert_eq!(r0, (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp());
        let r1: f64 = bessel_k_half(1, 2.0).unwrap();
        // K_{3/2}(x) = √(π/(2x)) e^{-x} (1 + 1/x)
        let want = (std::f64::consts::PI / 4.0).sqrt() * (-2.0_f64).exp() * 1.5;
        assert!((r1 - want).abs() < 1e-16, "{r1} vs {want}");
        assert!(bessel_k_half(21, 1.0_f64).is_err());
        assert!(bessel_k_half(20, 1.0_f64).is_ok());
    }

    #[test]
    fn integer_order_recurrence() {
        // K2(x) = K0(x) + (2/x) K1(x)
        let x = 3.0_f64;
        let k2 = bessel_kn(2, x).unwrap();
        assert!((k2 - 6.151_045_847_174_204e-2).abs() < 1e-15);
    }

    #[test]
    fn single_precision_instantiation() {
        let k: f32 = bessel_k0(1.0_f32).unwrap();
        assert!((k - 0.421_024_44).abs() < 1e-6);
        let k: f32 = bessel_k1(5.0_f32).unwrap();
        assert!((k / 4.044_613_4e-3 - 1.0).abs() < 1e-5);
    }
}
