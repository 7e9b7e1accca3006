use crate::real::Real;

const SERIES_LIMIT: f64 = 2.0;
const MAX_ITER: usize = 500;

/// erf(a) for a >= 0 via the all-positive series
/// erf(a) = (2/√π) e^{-a²} Σ 2^n a^{2n+1} / (2n+1)!!.
fn erf_series<T: Real>(a: T) -> T {
    let eps = T::epsilon() * T::lit(0.5);
    let two_a2 = T::lit(2.0) * a * a;
    let mut term = a;
    let mut sum = a;
    for n in 0..MAX_ITER {
        term = term * two_a2 / T::lit((2 * n + 3) as f64);
        sum = sum + term;
        if term <= eps * sum {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * (-a * a).exp() * sum
}

/// erfc(a) for a >= 2 via the even contraction of Laplace's continued fraction,
/// erfc(a) = (2a e^{-a²}/√π) / (2a²+1 - 1·2/(2a²+5 - 3·4/(2a²+9 - …))).
fn erfc_cf<T: Real>(a: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let eps = T::epsilon();
    let base = T::lit(2.0) * a * a + T::one();
    // modified Lentz
    let mut f = base;
    let mut c = base;
    let mut d = T::zero();
    for n in 1..MAX_ITER {
        let nf = T::from_usize_lossy(n);
        let an = -(T::lit(2.0) * nf - T::one()) * (T::lit(2.0) * nf);
        let bn = base + T::lit(4.0) * nf;
        d = bn + an * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = bn + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= eps {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * a * (-a * a).exp() / f
}

/// Error function; odd symmetry is exact.
pub fn erf<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let a = x.abs();
    let v = if a < T::lit(SERIES_LIMIT) {
        erf_series(a)
    } else if a < T::lit(6.5) {
        T::one() - erfc_cf(a)
    } else {
        T::one()
    };
    if x < T::zero() {
        -v
    } else {
        v
    }
}

/// Complementary error function, accurate in relative terms for large positive x.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::one() + erf(-x);
    }
    if x < T::lit(SERIES_LIMIT) {
        T::one() - erf_series(x)
    } else if x < T::lit(27.5) {
        erfc_cf(x)
    } else {
        T::zero()
    }
}

/// Standard normal CDF Φ(z).
pub fn normal_cdf<T: Real>(z: T) -> T {
    T::lit(0.5) * erfc(-z * T::FRAC_1_SQRT_2())
}

/// Standard normal survival function 1 - Φ(z).
pub fn normal_sf<T: Real>(z: T) -> T {
    T::lit(0.5) * erfc(z * T::FRAC_1_SQRT_2())
}

/// Φ⁻¹(q) for q in (0, 1/2], refined from the Abramowitz–Stegun 26.2.23 starting
/// point by Halley steps on the lower-tail CDF.
fn lower_tail_quantile<T: Real>(q: T) -> T {
    let t = (T::lit(-2.0) * q.ln()).sqrt();
    let num = T::lit(2.515_517) + t * (T::lit(0.802_853) + t * T::lit(0.010_328));
    let den = T::one() + t * (T::lit(1.432_788) + t * (T::lit(0.189_269) + t * T::lit(0.001_308)));
    let mut z = -(t - num / den);
    let sqrt_2pi = (T::TAU()).sqrt();
    for _ in 0..6 {
        let e = normal_cdf(z) - q;
        let u = e * sqrt_2pi * (z * z * T::lit(0.5)).exp();
        let step = u / (T::one() + z * u * T::lit(0.5));
        z = z - step;
        if step.abs() <= T::lit(4.0) * T::epsilon() * z.abs().max(T::one()) {
            break;
        }
    }
    z
}

/// Inverse standard normal CDF. Returns NaN outside (0, 1) and ±∞ at the endpoints.
pub fn inverse_normal_cdf<T: Real>(p: T) -> T {
    if p.is_nan() || p < T::zero() || p > T::one() {
        return T::nan();
    }
    if p == T::zero() {
        return T::neg_infinity();
    }
    if p == T::one() {
        return T::infinity();
    }
    let half = T::lit(0.5);
    if p == half {
        return T::zero();
    }
    if p < half {
        lower_tail_quantile(p)
    } else {
        -lower_tail_quantile(T::one() - p)
    }
}

/// Inverse of erfc on (0, 2).
pub fn erfc_inv<T: Real>(q: T) -> T {
    -inverse_normal_cdf(q * T::lit(0.5)) * T::FRAC_1_SQRT_2()
}
