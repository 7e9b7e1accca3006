use crate::real::Real;

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(z: T) -> T {
    // z is the shifted argument x - 1
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (z + T::from_usize_lossy(i));
    }
    acc
}

/// Natural log of |Γ(x)|.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::lit(0.5) {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (T::PI() * x).sin().abs();
        return T::PI().ln() - s.ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G + 0.5);
    T::lit(0.5) * (T::TAU()).ln() + (z + T::lit(0.5)) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for real x away from the poles at non-positive integers.
pub fn gamma<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::lit(0.5) {
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    if x == x.floor() && x <= T::lit(24.0) {
        let mut acc = T::one();
        let mut k = T::lit(2.0);
        while k < x {
            acc = acc * k;
            k = k + T::one();
        }
        return acc;
    }
    let z = x - T::one();
    let t = z + T::lit(LANCZOS_G + 0.5);
    (T::TAU()).sqrt() * t.powf(z + T::lit(0.5)) * (-t).exp() * lanczos_sum(z)
}
