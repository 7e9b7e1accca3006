//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Infinite ranges are mapped with x = a ± t/(1-t²). Listed singular points split the
//! range, and every sub-range adjacent to one is integrated through x = a + w·v², which
//! removes 1/√x singularities and flattens logarithmic ones.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::real::Real;

const XGK: [f64; 8] = [
    0.0,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.991_455_371_120_812_639_206_854_697_526_329,
];
const WGK: [f64; 8] = [
    0.209_482_141_084_727_828_012_999_174_891_714,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.022_935_322_010_529_224_963_732_008_058_970,
];
// Gauss weights for XGK[0], XGK[2], XGK[4], XGK[6]
const WG: [f64; 4] = [
    0.417_959_183_673_469_387_755_102_040_816_327,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.129_484_966_168_869_693_270_611_432_679_082,
];

/// Tolerances and splitting policy for every oracle integral.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub singularity_points: Vec<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-12, abs_tol: 1e-13, max_subdivisions: 4000, singularity_points: Vec::new() }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 10 {
            return Err(Error::domain("QuadratureConfig::new", "tolerances must be > 0 and max_subdivisions >= 10"));
        }
        Ok(QuadratureConfig { rel_tol, abs_tol, max_subdivisions, singularity_points: Vec::new() })
    }

    pub fn with_singularities(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.singularity_points.extend(points);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub subdivisions: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map<T> {
    Finite,
    Upper(T), // [origin, ∞)
    Lower(T), // (-∞, origin]
    Whole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Endpoint {
    Regular,
    SingularLeft,
    SingularRight,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    map: Map<T>,
    lo: T,
    hi: T,
    ends: Endpoint,
}

impl<T: Real> Segment<T> {
    /// Integrand in the segment's own variable v ∈ [0, 1].
    fn eval<F: Fn(T) -> T>(&self, f: &F, v: T) -> T {
        let width = self.hi - self.lo;
        let (t, dt) = match self.ends {
            Endpoint::Regular => (self.lo + width * v, width),
            Endpoint::SingularLeft => (self.lo + width * v * v, T::lit(2.0) * width * v),
            Endpoint::SingularRight => {
                let w = T::one() - v;
                (self.hi - width * w * w, T::lit(2.0) * width * w)
            }
        };
        let (x, dx) = match self.map {
            Map::Finite => (t, T::one()),
            Map::Upper(o) => {
                let d = T::one() - t * t;
                (o + t / d, (T::one() + t * t) / (d * d))
            }
            Map::Lower(o) => {
                let d = T::one() - t * t;
                (o - t / d, (T::one() + t * t) / (d * d))
            }
            Map::Whole => {
                let d = T::one() - t * t;
                (t / d, (T::one() + t * t) / (d * d))
            }
        };
        if !x.is_finite() {
            return T::zero();
        }
        let fx = f(x);
        // a decayed integrand times the map's exploding Jacobian would give 0·∞
        if fx == T::zero() {
            return T::zero();
        }
        fx * dx * dt
    }
}

struct Piece<T> {
    seg: usize,
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Piece<T> {}
impl<T: Real> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn gk15<T: Real, G: Fn(T) -> T>(g: &G, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = g(center);
    let mut resk = fc * T::lit(WGK[0]);
    let mut resg = fc * T::lit(WG[0]);
    let mut resabs = resk.abs();
    let mut f1s = [T::zero(); 8];
    let mut f2s = [T::zero(); 8];
    for i in 1..8 {
        let dx = half * T::lit(XGK[i]);
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        f1s[i] = f1;
        f2s[i] = f2;
        resk = resk + T::lit(WGK[i]) * (f1 + f2);
        resabs = resabs + T::lit(WGK[i]) * (f1.abs() + f2.abs());
        if i % 2 == 0 {
            resg = resg + T::lit(WG[i / 2]) * (f1 + f2);
        }
    }
    let mean = resk * T::lit(0.5);
    let mut resasc = T::lit(WGK[0]) * (fc - mean).abs();
    for i in 1..8 {
        resasc = resasc + T::lit(WGK[i]) * ((f1s[i] - mean).abs() + (f2s[i] - mean).abs());
    }
    let h = half.abs();
    let value = resk * half;
    resabs = resabs * h;
    resasc = resasc * h;
    let mut err = ((resk - resg) * half).abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = resasc * scale.min(T::one());
    }
    let eps50 = T::lit(50.0) * T::epsilon();
    if resabs > T::min_positive_value() / eps50 {
        err = err.max(eps50 * resabs);
    }
    (value, err)
}

fn build_segments<T: Real>(a: T, b: T, singular: &[T]) -> Vec<Segment<T>> {
    let mut cuts: Vec<T> = singular.iter().copied().filter(|&s| s > a && s < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.dedup();
    let is_singular = |x: T| singular.contains(&x);

    let mut points = vec![a];
    points.extend(cuts);
    points.push(b);

    let mut segs = Vec::new();
    for w in points.windows(2) {
        let (l, r) = (w[0], w[1]);
        let (map, lo, hi) = match (l.is_finite(), r.is_finite()) {
            (true, true) => (Map::Finite, l, r),
            (true, false) => (Map::Upper(l), T::zero(), T::one()),
            (false, true) => (Map::Lower(r), T::zero(), T::one()),
            (false, false) => (Map::Whole, -T::one(), T::one()),
        };
        // For Lower maps t = 0 corresponds to the right end.
        let (left_sing, right_sing) = match map {
            Map::Finite => (is_singular(l), is_singular(r)),
            Map::Upper(_) => (is_singular(l), false),
            Map::Lower(_) => (is_singular(r), false),
            Map::Whole => (false, false),
        };
        match (left_sing, right_sing) {
            (false, false) => segs.push(Segment { map, lo, hi, ends: Endpoint::Regular }),
            (true, false) => segs.push(Segment { map, lo, hi, ends: Endpoint::SingularLeft }),
            (false, true) => segs.push(Segment { map, lo, hi, ends: Endpoint::SingularRight }),
            (true, true) => {
                let mid = (lo + hi) * T::lit(0.5);
                segs.push(Segment { map, lo, hi: mid, ends: Endpoint::SingularLeft });
                segs.push(Segment { map, lo: mid, hi, ends: Endpoint::SingularRight });
            }
        }
    }
    segs
}

/// ∫_a^b f(x) dx, where either limit may be infinite.
pub fn integrate<T, F>(f: F, a: T, b: T, cfg: &QuadratureConfig) -> Result<QuadResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if a.is_nan() || b.is_nan() {
        return Err(Error::domain("integrate", "NaN integration limit"));
    }
    if a == b {
        return Ok(QuadResult { value: T::zero(), error: T::zero(), subdivisions: 0, evaluations: 0 });
    }
    if a > b {
        let r = integrate(f, b, a, cfg)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    let singular: Vec<T> = cfg.singularity_points.iter().map(|&s| T::lit(s)).collect();
    let segs = build_segments(a, b, &singular);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    let mut total = T::zero();
    let mut total_err = T::zero();
    const INITIAL_SPLIT: usize = 4;
    for (i, seg) in segs.iter().enumerate() {
        let g = |v: T| seg.eval(&f, v);
        for k in 0..INITIAL_SPLIT {
            let pa = T::from_usize_lossy(k) / T::from_usize_lossy(INITIAL_SPLIT);
            let pb = T::from_usize_lossy(k + 1) / T::from_usize_lossy(INITIAL_SPLIT);
            let (value, error) = gk15(&g, pa, pb);
            evaluations += 15;
            total = total + value;
            total_err = total_err + error;
            heap.push(Piece { seg: i, a: pa, b: pb, value, error });
        }
    }

    let abs_tol = T::lit(cfg.abs_tol);
    let rel_tol = T::lit(cfg.rel_tol);
    let mut subdivisions = 0usize;
    while total_err > abs_tol.max(rel_tol * total.abs()) {
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::QuadratureFailure { estimate: total.as_f64(), error: total_err.as_f64(), subdivisions });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = (worst.a + worst.b) * T::lit(0.5);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in this precision
            return Err(Error::QuadratureFailure { estimate: total.as_f64(), error: total_err.as_f64(), subdivisions });
        }
        let seg = &segs[worst.seg];
        let g = |v: T| seg.eval(&f, v);
        let (v1, e1) = gk15(&g, worst.a, mid);
        let (v2, e2) = gk15(&g, mid, worst.b);
        evaluations += 30;
        subdivisions += 1;
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        heap.push(Piece { seg: worst.seg, a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { seg: worst.seg, a: mid, b: worst.b, value: v2, error: e2 });
        if subdivisions.is_multiple_of(64) {
            // resum to shed accumulated rounding in the running totals
            total = heap.iter().fold(T::zero(), |acc, p| acc + p.value);
            total_err = heap.iter().fold(T::zero(), |acc, p| acc + p.error);
        }
    }
    let value = heap.iter().fold(T::zero(), |acc, p| acc + p.value);
    let error = heap.iter().fold(T::zero(), |acc, p| acc + p.error);
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::QuadratureFailure { estimate: value.as_f64(), error: error.as_f64(), subdivisions });
    }
    Ok(QuadResult { value, error, subdivisions, evaluations })
}
