//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Used as the independent numerical route for normalising constants and as
//! the oracle the closed forms are checked against.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], 0).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 4000 }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` with default tolerances.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Integral {
    integrate_with(f, &[a, b], QuadConfig::default())
}

/// Integrates `f` over the range spanned by `points`, which are used as the
/// initial subdivision (they must be increasing).
pub fn integrate_with<F: Fn(f64) -> f64>(f: F, points: &[f64], cfg: QuadConfig) -> Integral {
    assert!(points.len() >= 2, "need at least two break points");
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let (mut total, mut err) = (0.0, 0.0);
    for w in points.windows(2) {
        let (value, error) = kronrod(&f, w[0], w[1]);
        evaluations += 15;
        total += value;
        err += error;
        heap.push(Segment { a: w[0], b: w[1], value, error });
    }
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= target || heap.len() >= cfg.max_intervals {
            let abs_error = heap.iter().map(|s| s.error).sum();
            return Integral { value: sum_sorted(&heap), abs_error, evaluations };
        }
        let worst = heap.pop().expect("heap is never empty");
        total -= worst.value;
        err -= worst.error;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            total += worst.value;
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod(&f, a, b);
            evaluations += 15;
            total += value;
            err += error;
            heap.push(Segment { a, b, value, error });
        }
        err = err.max(0.0);
    }
}

fn sum_sorted(heap: &BinaryHeap<Segment>) -> f64 {
    let mut values: Vec<f64> = heap.iter().map(|s| s.value).collect();
    values.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    values.iter().sum()
}

/// Iterated 2-D integral of `f(x, y)` over a rectangle.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x_points: &[f64],
    y_points: &[f64],
    cfg: QuadConfig,
) -> Integral {
    let evaluations = std::cell::Cell::new(0);
    let outer = integrate_with(
        |x| {
            let inner = integrate_with(|y| f(x, y), y_points, cfg);
            evaluations.set(evaluations.get() + inner.evaluations);
            inner.value
        },
        x_points,
        cfg,
    );
    Integral { evaluations: evaluations.get(), ..outer }
}

/// Break points `[-reach, .., -1, 0, 1, .., reach]` suited to densities with a
/// logistic tail: dense near the origin, geometric outward.
pub fn logistic_breaks(reach: f64) -> Vec<f64> {
    let mut right = vec![0.0];
    let mut x = 1.0;
    while x < reach {
        right.push(x);
        x *= 2.0;
    }
    right.push(reach);
    let mut all: Vec<f64> = right.iter().rev().map(|v| -v).collect();
    all.pop();
    all.extend(right);
    all
}
