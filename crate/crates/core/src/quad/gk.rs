//! Globally adaptive 15-point Gauss–Kronrod integration on finite intervals.
#![allow(clippy::excessive_precision)]

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

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Kronrod estimate and `|K - G|` on `[a, b]`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

pub struct Adaptive {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Integrates `f` over the union of the given panels, refining the panel with
/// the largest error until the total error is below `abs_tol(total)`.
pub fn integrate_panels<F, T>(f: &F, edges: &[(f64, f64)], abs_tol: T, max_depth: u32) -> Adaptive
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let mut heap = BinaryHeap::new();
    for &(a, b) in edges {
        if b > a {
            let (value, error) = gk15(f, a, b);
            heap.push(Panel {
                a,
                b,
                value,
                error,
                depth: 0,
            });
        }
    }
    let max_panels = 20_000usize.max(4 * heap.len());
    let totals = |heap: &BinaryHeap<Panel>| heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    let (mut value, mut error) = totals(&heap);
    loop {
        if error <= abs_tol(value) || error.is_nan() {
            // Re-sum to drop the drift of the running totals.
            (value, error) = totals(&heap);
            if error <= abs_tol(value) || error.is_nan() {
                return Adaptive {
                    value,
                    error,
                    converged: error <= abs_tol(value),
                };
            }
        }
        let worst = match heap.peek() {
            Some(p) if p.depth < max_depth && heap.len() < max_panels => heap.pop().expect("peeked"),
            _ => {
                let (value, error) = totals(&heap);
                return Adaptive {
                    value,
                    error,
                    converged: error <= abs_tol(value),
                };
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(Panel {
                depth: max_depth,
                ..worst
            });
            continue;
        }
        value -= worst.value;
        error -= worst.error;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = gk15(f, a, b);
            value += v;
            error += e;
            heap.push(Panel {
                a,
                b,
                value: v,
                error: e,
                depth: worst.depth + 1,
            });
        }
        error = error.max(0.0);
    }
}
