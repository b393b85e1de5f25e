use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Scalar types the integrators accept.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    const ZERO: Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    const ZERO: f64 = 0.0;
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome<T> {
    pub value: T,
    pub error: f64,
    pub converged: bool,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Kronrod rule with the embedded 10-point Gauss rule, using the
/// QUADPACK error heuristic.
fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv1 = [T::ZERO; 10];
    let mut fv2 = [T::ZERO; 10];
    let mut rk = fc * WGK[10];
    let mut rg = T::ZERO;
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        rk = rk + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            rg = rg + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = rk * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    let mut abs = fc.norm() * WGK[10];
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
        abs += WGK[j] * (fv1[j].norm() + fv2[j].norm());
    }
    let habs = h.abs();
    let result = rk * h;
    let resasc = asc * habs;
    let resabs = abs * habs;
    let mut err = ((rk - rg) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol *
/// |I|)` or after `max_subdivisions` bisections; `converged` reports which.
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadOutcome<T> {
    if a == b {
        return QuadOutcome {
            value: T::ZERO,
            error: 0.0,
            converged: true,
        };
    }
    let (v, e) = gk21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut err = e;
    let mut splits = 0;
    loop {
        let tol = abs_tol.max(rel_tol * total.norm());
        if err <= tol {
            break;
        }
        if splits >= max_subdivisions {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a.min(seg.b) || m >= seg.a.max(seg.b) {
            heap.push(seg);
            break;
        }
        let (v1, e1) = gk21(&mut f, seg.a, m);
        let (v2, e2) = gk21(&mut f, m, seg.b);
        total = total - seg.value + v1 + v2;
        err = err - seg.error + e1 + e2;
        heap.push(Segment {
            a: seg.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: m,
            b: seg.b,
            value: v2,
            error: e2,
        });
        splits += 1;
    }
    // Re-sum to shed the rounding drift of the running updates.
    let mut value = T::ZERO;
    let mut error = 0.0;
    for s in heap.iter() {
        value = value + s.value;
        error += s.error;
    }
    let converged = error <= abs_tol.max(rel_tol * value.norm()) * 1.000_001;
    QuadOutcome {
        value,
        error,
        converged,
    }
}

/// `int_a^inf f(x) dx` via `x = a + t/(1-t)`.
pub fn integrate_to_infinity<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadOutcome<T> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x);
            if v.norm() == 0.0 {
                T::ZERO
            } else {
                v * (1.0 / (s * s))
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
        max_subdivisions,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_and_singular_integrands() {
        let r = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 1e-12, 50);
        assert!((r.value - 2.0).abs() < 1e-13 && r.converged);
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-12, 1e-12, 200);
        assert!((r.value - 2.0).abs() < 1e-10, "{}", r.value);
        let r = integrate_to_infinity(|x: f64| (-x).exp(), 0.0, 1e-13, 1e-13, 100);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(|x: f64| Complex64::new(0.0, x).exp(), 0.0, 1.0, 1e-14, 1e-14, 50);
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((r.value - exact).norm() < 1e-14);
    }
}
