//! Reference values computed by routes deliberately unlike the library's:
//! double-exponential (tanh-sinh) quadrature of defining integrals, plain
//! power series, and classical closed forms. Nothing here calls the library.

use num_complex::Complex64;
use std::f64::consts::PI;

pub mod closed_form;

/// Tanh-sinh quadrature of `f` over `[a, b]`, split into `pieces` equal
/// subintervals (needed for oscillatory integrands). `f` receives the
/// abscissa together with its distance from the nearer endpoint of the
/// piece, so integrands singular at an endpoint can be evaluated accurately.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, pieces: usize, tol: f64) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let w = (b - a) / pieces as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..pieces {
        let lo = a + p as f64 * w;
        let hi = if p + 1 == pieces { b } else { lo + w };
        total += tanh_sinh_piece(&mut f, lo, hi, tol);
    }
    total
}

fn tanh_sinh_piece<F>(f: &mut F, a: f64, b: f64, tol: f64) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let eval = |f: &mut F, t: f64| -> Complex64 {
        let s = 0.5 * PI * t.sinh();
        let e = (-2.0 * s.abs()).exp();
        let dist = 2.0 * half * e / (1.0 + e);
        let weight = 0.5 * PI * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if dist <= 0.0 || weight == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = if t < 0.0 { a + dist } else { b - dist };
        if x <= a || x >= b {
            return Complex64::new(0.0, 0.0);
        }
        f(x) * (weight * half)
    };
    let tmax = 6.5;
    let mut h = 0.5;
    let mut sum = eval(f, 0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        sum += eval(f, t) + eval(f, -t);
        k += 1;
    }
    let mut est = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            sum += eval(f, t) + eval(f, -t);
            k += 2;
        }
        let next = sum * h;
        let diff = (next - est).norm();
        est = next;
        if diff <= tol * est.norm().max(1e-300) {
            break;
        }
    }
    est
}

/// `Gamma(a)` by the Stirling series with upward recurrence; independent
/// of the Lanczos approximation used by the library.
pub fn gamma(a: f64) -> f64 {
    if a < 0.5 {
        return PI / ((PI * a).sin() * gamma(1.0 - a));
    }
    let mut x = a;
    let mut prod = 1.0;
    while x < 15.0 {
        prod *= x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2
                * (1.0 / 360.0
                    - inv2
                        * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0 - inv2 * 691.0 / 360_360.0)))));
    ((x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series).exp() / prod
}

/// `Gamma(a, z)` by integrating along the horizontal ray `z + tau`.
pub fn gamma_upper_inc(a: f64, z: Complex64) -> Complex64 {
    // tau = y/(1-y) maps [0, inf) to [0, 1).
    let g = |y: f64| {
        let s = 1.0 - y;
        let tau = y / s;
        let t = z + tau;
        t.powf(a - 1.0) * (-t).exp() / (s * s)
    };
    // Split near the origin where the integrand is sharply peaked for small |z|.
    let knee = (z.norm() / (1.0 + z.norm())).clamp(1e-6, 0.5);
    tanh_sinh(g, 0.0, knee, 4, 1e-14) + tanh_sinh(g, knee, 1.0, 8, 1e-14)
}

/// `1F1(-d; 1-d; j w)` from `1 - d int_0^1 v^(-d-1) (e^(j w v) - 1) dv`.
pub fn hyp1f1_shifted(d: f64, omega: f64) -> Complex64 {
    let pieces = ((omega.abs() / PI).ceil() as usize).max(4);
    let g = |v: f64| {
        let z = Complex64::new(0.0, omega * v);
        // (e^z - 1)/v, kept finite as v -> 0.
        let em1 = if z.norm() < 1e-3 {
            Complex64::new(0.0, omega) * (1.0 + z * (0.5 + z / 6.0))
        } else {
            (z.exp() - 1.0) / v
        };
        em1 * v.powf(-d)
    };
    1.0 - d * tanh_sinh(g, 0.0, 1.0, pieces, 1e-13)
}

/// `1F1(a; b; j w)` for `b > a > 0` from the Euler integral.
pub fn hyp1f1_euler(a: f64, b: f64, omega: f64) -> Complex64 {
    let pieces = ((omega.abs() / PI).ceil() as usize).max(4);
    let g = |t: f64| Complex64::new(0.0, omega * t).exp() * t.powf(a - 1.0) * (1.0 - t).powf(b - a - 1.0);
    tanh_sinh(g, 0.0, 1.0, pieces, 1e-13) * (gamma(b) / (gamma(a) * gamma(b - a)))
}

/// Plain double-precision Taylor series of `1F1(a; b; z)`; only trustworthy
/// for modest `|z|`.
pub fn hyp1f1_series(a: f64, b: f64, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..10_000 {
        let nf = n as f64;
        term *= z * ((a + nf) / ((b + nf) * (nf + 1.0)));
        sum += term;
        if term.norm() < 1e-18 * sum.norm() && nf > z.norm() {
            break;
        }
    }
    sum
}

/// `2F1(1, a; 1+a; x) = sum_n a/(a+n) x^n` for `|x| < 1`.
pub fn hyp2f1_series(a: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut p = 1.0;
    for n in 0..200_000 {
        let t = a / (a + n as f64) * p;
        sum += t;
        if t.abs() < 1e-18 {
            break;
        }
        p *= x;
    }
    sum
}

/// `G(j w, a) = int_0^inf (1 - e^(j w t)) a t^(-1-a) dt`: direct quadrature
/// on `[0, T]` plus the integrated-by-parts asymptotic tail beyond `T`.
pub fn g_kernel(omega: f64, a: f64) -> Complex64 {
    if omega == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let periods = 300.0;
    let big_t = periods * 2.0 * PI / omega.abs();
    let g = |t: f64| {
        let z = Complex64::new(0.0, omega * t);
        let one_minus = if z.norm() < 1e-3 {
            -Complex64::new(0.0, omega) * (1.0 + z * (0.5 + z / 6.0))
        } else {
            (1.0 - z.exp()) / t
        };
        one_minus * (a * t.powf(-a))
    };
    let head = tanh_sinh(g, 0.0, big_t, 2 * periods as usize, 1e-13);
    // int_T^inf e^(j w t) t^-mu dt = -e^(j w T) sum_k (mu)_k T^(-mu-k) / (j w)^(k+1)
    let jw = Complex64::new(0.0, omega);
    let mu = 1.0 + a;
    let mut poch = 1.0;
    let mut osc = Complex64::new(0.0, 0.0);
    for k in 0..8 {
        osc += poch * big_t.powf(-mu - k as f64) / jw.powi(k + 1);
        poch *= mu + k as f64;
    }
    osc *= -Complex64::new(0.0, omega * big_t).exp();
    head + big_t.powf(-a) - a * osc
}
