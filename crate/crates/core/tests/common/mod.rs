//! Independent oracles shared by the integration tests: adaptive
//! Gauss-Kronrod quadrature and brute-force enumeration. Nothing here
//! calls the closed forms under test.

#![allow(dead_code)]

use num_complex::Complex64;
use pareto_gof::distributions::{sample_pareto, ParetoParams, Sample};
use pareto_gof::ecf::{naive, EcfForm, Kernel};
use pareto_gof::rng;
use rand::Rng;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod rule with the embedded 7-point Gauss estimate.
fn kronrod(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, whole: (f64, f64), tol: f64, depth: u32) -> f64 {
    let (est, err) = whole;
    if err <= tol || depth == 0 {
        return est;
    }
    let mid = 0.5 * (lo + hi);
    let left = kronrod(f, lo, mid);
    let right = kronrod(f, mid, hi);
    adapt(f, lo, mid, left, 0.5 * tol, depth - 1) + adapt(f, mid, hi, right, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod (G7/K15) on `[lo, hi]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let whole = kronrod(&f, lo, hi);
    adapt(&f, lo, hi, whole, tol, 40)
}

/// `int_lo^inf f`, split into unit panels up to `lo + length`, where the
/// caller guarantees the tail beyond is negligible.
pub fn integrate_panels(f: impl Fn(f64) -> f64, lo: f64, length: f64, tol: f64) -> f64 {
    let panels = length.ceil() as usize;
    let per = tol / panels as f64;
    (0..panels)
        .map(|i| integrate(&f, lo + i as f64, lo + (i + 1) as f64, per))
        .sum()
}

/// Integration length past which `w_a` falls below `1e-20`.
pub fn kernel_support(kernel: Kernel, a: f64) -> f64 {
    let cut = 46.0;
    match kernel {
        Kernel::Laplace => cut / a,
        Kernel::Gaussian => (cut / a).sqrt(),
    }
}

fn weight(kernel: Kernel, a: f64, t: f64) -> f64 {
    match kernel {
        Kernel::Laplace => (-a * t.abs()).exp(),
        Kernel::Gaussian => (-a * t * t).exp(),
    }
}

/// Empirical characteristic function of `X^{1/m}`, written out directly.
pub fn root_ecf(x: &[f64], m: usize, t: f64) -> Complex64 {
    let s: Complex64 = x
        .iter()
        .map(|&v| Complex64::new(0.0, t * v.powf(1.0 / m as f64)).exp())
        .sum();
    s / x.len() as f64
}

/// `n int |phi_{n,m} - eta_{n,m}|^2 w_a` by quadrature, with the minimum's
/// characteristic function obtained by full enumeration.
pub fn statistic_by_quadrature(sample: &Sample, m: usize, a: f64, kernel: Kernel, form: EcfForm) -> f64 {
    let x = sample.values();
    let integrand = |t: f64| {
        let eta = naive::ecf_min_naive(sample, m, t, form).unwrap();
        (root_ecf(x, m, t) - eta).norm_sqr() * weight(kernel, a, t)
    };
    // integrand is even in t
    let half = integrate_panels(integrand, 0.0, kernel_support(kernel, a), 1e-14);
    2.0 * x.len() as f64 * half
}

/// `int_{-inf}^{inf} cos(t b) w_a(t) dt` by quadrature.
pub fn cosine_transform_by_quadrature(kernel: Kernel, a: f64, b: f64) -> f64 {
    2.0 * integrate_panels(
        |t| (t * b).cos() * weight(kernel, a, t),
        0.0,
        kernel_support(kernel, a),
        1e-13,
    )
}

/// `int_0^inf (t - 1)^k x^{-t} e^{-a t} dt` by quadrature.
pub fn mellin_by_quadrature(x: f64, a: f64, k: i32) -> f64 {
    let rate = a + x.ln();
    let length = (60.0 / rate).max(1.0);
    integrate_panels(|t| (t - 1.0).powi(k) * (-rate * t).exp(), 0.0, length, 1e-14)
}

/// Counts, over all ordered `m`-tuples of `0..n`, how often each index is
/// the (first) minimum, divided by `n^m`.
pub fn v_weights_by_enumeration(n: usize, m: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n];
    let total = n.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut min = usize::MAX;
        for _ in 0..m {
            min = min.min(c % n);
            c /= n;
        }
        counts[min] += 1;
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Counts, over all `m`-subsets of `0..n`, how often each index is the minimum.
pub fn u_weights_by_enumeration(n: usize, m: usize) -> Vec<u128> {
    let mut counts = vec![0u128; n];
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize == m {
            counts[mask.trailing_zeros() as usize] += 1;
        }
    }
    counts.truncate(n - m + 1);
    counts
}

/// Pareto sample of size `n` drawn from stream `path` of `seed`.
pub fn pareto_sample(seed: u64, path: &[u64], n: usize, beta: f64) -> Sample {
    let mut r = rng::stream(seed, path);
    sample_pareto(n, ParetoParams::new(beta).unwrap(), &mut r).unwrap()
}

/// Random small sample with values spread over `[1, 4)`.
pub fn small_sample(seed: u64, index: u64, n: usize) -> Sample {
    let mut r = rng::stream(seed, &[index]);
    Sample::new((0..n).map(|_| 1.0 + 3.0 * r.random::<f64>()).collect()).unwrap()
}

pub fn relative_error(got: f64, expect: f64) -> f64 {
    (got - expect).abs() / expect.abs().max(1e-300)
}
