//! Characteristic-function tests built on the sample-minimum
//! characterisation of the Pareto law: `X^{1/m}` and `min(X_1, ..., X_m)`
//! share a distribution exactly when `X` is Pareto type I.
//!
//! Both statistics are `n` times a weighted L2 distance between the
//! empirical characteristic function of `X^{1/m}`,
//!
//! ```text
//! phi_{n,m}(t) = (1/n) sum_j exp(i t X_j^{1/m})
//! ```
//!
//! and an estimate of the characteristic function of the `m`-sample
//! minimum. The V form uses all `n^m` ordered tuples (with replacement),
//! the U form all `C(n, m)` subsets. Both collapse to a single weighted sum
//! over order statistics, `sum_j w_j exp(i t X_{j:n})`, which turns the
//! integral into an `O(n^2)` double sum once the weight kernel is
//! integrated against `cos(t b)` in closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distributions::Sample;
use crate::error::{GofError, Result};

/// Weight function `w_a(t)` in the L2 distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kernel {
    /// `exp(-a |t|)`
    Laplace,
    /// `exp(-a t^2)`
    Gaussian,
}

impl Kernel {
    /// `int cos(t b) w_a(t) dt` over the real line.
    #[inline]
    pub fn cosine_transform(self, a: f64, b: f64) -> f64 {
        match self {
            Kernel::Laplace => 2.0 * a / (a * a + b * b),
            Kernel::Gaussian => (std::f64::consts::PI / a).sqrt() * (-b * b / (4.0 * a)).exp(),
        }
    }

    /// `w_a(t)` itself.
    pub fn weight(self, a: f64, t: f64) -> f64 {
        match self {
            Kernel::Laplace => (-a * t.abs()).exp(),
            Kernel::Gaussian => (-a * t * t).exp(),
        }
    }
}

/// How the characteristic function of the sample minimum is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EcfForm {
    /// All `n^m` ordered tuples.
    V,
    /// All `C(n, m)` subsets.
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcfConfig {
    m: usize,
    a: f64,
    kernel: Kernel,
    form: EcfForm,
}

impl EcfConfig {
    pub const DEFAULT_M: usize = 3;
    pub const DEFAULT_A: f64 = 2.0;

    pub fn new(m: usize, a: f64, kernel: Kernel, form: EcfForm) -> Result<Self> {
        if m < 2 {
            return Err(GofError::Order { m, n: 0 });
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(GofError::InvalidParameter {
                name: "a",
                value: a,
                reason: "kernel tuning parameter must be positive",
            });
        }
        Ok(Self { m, a, kernel, form })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn form(&self) -> EcfForm {
        self.form
    }
}

fn check_order(n: usize, m: usize) -> Result<()> {
    if m < 2 || m > n {
        return Err(GofError::Order { m, n });
    }
    Ok(())
}

/// `v_{j,m} = ((n-j+1)/n)^m - ((n-j)/n)^m`, the probability that
/// `X_{j:n}` is the minimum of `m` indices drawn with replacement.
pub fn v_weights(n: usize, m: usize) -> Result<Vec<f64>> {
    check_order(n, m)?;
    let nf = n as f64;
    let m = m as i32;
    Ok((1..=n)
        .map(|j| {
            let hi = (n - j + 1) as f64 / nf;
            let lo = (n - j) as f64 / nf;
            hi.powi(m) - lo.powi(m)
        })
        .collect())
}

/// `C(n, k)` in exact 128-bit arithmetic.
pub fn binomial(n: usize, k: usize) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128).ok_or(GofError::Overflow { n, k })? / (i as u128 + 1);
    }
    Ok(acc)
}

/// `u_{j,m} = C(n-j, m-1)` for `j = 1..=n-m+1`: the number of `m`-subsets
/// whose minimum is `X_{j:n}`.
pub fn u_weights(n: usize, m: usize) -> Result<Vec<u128>> {
    check_order(n, m)?;
    (1..=n - m + 1).map(|j| binomial(n - j, m - 1)).collect()
}

/// `u_{j,m} / C(n, m)`, exact integers converted once; falls back to the
/// ratio recurrence when the coefficients overflow.
pub fn u_weight_ratios(n: usize, m: usize) -> Result<Vec<f64>> {
    check_order(n, m)?;
    match (u_weights(n, m), binomial(n, m)) {
        (Ok(u), Ok(total)) => {
            let total = total as f64;
            Ok(u.into_iter().map(|c| c as f64 / total).collect())
        }
        _ => {
            // r_1 = m / n, r_{j+1} = r_j (n - j - m + 1) / (n - j)
            let mut r = m as f64 / n as f64;
            let mut out = Vec::with_capacity(n - m + 1);
            for j in 1..=n - m + 1 {
                out.push(r);
                r *= (n - j + 1 - m) as f64 / (n - j) as f64;
            }
            Ok(out)
        }
    }
}

/// Weights of the single-sum estimate of the minimum's characteristic function.
pub fn min_weights(n: usize, m: usize, form: EcfForm) -> Result<Vec<f64>> {
    match form {
        EcfForm::V => v_weights(n, m),
        EcfForm::U => u_weight_ratios(n, m),
    }
}

/// `phi_{n,m}(t)`, the empirical characteristic function of `X^{1/m}`.
pub fn ecf_root(sample: &Sample, m: usize, t: f64) -> Complex64 {
    let inv = 1.0 / m as f64;
    let sum: Complex64 = sample
        .sorted()
        .iter()
        .map(|&x| Complex64::from_polar(1.0, t * x.powf(inv)))
        .sum();
    sum / sample.len() as f64
}

/// Single-sum estimate of the characteristic function of the `m`-sample minimum.
pub fn ecf_min(sample: &Sample, m: usize, form: EcfForm, t: f64) -> Result<Complex64> {
    let w = min_weights(sample.len(), m, form)?;
    Ok(sample
        .sorted()
        .iter()
        .zip(&w)
        .map(|(&x, &wj)| Complex64::from_polar(wj, t * x))
        .sum())
}

fn check_nonnegative(sample: &Sample) -> Result<()> {
    // Sample guarantees finiteness; the root transform needs x >= 0.
    if let Some(&value) = sample.values().iter().find(|&&x| x < 0.0) {
        return Err(GofError::Domain {
            what: "ecf statistic",
            value,
        });
    }
    Ok(())
}

/// Closed-form `n int |phi_{n,m}(t) - eta(t)|^2 w_a(t) dt`, where `eta` is
/// the V or U estimate selected by `cfg`.
///
/// Expands to three blocks: root-root, the cross term pairing weighted
/// order statistics with roots, and the weighted order-statistic block.
pub fn statistic(sample: &Sample, cfg: &EcfConfig) -> Result<f64> {
    let n = sample.len();
    check_order(n, cfg.m)?;
    check_nonnegative(sample)?;
    let x = sample.sorted();
    let w = min_weights(n, cfg.m, cfg.form)?;
    let inv = 1.0 / cfg.m as f64;
    let roots: Vec<f64> = x.iter().map(|v| v.powf(inv)).collect();
    let k = |b: f64| cfg.kernel.cosine_transform(cfg.a, b);

    let symmetric = |pts: &[f64], wts: Option<&[f64]>| {
        let weight = |i: usize| wts.map_or(1.0, |w| w[i]);
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 0..pts.len() {
            let wi = weight(i);
            diag += wi * wi;
            let mut row = 0.0;
            for j in i + 1..pts.len() {
                row += weight(j) * k(pts[i] - pts[j]);
            }
            off += wi * row;
        }
        diag * k(0.0) + 2.0 * off
    };

    let root_block = symmetric(&roots, None);
    let cross: f64 = x
        .iter()
        .zip(&w)
        .map(|(&xj, &wj)| wj * roots.iter().map(|&r| k(xj - r)).sum::<f64>())
        .sum();
    let min_block = symmetric(&x[..w.len()], Some(&w));

    let nf = n as f64;
    Ok(root_block / nf - 2.0 * cross + nf * min_block)
}

/// V-statistic `S_{n,m,a}`.
pub fn stat_s(sample: &Sample, m: usize, a: f64, kernel: Kernel) -> Result<f64> {
    statistic(sample, &EcfConfig::new(m, a, kernel, EcfForm::V)?)
}

/// U-statistic `T_{n,m,a}`.
pub fn stat_t(sample: &Sample, m: usize, a: f64, kernel: Kernel) -> Result<f64> {
    statistic(sample, &EcfConfig::new(m, a, kernel, EcfForm::U)?)
}

/// Brute-force minimum ECFs by enumerating every tuple or subset.
/// Test oracle only: cost grows as `n^m`.
pub mod naive {
    use super::*;

    pub const MAX_N: usize = 10;
    pub const MAX_M: usize = 3;

    fn guard(n: usize, m: usize) -> Result<()> {
        if n > MAX_N || m > MAX_M {
            return Err(GofError::SizeGuard { n, m });
        }
        check_order(n, m)
    }

    /// Visits every index tuple in `0..n` of length `m`, ordered with
    /// replacement (`strict = false`) or strictly increasing.
    fn for_each_tuple(n: usize, m: usize, strict: bool, mut f: impl FnMut(&[usize])) {
        let mut idx = vec![0usize; m];
        if strict {
            for (i, v) in idx.iter_mut().enumerate() {
                *v = i;
            }
        }
        loop {
            f(&idx);
            let mut pos = m;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                let limit = if strict { n - (m - pos) } else { n - 1 };
                if idx[pos] < limit {
                    idx[pos] += 1;
                    for q in pos + 1..m {
                        idx[q] = if strict { idx[q - 1] + 1 } else { 0 };
                    }
                    break;
                }
            }
        }
    }

    /// The V (`n^{-m}` over all ordered tuples) or U (`C(n,m)^{-1}` over all
    /// subsets) estimate of `E exp(i t min(X_1..X_m))`.
    pub fn ecf_min_naive(sample: &Sample, m: usize, t: f64, form: EcfForm) -> Result<Complex64> {
        let n = sample.len();
        guard(n, m)?;
        let x = sample.values();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        for_each_tuple(n, m, form == EcfForm::U, |idx| {
            let min = idx.iter().map(|&i| x[i]).fold(f64::INFINITY, f64::min);
            sum += Complex64::from_polar(1.0, t * min);
            count += 1;
        });
        Ok(sum / count as f64)
    }

    /// The `2m`-fold V-statistic: the mean of the kernel
    /// `h(X_{k_1}, ..., X_{k_{2m}})` over all `n^{2m}` index tuples, each
    /// term evaluated through the cosine transform of the weight.
    ///
    /// The cross term pairs the root of `X_{k_{m+1}}` with the minimum of
    /// the first block. Reusing `k_1` there would correlate the two factors
    /// and the mean would no longer be the L2 distance.
    pub fn v_statistic_2m(sample: &Sample, m: usize, a: f64, kernel: Kernel) -> Result<f64> {
        let n = sample.len();
        check_order(n, m)?;
        if n.pow(2 * m as u32) > 20_000_000 {
            return Err(GofError::SizeGuard { n, m });
        }
        let x = sample.values();
        let inv = 1.0 / m as f64;
        let k = |b: f64| kernel.cosine_transform(a, b);
        let mut total = 0.0;
        let mut count = 0usize;
        for_each_tuple(n, 2 * m, false, |idx| {
            let root = |i: usize| x[idx[i]].powf(inv);
            let min_a = idx[..m].iter().map(|&i| x[i]).fold(f64::INFINITY, f64::min);
            let min_b = idx[m..].iter().map(|&i| x[i]).fold(f64::INFINITY, f64::min);
            total += k(root(0) - root(1)) - 2.0 * k(root(m) - min_a) + k(min_a - min_b);
            count += 1;
        });
        Ok(n as f64 * total / count as f64)
    }
}
