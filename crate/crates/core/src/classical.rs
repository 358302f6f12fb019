//! Competitor statistics: the EDF trio (Kolmogorov-Smirnov, Cramer-von
//! Mises, Anderson-Darling), Zhang's likelihood-ratio `ZA`, and the
//! Mellin-transform statistic of Meintanis with weight `exp(-a t)`.
//!
//! All of them take the Pareto shape explicitly so the bootstrap can
//! evaluate them either at a refitted or at a fixed shape.

use serde::{Deserialize, Serialize};

use crate::distributions::{ParetoParams, Sample};
use crate::error::{GofError, Result};

/// Probability-integral values are clamped to this distance from 0 and 1
/// before taking logarithms.
pub const PIT_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdfStatistics {
    pub ks: f64,
    pub cvm: f64,
    pub ad: f64,
    /// Set when some `u_j` had to be clamped for the Anderson-Darling logs.
    pub clamped: bool,
}

fn pit(sample: &Sample, params: ParetoParams, what: &'static str) -> Result<Vec<f64>> {
    sample.require_len(2)?;
    let beta = params.beta();
    sample
        .sorted()
        .iter()
        .map(|&x| {
            if x < 1.0 {
                Err(GofError::Domain { what, value: x })
            } else {
                Ok(1.0 - x.powf(-beta))
            }
        })
        .collect()
}

pub fn edf_tests(sample: &Sample, params: ParetoParams) -> Result<EdfStatistics> {
    let u = pit(sample, params, "edf_tests")?;
    let n = u.len();
    let nf = n as f64;

    let mut ks: f64 = 0.0;
    let mut cvm = 1.0 / (12.0 * nf);
    for (i, &uj) in u.iter().enumerate() {
        let j = (i + 1) as f64;
        ks = ks.max(j / nf - uj).max(uj - (j - 1.0) / nf);
        let d = uj - (2.0 * j - 1.0) / (2.0 * nf);
        cvm += d * d;
    }

    let mut clamped = false;
    let mut clamp = |v: f64| {
        let c = v.clamp(PIT_CLAMP, 1.0 - PIT_CLAMP);
        clamped |= c != v;
        c
    };
    let uc: Vec<f64> = u.iter().map(|&v| clamp(v)).collect();
    let sum: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (uc[i].ln() + (-uc[n - 1 - i]).ln_1p()))
        .sum();
    let ad = -nf - sum / nf;

    Ok(EdfStatistics { ks, cvm, ad, clamped })
}

/// Zhang's `ZA = -sum_j [ log u_j / (n - j + 1/2) + log(1 - u_j) / (j - 1/2) ]`
/// with `u_j = 1 - X_{j:n}^{-beta}` and `log(1 - u_j) = -beta log X_{j:n}`.
pub fn zhang_za(sample: &Sample, params: ParetoParams) -> Result<f64> {
    sample.require_len(2)?;
    let beta = params.beta();
    let x = sample.sorted();
    if x[0] < 1.0 {
        return Err(GofError::Domain {
            what: "zhang_za",
            value: x[0],
        });
    }
    if x[0] == 1.0 {
        return Err(GofError::Singular { statistic: "ZA" });
    }
    let nf = x.len() as f64;
    let mut acc = 0.0;
    for (i, &xj) in x.iter().enumerate() {
        let j = (i + 1) as f64;
        let log_x = xj.ln();
        let log_u = (-(-beta * log_x).exp()).ln_1p();
        acc += log_u / (nf - j + 0.5) - beta * log_x / (j - 0.5);
    }
    Ok(-acc)
}

/// Exponential weight `w(t) = exp(-a t)` of the Mellin statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinWeight {
    a: f64,
}

impl MellinWeight {
    /// Default decay; reproduces the reference golfer-data value of the statistic.
    pub const DEFAULT_A: f64 = 1.0;

    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(GofError::InvalidParameter {
                name: "a",
                value: a,
                reason: "Mellin weight decay must be positive",
            });
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinIntegrals {
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
}

/// Closed forms of `int_0^inf (t - 1)^k x^{-t} e^{-a t} dt`, `k = 0, 1, 2`.
pub fn mellin_integrals(x: f64, w: MellinWeight) -> Result<MellinIntegrals> {
    let log_x = x.ln();
    let s = w.a + log_x;
    if s <= 0.0 || !s.is_finite() {
        return Err(GofError::Domain {
            what: "mellin_integrals",
            value: x,
        });
    }
    let a = w.a;
    Ok(MellinIntegrals {
        i0: 1.0 / s,
        i1: (1.0 - a - log_x) / (s * s),
        i2: (2.0 - 2.0 * a + a * a + 2.0 * (a - 1.0) * log_x + log_x * log_x) / (s * s * s),
    })
}

/// Meintanis' `G_{n,w}`.
pub fn meintanis_g(sample: &Sample, params: ParetoParams, w: MellinWeight) -> Result<f64> {
    let x = sample.sorted();
    if let Some(&bad) = x.iter().find(|&&v| v < 1.0) {
        return Err(GofError::Domain {
            what: "meintanis_g",
            value: bad,
        });
    }
    let beta = params.beta();
    let nf = x.len() as f64;

    let (mut p0, mut p1, mut p2) = (0.0, 0.0, 0.0);
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate().skip(i) {
            let m = mellin_integrals(xi * xj, w)?;
            let mult = if i == j { 1.0 } else { 2.0 };
            p0 += mult * m.i0;
            p1 += mult * m.i1;
            p2 += mult * m.i2;
        }
    }
    let (mut s0, mut s1) = (0.0, 0.0);
    for &xi in x {
        let m = mellin_integrals(xi, w)?;
        s0 += m.i0;
        s1 += m.i1;
    }
    let at_one = mellin_integrals(1.0, w)?.i0;

    let b1 = beta + 1.0;
    let pair = (b1 * b1 * p0 + p2 + 2.0 * b1 * p1) / nf;
    let single = beta * (nf * beta * at_one - 2.0 * b1 * s0 - 2.0 * s1);
    Ok(pair + single)
}
