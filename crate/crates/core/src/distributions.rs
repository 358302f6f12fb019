//! Pareto type I primitives, the method-of-moments fit, and samplers for
//! the alternatives used in power studies.
//!
//! Every sampler returns draws on `[1, inf)`, the support of the null
//! model. Families that are naturally defined on `(0, inf)` are shifted
//! by one.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{GofError, Result};

/// Shape of a Pareto type I law, `F(x) = 1 - x^(-beta)` on `x >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoParams {
    beta: f64,
}

impl ParetoParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(GofError::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "Pareto shape must be positive and finite",
            });
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Mean `beta / (beta - 1)`, infinite for `beta <= 1`.
    pub fn mean(&self) -> f64 {
        if self.beta > 1.0 {
            self.beta / (self.beta - 1.0)
        } else {
            f64::INFINITY
        }
    }
}

/// Observations together with their ascending order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(GofError::SampleSize { n: 0, min: 1 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GofError::NonFinite { index });
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { values, sorted })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `X_{1:n} <= ... <= X_{n:n}`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        // Summing the sorted copy makes the mean independent of input order.
        self.sorted.iter().sum::<f64>() / self.len() as f64
    }

    pub(crate) fn require_len(&self, min: usize) -> Result<()> {
        if self.len() < min {
            return Err(GofError::SampleSize { n: self.len(), min });
        }
        Ok(())
    }
}

pub fn pareto_cdf(x: f64, params: ParetoParams) -> Result<f64> {
    if x.is_nan() || x < 1.0 {
        return Err(GofError::Domain {
            what: "pareto_cdf",
            value: x,
        });
    }
    Ok(1.0 - x.powf(-params.beta))
}

pub fn pareto_quantile(u: f64, params: ParetoParams) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(GofError::Domain {
            what: "pareto_quantile",
            value: u,
        });
    }
    Ok((1.0 - u).powf(-1.0 / params.beta))
}

fn draw_pareto<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    // U ~ (0, 1) so 1 - U never hits 0 or 1.
    let u: f64 = Open01.sample(rng);
    (1.0 - u).powf(-1.0 / beta)
}

/// `n` inverse-transform draws from `P(beta)`.
pub fn sample_pareto<R: Rng + ?Sized>(n: usize, params: ParetoParams, rng: &mut R) -> Result<Sample> {
    if n == 0 {
        return Err(GofError::SampleSize { n, min: 1 });
    }
    Sample::new((0..n).map(|_| draw_pareto(params.beta, rng)).collect())
}

/// `beta_hat = mean / (mean - 1)`.
pub fn mom_estimate(sample: &Sample) -> Result<ParetoParams> {
    let mean = sample.mean();
    if mean <= 1.0 || !mean.is_finite() {
        return Err(GofError::Estimation { mean });
    }
    ParetoParams::new(mean / (mean - 1.0))
}

/// Distribution families available as data generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Pareto,
    Gamma,
    Weibull,
    Lognormal,
    LinearFailureRate,
    BetaExponential,
    Dhillon,
    HalfNormal,
    /// `1 + exp(Z)` with probability `p`, otherwise a Pareto whose mean
    /// `e^{1/2}` is that of the unshifted lognormal.
    LognormalMixture,
    /// `1 + Exp(mean 0.5)` with probability `p`, otherwise `P(2)`.
    ExponentialMixture,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Pareto,
        Family::Gamma,
        Family::Weibull,
        Family::Lognormal,
        Family::LinearFailureRate,
        Family::BetaExponential,
        Family::Dhillon,
        Family::HalfNormal,
        Family::LognormalMixture,
        Family::ExponentialMixture,
    ];

    pub fn is_mixture(self) -> bool {
        matches!(self, Family::LognormalMixture | Family::ExponentialMixture)
    }

    /// Short label used in tables and config files.
    pub fn code(self) -> &'static str {
        match self {
            Family::Pareto => "P",
            Family::Gamma => "GAM",
            Family::Weibull => "W",
            Family::Lognormal => "LN",
            Family::LinearFailureRate => "LFR",
            Family::BetaExponential => "BEX",
            Family::Dhillon => "DH",
            Family::HalfNormal => "HN",
            Family::LognormalMixture => "LNMIX",
            Family::ExponentialMixture => "EXPMIX",
        }
    }

    fn from_code(code: &str) -> Option<Self> {
        let upper = code.trim().to_ascii_uppercase();
        let family = match upper.as_str() {
            "P" | "PARETO" => Family::Pareto,
            "GAM" | "GAMMA" | "G" => Family::Gamma,
            "W" | "WEIBULL" => Family::Weibull,
            "LN" | "LOGNORMAL" => Family::Lognormal,
            "LFR" | "LF" => Family::LinearFailureRate,
            "BEX" | "BE" => Family::BetaExponential,
            "DH" | "D" | "DHILLON" => Family::Dhillon,
            "HN" | "HALFNORMAL" => Family::HalfNormal,
            "LNMIX" => Family::LognormalMixture,
            "EXPMIX" => Family::ExponentialMixture,
            _ => return None,
        };
        Some(family)
    }
}

/// Pareto component of the lognormal mixture. Its mean `e^{1/2}` is the
/// mean of `exp(Z)`, so `beta = e^{1/2} / (e^{1/2} - 1)`.
pub fn lognormal_mixture_pareto_beta() -> f64 {
    let mean = 0.5f64.exp();
    mean / (mean - 1.0)
}

/// Pareto component of the exponential mixture (mean 2).
pub const EXPONENTIAL_MIXTURE_PARETO_BETA: f64 = 2.0;

/// A data-generating law: a family and its parameter (shape, or mixing
/// probability for the mixture families).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternativeSpec {
    family: Family,
    theta: f64,
}

impl AlternativeSpec {
    pub fn new(family: Family, theta: f64) -> Result<Self> {
        let valid = if family.is_mixture() {
            (0.0..=1.0).contains(&theta)
        } else {
            theta > 0.0 && theta.is_finite()
        };
        if !valid {
            return Err(GofError::InvalidParameter {
                name: "theta",
                value: theta,
                reason: if family.is_mixture() {
                    "mixing probability must lie in [0, 1]"
                } else {
                    "shape parameter must be positive"
                },
            });
        }
        Ok(Self { family, theta })
    }

    pub fn pareto(beta: f64) -> Result<Self> {
        Self::new(Family::Pareto, beta)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn draw<R: Rng + ?Sized>(&self, gamma: Option<&Gamma<f64>>, rng: &mut R) -> f64 {
        let theta = self.theta;
        match self.family {
            Family::Pareto => draw_pareto(theta, rng),
            Family::Gamma => 1.0 + gamma.expect("gamma sampler").sample(rng),
            Family::Weibull => {
                let e: f64 = Exp1.sample(rng);
                1.0 + e.powf(1.0 / theta)
            }
            Family::Lognormal => {
                let z: f64 = StandardNormal.sample(rng);
                1.0 + (theta * z).exp()
            }
            Family::LinearFailureRate => {
                // Inverts the survival function exp(-y - theta y^2 / 2).
                let e: f64 = Exp1.sample(rng);
                1.0 + 2.0 * e / (1.0 + (1.0 + 2.0 * theta * e).sqrt())
            }
            Family::BetaExponential => {
                let u: f64 = Open01.sample(rng);
                1.0 - (-u.powf(1.0 / theta)).ln_1p()
            }
            Family::Dhillon => {
                let e: f64 = Exp1.sample(rng);
                e.powf(1.0 / (theta + 1.0)).exp()
            }
            Family::HalfNormal => {
                let z: f64 = StandardNormal.sample(rng);
                1.0 + theta * z.abs()
            }
            Family::LognormalMixture => {
                let u: f64 = rng.random();
                if u < theta {
                    let z: f64 = StandardNormal.sample(rng);
                    1.0 + z.exp()
                } else {
                    draw_pareto(lognormal_mixture_pareto_beta(), rng)
                }
            }
            Family::ExponentialMixture => {
                let u: f64 = rng.random();
                if u < theta {
                    let e: f64 = Exp1.sample(rng);
                    1.0 + 0.5 * e
                } else {
                    draw_pareto(EXPONENTIAL_MIXTURE_PARETO_BETA, rng)
                }
            }
        }
    }
}

impl fmt::Display for AlternativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family.code(), self.theta)
    }
}

impl FromStr for AlternativeSpec {
    type Err = GofError;

    /// Parses labels such as `W(1.5)`, `LNMIX(0.9)` or `P(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| GofError::config("alternatives", format!("`{s}`: {message}"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| bad("expected FAMILY(theta)"))?;
        let inner = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| bad("missing closing parenthesis"))?;
        let family = Family::from_code(&s[..open]).ok_or_else(|| bad(&format!("unknown family `{}`", &s[..open])))?;
        let theta: f64 = inner.trim().parse().map_err(|_| bad("parameter is not a number"))?;
        AlternativeSpec::new(family, theta).map_err(|e| bad(&e.to_string()))
    }
}

/// `n` independent draws from `spec`.
pub fn sample_alternative<R: Rng + ?Sized>(spec: &AlternativeSpec, n: usize, rng: &mut R) -> Result<Sample> {
    if n == 0 {
        return Err(GofError::SampleSize { n, min: 1 });
    }
    let spec = AlternativeSpec::new(spec.family, spec.theta)?;
    let gamma = match spec.family {
        Family::Gamma => Some(Gamma::new(spec.theta, 1.0).map_err(|_| GofError::InvalidParameter {
            name: "theta",
            value: spec.theta,
            reason: "invalid gamma shape",
        })?),
        _ => None,
    };
    Sample::new((0..n).map(|_| spec.draw(gamma.as_ref(), rng)).collect())
}
