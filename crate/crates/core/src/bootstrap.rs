//! Parametric bootstrap p-values for one dataset, and the warp-speed
//! power estimator used in simulation studies.
//!
//! Replication `i` draws from its own stream `(seed, path.., i, attempt)`,
//! so results are identical for any degree of parallelism. A replication
//! whose estimator or statistic is undefined is redrawn with the next
//! attempt index and counted in the diagnostics.

use serde::{Deserialize, Serialize};

use crate::distributions::{mom_estimate, sample_alternative, sample_pareto, AlternativeSpec, ParetoParams, Sample};
use crate::error::{GofError, Result};
use crate::par::{map_indexed, Execution};
use crate::rng;
use crate::statistic::TestStatistic;

/// Redraws allowed per replication before giving up.
pub const MAX_REDRAWS: usize = 1000;

/// Stream-path prefix for single-dataset p-values.
const PVALUE_DOMAIN: u64 = 0x7076_616c;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    replications: usize,
    alpha: f64,
    seed: u64,
    refit: bool,
    exec: Execution,
}

impl BootstrapConfig {
    pub const MIN_REPLICATIONS: usize = 100;

    pub fn new(replications: usize, alpha: f64, seed: u64) -> Result<Self> {
        if replications < Self::MIN_REPLICATIONS {
            return Err(GofError::InvalidParameter {
                name: "B",
                value: replications as f64,
                reason: "at least 100 bootstrap replications are required",
            });
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GofError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "significance level must lie in (0, 1)",
            });
        }
        Ok(Self {
            replications,
            alpha,
            seed,
            refit: true,
            exec: Execution::default(),
        })
    }

    /// Re-estimate the shape inside every bootstrap sample (default), or
    /// hold the shape fitted to the observed data fixed.
    pub fn with_refit(mut self, refit: bool) -> Self {
        self.refit = refit;
        self
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn replications(&self) -> usize {
        self.replications
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn refit(&self) -> bool {
        self.refit
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    pub beta_hat: f64,
    pub replications: usize,
    pub seed: u64,
    pub refit: bool,
    /// Bootstrap samples redrawn because the statistic was undefined.
    pub redrawn: usize,
}

impl TestReport {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value <= alpha
    }
}

/// Runs `draw(attempt)` until it succeeds, returning the value and the
/// number of failed attempts.
fn with_redraws<T>(replication: usize, mut draw: impl FnMut(u64) -> Result<T>) -> Result<(T, usize)> {
    for attempt in 0..MAX_REDRAWS {
        if let Ok(v) = draw(attempt as u64) {
            return Ok((v, attempt));
        }
    }
    Err(GofError::Degenerate {
        replication,
        attempts: MAX_REDRAWS,
    })
}

fn evaluate_all(tests: &[TestStatistic], sample: &Sample, shape: ParetoParams) -> Result<Vec<f64>> {
    tests.iter().map(|t| t.evaluate_at(sample, Some(shape))).collect()
}

/// Bootstrap p-values for several tests sharing the same bootstrap samples.
///
/// The observed statistics use the moment fit `beta_hat`; bootstrap
/// samples are drawn from `P(beta_hat)`. A test whose observed statistic
/// is undefined reports its error and takes no part in the resampling.
pub fn pvalue_battery(
    sample: &Sample,
    tests: &[TestStatistic],
    cfg: &BootstrapConfig,
) -> Result<Vec<Result<TestReport>>> {
    let shape = mom_estimate(sample)?;
    let n = sample.len();
    let observed: Vec<Result<f64>> = tests.iter().map(|t| t.evaluate_at(sample, Some(shape))).collect();
    let live: Vec<TestStatistic> = tests
        .iter()
        .zip(&observed)
        .filter(|(_, o)| o.is_ok())
        .map(|(t, _)| *t)
        .collect();

    let draws = map_indexed(cfg.replications, cfg.exec, |i| {
        with_redraws(i, |attempt| {
            let mut rng = rng::stream(cfg.seed, &[PVALUE_DOMAIN, i as u64, attempt]);
            let boot = sample_pareto(n, shape, &mut rng)?;
            let at = if cfg.refit { mom_estimate(&boot)? } else { shape };
            evaluate_all(&live, &boot, at)
        })
    });
    let draws = draws.into_iter().collect::<Result<Vec<_>>>()?;
    let redrawn: usize = draws.iter().map(|(_, r)| r).sum();

    let mut k = 0;
    Ok(tests
        .iter()
        .zip(observed)
        .map(|(test, obs)| {
            let t0 = obs?;
            let col = k;
            k += 1;
            let exceed = draws.iter().filter(|(s, _)| s[col] >= t0).count();
            Ok(TestReport {
                test: test.label().to_string(),
                statistic: t0,
                p_value: (1 + exceed) as f64 / (cfg.replications + 1) as f64,
                beta_hat: shape.beta(),
                replications: cfg.replications,
                seed: cfg.seed,
                refit: cfg.refit,
                redrawn,
            })
        })
        .collect())
}

/// Bootstrap p-value of one test: `(1 + #{T*_b >= T_0}) / (B + 1)`.
pub fn pvalue(sample: &Sample, test: TestStatistic, cfg: &BootstrapConfig) -> Result<TestReport> {
    pvalue_battery(sample, &[test], cfg)?.remove(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerEstimate {
    pub test: String,
    pub rejection_rate: f64,
    pub mc: usize,
    /// `S*_{floor(MC (1 - alpha)) : MC}`, shared by all replications.
    pub critical_value: f64,
    /// Replications redrawn because a fit or statistic was undefined.
    pub degenerate: usize,
}

impl PowerEstimate {
    /// Binomial standard error of the rejection rate.
    pub fn standard_error(&self) -> f64 {
        let p = self.rejection_rate;
        (p * (1.0 - p) / self.mc as f64).sqrt()
    }
}

/// Data and bootstrap statistics of one warp-speed replication.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpReplication {
    pub data: Sample,
    pub statistics: Vec<f64>,
    pub bootstrap: Vec<f64>,
    pub redraws: usize,
}

/// One replication: draw `n` points from `alt`, fit the shape, evaluate
/// every test, then draw a single bootstrap sample from the fitted Pareto
/// and evaluate every test on it.
pub fn warp_speed_replication(
    alt: &AlternativeSpec,
    n: usize,
    tests: &[TestStatistic],
    cfg: &BootstrapConfig,
    cell: &[u64],
    index: usize,
) -> Result<WarpReplication> {
    let mut path = cell.to_vec();
    path.extend([index as u64, 0]);
    let last = path.len() - 1;
    let ((data, statistics, bootstrap), redraws) = with_redraws(index, |attempt| {
        path[last] = attempt;
        let mut rng = rng::stream(cfg.seed, &path);
        let data = sample_alternative(alt, n, &mut rng)?;
        let shape = mom_estimate(&data)?;
        let stats = evaluate_all(tests, &data, shape)?;
        let boot = sample_pareto(n, shape, &mut rng)?;
        let boot_shape = if cfg.refit { mom_estimate(&boot)? } else { shape };
        let boot_stats = evaluate_all(tests, &boot, boot_shape)?;
        Ok((data, stats, boot_stats))
    })?;
    Ok(WarpReplication {
        data,
        statistics,
        bootstrap,
        redraws,
    })
}

/// 1-based rank `floor(MC (1 - alpha))` of the critical order statistic.
pub fn critical_rank(mc: usize, alpha: f64) -> usize {
    // nudge guards against 0.95 * 10_000 landing just below 9500
    (((mc as f64) * (1.0 - alpha)) + 1e-9).floor().max(1.0) as usize
}

/// Warp-speed power of several tests on shared Monte Carlo datasets.
/// `cfg.replications()` is the Monte Carlo size `MC`.
pub fn warp_speed_battery(
    alt: &AlternativeSpec,
    n: usize,
    tests: &[TestStatistic],
    cfg: &BootstrapConfig,
    cell: &[u64],
) -> Result<Vec<PowerEstimate>> {
    if let Some(t) = tests.iter().find(|t| n < t.min_n()) {
        return Err(match t {
            TestStatistic::Ecf(c) => GofError::Order { m: c.m(), n },
            _ => GofError::SampleSize { n, min: t.min_n() },
        });
    }
    let mc = cfg.replications;
    let reps = map_indexed(mc, cfg.exec, |i| {
        warp_speed_replication(alt, n, tests, cfg, cell, i).map(|r| (r.statistics, r.bootstrap, r.redraws))
    });
    let reps = reps.into_iter().collect::<Result<Vec<_>>>()?;
    let degenerate = reps.iter().map(|r| r.2).sum();
    let rank = critical_rank(mc, cfg.alpha);

    Ok(tests
        .iter()
        .enumerate()
        .map(|(k, test)| {
            let mut boot: Vec<f64> = reps.iter().map(|r| r.1[k]).collect();
            boot.sort_by(f64::total_cmp);
            let critical_value = boot[rank - 1];
            let rejected = reps.iter().filter(|r| r.0[k] > critical_value).count();
            PowerEstimate {
                test: test.label().to_string(),
                rejection_rate: rejected as f64 / mc as f64,
                mc,
                critical_value,
                degenerate,
            }
        })
        .collect())
}

/// Warp-speed power of a single test.
pub fn warp_speed_power(
    alt: &AlternativeSpec,
    n: usize,
    test: TestStatistic,
    cfg: &BootstrapConfig,
) -> Result<PowerEstimate> {
    Ok(warp_speed_battery(alt, n, &[test], cfg, &[])?.remove(0))
}
