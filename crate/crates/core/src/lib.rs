//! Goodness-of-fit tests for the Pareto type I distribution.
//!
//! Four characteristic-function statistics compare `X^{1/m}` with the
//! minimum of `m` observations, which agree in law only under the Pareto
//! model. Five classical competitors (KS, CvM, AD, Zhang's ZA and the
//! Meintanis Mellin-transform statistic) are included for comparison.
//! Critical values come from a parametric bootstrap; [`bootstrap`] also
//! provides the warp-speed power estimator that [`study`] uses to sweep
//! power tables.
//!
//! Replications run on rayon when the `parallel` feature is enabled (the
//! default) and sequentially otherwise; either way every result is a
//! deterministic function of the seed.

pub mod bootstrap;
pub mod classical;
pub mod dataset;
pub mod distributions;
pub mod ecf;
pub mod error;
pub mod golfer;
pub mod par;
pub mod rng;
pub mod statistic;
pub mod study;

pub use bootstrap::{
    pvalue, pvalue_battery, warp_speed_battery, warp_speed_power, BootstrapConfig, PowerEstimate, TestReport,
};
pub use classical::{edf_tests, meintanis_g, mellin_integrals, zhang_za, EdfStatistics, MellinWeight};
pub use dataset::{parse_dataset, Rescale};
pub use distributions::{
    mom_estimate, pareto_cdf, pareto_quantile, sample_alternative, sample_pareto, AlternativeSpec, Family,
    ParetoParams, Sample,
};
pub use ecf::{stat_s, stat_t, u_weights, v_weights, EcfConfig, EcfForm, Kernel};
pub use error::{GofError, Result};
pub use par::Execution;
pub use statistic::{TestStatistic, Tuning};
pub use study::{run_power_study, PowerStudyConfig, PowerTable};
