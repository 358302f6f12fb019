use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classical::{edf_tests, meintanis_g, zhang_za, MellinWeight};
use crate::distributions::{mom_estimate, ParetoParams, Sample};
use crate::ecf::{self, EcfConfig, EcfForm, Kernel};
use crate::error::{GofError, Result};

/// One of the nine implemented tests together with its tuning parameters.
/// Large values of every statistic are evidence against the Pareto model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TestStatistic {
    KolmogorovSmirnov,
    CramerVonMises,
    AndersonDarling,
    ZhangZa,
    Meintanis(MellinWeight),
    Ecf(EcfConfig),
}

/// Tuning parameters shared by a battery of tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tuning {
    pub m: usize,
    pub a: f64,
    pub mellin_a: f64,
}

impl Default for Tuning {
    fn default() -> Self {
        Self {
            m: EcfConfig::DEFAULT_M,
            a: EcfConfig::DEFAULT_A,
            mellin_a: MellinWeight::DEFAULT_A,
        }
    }
}

pub const ALL_LABELS: [&str; 9] = ["KS", "CvM", "AD", "ZA", "G", "S1", "S2", "T1", "T2"];

impl TestStatistic {
    /// Builds a test from its short label (`KS`, `CvM`, `AD`, `ZA`, `G`,
    /// `S1`, `S2`, `T1`, `T2`; case-insensitive).
    pub fn from_label(label: &str, tuning: Tuning) -> Result<Self> {
        let ecf = |kernel, form| EcfConfig::new(tuning.m, tuning.a, kernel, form).map(TestStatistic::Ecf);
        match label.trim().to_ascii_uppercase().as_str() {
            "KS" => Ok(TestStatistic::KolmogorovSmirnov),
            "CVM" | "CM" | "CV" => Ok(TestStatistic::CramerVonMises),
            "AD" => Ok(TestStatistic::AndersonDarling),
            "ZA" => Ok(TestStatistic::ZhangZa),
            "G" => Ok(TestStatistic::Meintanis(MellinWeight::new(tuning.mellin_a)?)),
            "S1" => ecf(Kernel::Laplace, EcfForm::V),
            "S2" => ecf(Kernel::Gaussian, EcfForm::V),
            "T1" => ecf(Kernel::Laplace, EcfForm::U),
            "T2" => ecf(Kernel::Gaussian, EcfForm::U),
            other => Err(GofError::config("tests", format!("unknown test `{other}`"))),
        }
    }

    /// All nine tests in table order.
    pub fn battery(tuning: Tuning) -> Result<Vec<Self>> {
        ALL_LABELS.iter().map(|l| Self::from_label(l, tuning)).collect()
    }

    pub fn label(&self) -> &'static str {
        match self {
            TestStatistic::KolmogorovSmirnov => "KS",
            TestStatistic::CramerVonMises => "CvM",
            TestStatistic::AndersonDarling => "AD",
            TestStatistic::ZhangZa => "ZA",
            TestStatistic::Meintanis(_) => "G",
            TestStatistic::Ecf(cfg) => match (cfg.kernel(), cfg.form()) {
                (Kernel::Laplace, EcfForm::V) => "S1",
                (Kernel::Gaussian, EcfForm::V) => "S2",
                (Kernel::Laplace, EcfForm::U) => "T1",
                (Kernel::Gaussian, EcfForm::U) => "T2",
            },
        }
    }

    /// Whether the statistic depends on the Pareto shape.
    pub fn uses_shape(&self) -> bool {
        !matches!(self, TestStatistic::Ecf(_))
    }

    /// Smallest sample size the statistic accepts.
    pub fn min_n(&self) -> usize {
        match self {
            TestStatistic::Ecf(cfg) => cfg.m().max(2),
            _ => 2,
        }
    }

    /// Evaluates the statistic with the shape re-estimated from `sample`.
    pub fn evaluate(&self, sample: &Sample) -> Result<f64> {
        let shape = if self.uses_shape() {
            Some(mom_estimate(sample)?)
        } else {
            None
        };
        self.evaluate_at(sample, shape)
    }

    /// Evaluates the statistic at a given shape. The shape is ignored by
    /// the characteristic-function tests and required by the others.
    pub fn evaluate_at(&self, sample: &Sample, shape: Option<ParetoParams>) -> Result<f64> {
        let shape = || -> Result<ParetoParams> {
            match shape {
                Some(p) => Ok(p),
                None => mom_estimate(sample),
            }
        };
        match self {
            TestStatistic::KolmogorovSmirnov => Ok(edf_tests(sample, shape()?)?.ks),
            TestStatistic::CramerVonMises => Ok(edf_tests(sample, shape()?)?.cvm),
            TestStatistic::AndersonDarling => Ok(edf_tests(sample, shape()?)?.ad),
            TestStatistic::ZhangZa => zhang_za(sample, shape()?),
            TestStatistic::Meintanis(w) => meintanis_g(sample, shape()?, *w),
            TestStatistic::Ecf(cfg) => ecf::statistic(sample, cfg),
        }
    }
}

impl fmt::Display for TestStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TestStatistic {
    type Err = GofError;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_label(s, Tuning::default())
    }
}

/// Parses a comma-separated list of labels; `all` selects the full battery.
pub fn parse_test_list(list: &str, tuning: Tuning) -> Result<Vec<TestStatistic>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return TestStatistic::battery(tuning);
    }
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| TestStatistic::from_label(s, tuning))
        .collect()
}
