//! Power-study harness: sweeps a (test x alternative x n) grid with the
//! warp-speed estimator and renders the result as CSV or a text table.
//!
//! Config files are TOML:
//!
//! ```toml
//! tests = ["KS", "CvM", "AD", "ZA", "G", "S1", "S2", "T1", "T2"]  # or "all"
//! alternatives = ["P(2)", "W(1.5)", "LNMIX(0.9)"]
//! sample_sizes = [20, 30]
//! mc = 10000
//! alpha = 0.05
//! seed = 1
//! # optional
//! m = 3
//! a = 2.0
//! mellin_a = 1.0
//! decimals = 0        # power percentage rounding, half-up
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bootstrap::{warp_speed_battery, BootstrapConfig, PowerEstimate};
use crate::distributions::AlternativeSpec;
use crate::error::{GofError, Result};
use crate::par::Execution;
use crate::statistic::{parse_test_list, TestStatistic, Tuning};

/// Below this many replications a study is flagged as low precision.
pub const MIN_RECOMMENDED_MC: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerStudyConfig {
    pub tests: Vec<TestStatistic>,
    pub alternatives: Vec<AlternativeSpec>,
    pub sample_sizes: Vec<usize>,
    pub mc: usize,
    pub alpha: f64,
    pub seed: u64,
    pub decimals: u32,
    #[serde(skip)]
    pub exec: Execution,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    tests: TestList,
    alternatives: Vec<String>,
    sample_sizes: Vec<usize>,
    mc: usize,
    alpha: f64,
    seed: u64,
    m: Option<usize>,
    a: Option<f64>,
    mellin_a: Option<f64>,
    decimals: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TestList {
    One(String),
    Many(Vec<String>),
}

impl PowerStudyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let field = e
                .span()
                .and_then(|s| text.get(s))
                .map(|s| s.split(['=', '\n']).next().unwrap_or(s).trim().to_string())
                .filter(|s| !s.is_empty())
                .unwrap_or_else(|| "<config>".to_string());
            GofError::config(field, message)
        })?;

        let defaults = Tuning::default();
        let tuning = Tuning {
            m: raw.m.unwrap_or(defaults.m),
            a: raw.a.unwrap_or(defaults.a),
            mellin_a: raw.mellin_a.unwrap_or(defaults.mellin_a),
        };
        let tests = match raw.tests {
            TestList::One(s) => parse_test_list(&s, tuning)?,
            TestList::Many(v) => v
                .iter()
                .map(|s| TestStatistic::from_label(s, tuning))
                .collect::<Result<Vec<_>>>()?,
        };
        let alternatives = raw
            .alternatives
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<AlternativeSpec>>>()?;

        let cfg = Self {
            tests,
            alternatives,
            sample_sizes: raw.sample_sizes,
            mc: raw.mc,
            alpha: raw.alpha,
            seed: raw.seed,
            decimals: raw.decimals.unwrap_or(0),
            exec: Execution::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tests.is_empty() {
            return Err(GofError::config("tests", "at least one test is required"));
        }
        if self.alternatives.is_empty() {
            return Err(GofError::config("alternatives", "at least one alternative is required"));
        }
        if self.sample_sizes.is_empty() {
            return Err(GofError::config("sample_sizes", "at least one sample size is required"));
        }
        if let Some(n) = self.sample_sizes.iter().find(|&&n| n < 2) {
            return Err(GofError::config("sample_sizes", format!("sample size {n} is below 2")));
        }
        if self.decimals > 6 {
            return Err(GofError::config("decimals", "at most 6 decimals"));
        }
        self.bootstrap()
            .map(|_| ())
            .map_err(|e| GofError::config("mc/alpha", e.to_string()))
    }

    pub fn low_precision(&self) -> bool {
        self.mc < MIN_RECOMMENDED_MC
    }

    fn bootstrap(&self) -> Result<BootstrapConfig> {
        Ok(BootstrapConfig::new(self.mc, self.alpha, self.seed)?.with_execution(self.exec))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerCell {
    pub alternative: String,
    pub n: usize,
    pub test: String,
    /// Rejection rate in `[0, 1]`; `None` when the cell failed.
    pub rejection_rate: Option<f64>,
    pub critical_value: Option<f64>,
    pub mc: usize,
    pub degenerate: usize,
    pub error: Option<String>,
    /// Among the two highest (rounded) powers of its row, ties included.
    pub top: bool,
}

impl PowerCell {
    pub fn standard_error(&self) -> Option<f64> {
        self.rejection_rate.map(|p| (p * (1.0 - p) / self.mc as f64).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerTable {
    pub config: PowerStudyConfig,
    /// Row-major: alternatives outermost, then sample sizes, then tests.
    pub cells: Vec<PowerCell>,
}

/// `100 p` rounded half-up to `decimals` places.
pub fn percent(p: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    // the 1e-9 keeps exact halves such as 0.125 from rounding down
    ((p * 100.0 * scale) + 0.5 + 1e-9).floor() / scale
}

fn mark_top_two(row: &mut [PowerCell], decimals: u32) {
    let mut vals: Vec<f64> = row
        .iter()
        .filter_map(|c| c.rejection_rate.map(|p| percent(p, decimals)))
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    let Some(&cut) = vals.get(1).or(vals.first()) else {
        return;
    };
    for c in row {
        c.top = c.rejection_rate.is_some_and(|p| percent(p, decimals) >= cut);
    }
}

fn cells_for_row(alt: &AlternativeSpec, n: usize, cfg: &PowerStudyConfig, cell: &[u64]) -> Vec<PowerCell> {
    let boot = cfg.bootstrap().expect("validated config");
    let make = |test: &TestStatistic, est: Result<PowerEstimate>| match est {
        Ok(e) => PowerCell {
            alternative: alt.to_string(),
            n,
            test: test.label().to_string(),
            rejection_rate: Some(e.rejection_rate),
            critical_value: Some(e.critical_value),
            mc: e.mc,
            degenerate: e.degenerate,
            error: None,
            top: false,
        },
        Err(err) => PowerCell {
            alternative: alt.to_string(),
            n,
            test: test.label().to_string(),
            rejection_rate: None,
            critical_value: None,
            mc: cfg.mc,
            degenerate: 0,
            error: Some(err.to_string()),
            top: false,
        },
    };
    match warp_speed_battery(alt, n, &cfg.tests, &boot, cell) {
        Ok(est) => cfg.tests.iter().zip(est).map(|(t, e)| make(t, Ok(e))).collect(),
        // isolate the failing tests; the others still share datasets since
        // streams depend only on the cell and replication index
        Err(_) => cfg
            .tests
            .iter()
            .map(|t| {
                make(
                    t,
                    warp_speed_battery(alt, n, &[*t], &boot, cell).map(|mut v| v.remove(0)),
                )
            })
            .collect(),
    }
}

/// Runs every (alternative, n) row; within a row all tests see the same
/// Monte Carlo datasets. Failed cells are recorded, not fatal.
pub fn run_power_study(cfg: &PowerStudyConfig) -> Result<PowerTable> {
    cfg.validate()?;
    let mut cells = Vec::with_capacity(cfg.alternatives.len() * cfg.sample_sizes.len() * cfg.tests.len());
    for (ai, alt) in cfg.alternatives.iter().enumerate() {
        for (ni, &n) in cfg.sample_sizes.iter().enumerate() {
            let mut row = cells_for_row(alt, n, cfg, &[ai as u64, ni as u64]);
            mark_top_two(&mut row, cfg.decimals);
            cells.extend(row);
        }
    }
    Ok(PowerTable {
        config: cfg.clone(),
        cells,
    })
}

impl PowerTable {
    pub const CSV_HEADER: &'static str = "alternative,n,test,power,se,mc";

    pub fn cell(&self, alternative: &str, n: usize, test: &str) -> Option<&PowerCell> {
        self.cells
            .iter()
            .find(|c| c.alternative == alternative && c.n == n && c.test == test)
    }

    /// CSV with `power` and `se` in percentage points; failed cells print `NA`.
    pub fn to_csv(&self) -> String {
        let d = self.config.decimals as usize;
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            match (c.rejection_rate, c.standard_error()) {
                (Some(p), Some(se)) => writeln!(
                    out,
                    "{},{},{},{:.*},{:.3},{}",
                    c.alternative,
                    c.n,
                    c.test,
                    d,
                    percent(p, self.config.decimals),
                    100.0 * se,
                    c.mc
                ),
                _ => writeln!(out, "{},{},{},NA,NA,{}", c.alternative, c.n, c.test, c.mc),
            }
            .expect("write to String");
        }
        out
    }

    /// Fixed-width table, one line per (alternative, n); `*` marks the
    /// two highest powers of each row.
    pub fn to_pretty(&self) -> String {
        let d = self.config.decimals as usize;
        let mut out = String::new();
        write!(out, "{:<14}{:>5}", "alternative", "n").unwrap();
        for t in &self.config.tests {
            write!(out, "{:>9}", t.label()).unwrap();
        }
        out.push('\n');
        for row in self.cells.chunks(self.config.tests.len()) {
            write!(out, "{:<14}{:>5}", row[0].alternative, row[0].n).unwrap();
            for c in row {
                let text = match c.rejection_rate {
                    Some(p) => format!(
                        "{:.*}{}",
                        d,
                        percent(p, self.config.decimals),
                        if c.top { "*" } else { " " }
                    ),
                    None => "NA ".to_string(),
                };
                write!(out, "{text:>9}").unwrap();
            }
            out.push('\n');
        }
        let worst = self
            .cells
            .iter()
            .filter_map(|c| c.standard_error())
            .fold(0.0f64, f64::max);
        writeln!(
            out,
            "MC = {}, alpha = {}, seed = {}; largest standard error {:.2} points",
            self.config.mc,
            self.config.alpha,
            self.config.seed,
            100.0 * worst
        )
        .unwrap();
        out
    }
}
