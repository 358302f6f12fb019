use std::fmt::Write as _;

use pareto_gof::bootstrap::{BootstrapConfig, TestReport};
use pareto_gof::dataset::Rescale;
use pareto_gof::golfer::{reference, REFERENCE_BETA};
use pareto_gof::statistic::TestStatistic;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct TestRow {
    pub test: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub reject: Option<bool>,
    pub error: Option<String>,
}

/// Bootstrap results for one dataset.
#[derive(Debug, Serialize)]
pub struct TestRun {
    pub dataset: String,
    pub n: usize,
    pub beta_hat: f64,
    pub replications: usize,
    pub alpha: f64,
    pub seed: u64,
    pub refit: bool,
    pub results: Vec<TestRow>,
}

impl TestRun {
    pub fn new(
        dataset: &str,
        n: usize,
        beta_hat: f64,
        cfg: &BootstrapConfig,
        tests: &[TestStatistic],
        reports: Vec<pareto_gof::Result<TestReport>>,
    ) -> Self {
        let results = tests
            .iter()
            .zip(reports)
            .map(|(t, r)| match r {
                Ok(rep) => TestRow {
                    test: rep.test.clone(),
                    statistic: Some(rep.statistic),
                    p_value: Some(rep.p_value),
                    reject: Some(rep.rejects(cfg.alpha())),
                    error: None,
                },
                Err(e) => TestRow {
                    test: t.label().to_string(),
                    statistic: None,
                    p_value: None,
                    reject: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        Self {
            dataset: dataset.to_string(),
            n,
            beta_hat,
            replications: cfg.replications(),
            alpha: cfg.alpha(),
            seed: cfg.seed(),
            refit: cfg.refit(),
            results,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("test,statistic,p_value,reject,beta_hat,B,seed,refit\n");
        for r in &self.results {
            writeln!(
                out,
                "{},{},{},{},{:.6},{},{},{}",
                r.test,
                opt(r.statistic, 6),
                opt(r.p_value, 4),
                r.reject.map_or("NA".to_string(), |b| b.to_string()),
                self.beta_hat,
                self.replications,
                self.seed,
                self.refit
            )
            .unwrap();
        }
        out
    }

    fn header(&self) -> String {
        format!(
            "dataset {} (n = {}), beta_hat = {:.4}\nbootstrap: B = {}, seed = {}, {}\n",
            self.dataset,
            self.n,
            self.beta_hat,
            self.replications,
            self.seed,
            if self.refit {
                "shape refitted in every bootstrap sample"
            } else {
                "shape held at beta_hat"
            }
        )
    }

    pub fn to_pretty(&self) -> String {
        let mut out = self.header();
        writeln!(
            out,
            "{:<6}{:>14}{:>10}  reject at {}",
            "test", "statistic", "p-value", self.alpha
        )
        .unwrap();
        for r in &self.results {
            match &r.error {
                None => writeln!(
                    out,
                    "{:<6}{:>14}{:>10}  {}",
                    r.test,
                    sci(r.statistic.unwrap()),
                    format!("{:.4}", r.p_value.unwrap()),
                    if r.reject == Some(true) { "yes" } else { "no" }
                ),
                Some(e) => writeln!(out, "{:<6}  undefined: {e}", r.test),
            }
            .unwrap();
        }
        out
    }
}

fn opt(v: Option<f64>, decimals: usize) -> String {
    v.map_or("NA".to_string(), |x| format!("{x:.decimals$}"))
}

/// Small values in scientific notation, the rest with fixed decimals.
fn sci(x: f64) -> String {
    if x != 0.0 && x.abs() < 0.01 {
        format!("{x:.3e}")
    } else {
        format!("{x:.4}")
    }
}

#[derive(Debug, Serialize)]
pub struct GolferRow {
    pub test: String,
    pub statistic: Option<f64>,
    pub reference_statistic: f64,
    pub statistic_pass: bool,
    pub p_value: Option<f64>,
    pub reference_p_value: f64,
    pub p_value_pass: bool,
}

/// A [`TestRun`] on the golfer data compared cell by cell with the
/// reference table.
#[derive(Debug, Serialize)]
pub struct GolferReport {
    pub rescale: String,
    /// Moment estimate on the earnings divided by the recording threshold.
    pub beta_hat_threshold: f64,
    pub beta_pass: bool,
    pub rows: Vec<GolferRow>,
    pub passed: usize,
    pub checked: usize,
    pub run: TestRun,
}

impl GolferReport {
    pub fn new(run: TestRun, rescale: Rescale, beta_hat_threshold: f64) -> Self {
        let rows: Vec<GolferRow> = run
            .results
            .iter()
            .filter_map(|r| {
                let reference = reference(&r.test)?;
                Some(GolferRow {
                    test: r.test.clone(),
                    statistic: r.statistic,
                    reference_statistic: reference.statistic,
                    statistic_pass: r.statistic.is_some_and(|v| reference.statistic_matches(v)),
                    p_value: r.p_value,
                    reference_p_value: reference.p_value,
                    p_value_pass: r.p_value.is_some_and(|p| reference.p_value_matches(p)),
                })
            })
            .collect();
        let beta_pass = (beta_hat_threshold - REFERENCE_BETA).abs() <= 0.001;
        let passed = rows
            .iter()
            .map(|r| r.statistic_pass as usize + r.p_value_pass as usize)
            .sum::<usize>()
            + beta_pass as usize;
        let checked = 2 * rows.len() + 1;
        let rescale = match rescale {
            Rescale::None => "none".to_string(),
            Rescale::Threshold(t) => format!("divide by {t}"),
            Rescale::SampleMinimum => "divide by sample minimum".to_string(),
        };
        Self {
            rescale,
            beta_hat_threshold,
            beta_pass,
            rows,
            passed,
            checked,
            run,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("test,statistic,reference_statistic,statistic_pass,p_value,reference_p_value,p_value_pass\n");
        writeln!(
            out,
            "beta_hat,{:.6},{},{},NA,NA,NA",
            self.beta_hat_threshold, REFERENCE_BETA, self.beta_pass
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.test,
                opt(r.statistic, 6),
                r.reference_statistic,
                r.statistic_pass,
                opt(r.p_value, 4),
                r.reference_p_value,
                r.p_value_pass
            )
            .unwrap();
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
        let mut out = self.run.header();
        writeln!(out, "rescaling: {}", self.rescale).unwrap();
        writeln!(
            out,
            "beta_hat on earnings / 700 = {:.4} (reference {REFERENCE_BETA}) {}\n",
            self.beta_hat_threshold,
            verdict(self.beta_pass)
        )
        .unwrap();
        writeln!(
            out,
            "{:<6}{:>12}{:>12}{:>6}{:>10}{:>10}{:>6}",
            "test", "statistic", "reference", "", "p-value", "reference", ""
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:<6}{:>12}{:>12}{:>6}{:>10}{:>10}{:>6}",
                r.test,
                r.statistic.map_or("undefined".to_string(), sci),
                sci(r.reference_statistic),
                verdict(r.statistic_pass),
                opt(r.p_value, 4),
                format!("{:.4}", r.reference_p_value),
                verdict(r.p_value_pass)
            )
            .unwrap();
        }
        for r in self.run.results.iter().filter(|r| r.error.is_some()) {
            writeln!(out, "note: {}: {}", r.test, r.error.as_deref().unwrap_or_default()).unwrap();
        }
        let rejected: Vec<&str> = self
            .run
            .results
            .iter()
            .filter(|r| r.reject == Some(true))
            .map(|r| r.test.as_str())
            .collect();
        writeln!(
            out,
            "\n{} of {} cells agree with the reference; rejected at {}: {}",
            self.passed,
            self.checked,
            self.run.alpha,
            if rejected.is_empty() {
                "none".to_string()
            } else {
                rejected.join(", ")
            }
        )
        .unwrap();
        out
    }
}
