//! Acceptance gate. Prints one `PASS`/`FAIL` line per check, grouped by
//! criterion, and exits non-zero if any check fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use pareto_gof::bootstrap::{pvalue_battery, warp_speed_battery, BootstrapConfig};
use pareto_gof::classical::{mellin_integrals, MellinWeight};
use pareto_gof::dataset::Rescale;
use pareto_gof::distributions::{mom_estimate, sample_alternative, AlternativeSpec};
use pareto_gof::ecf::{self, naive, EcfConfig, EcfForm, Kernel};
use pareto_gof::golfer::{golfer_sample, reference, REFERENCE_BETA, REFERENCE_REPLICATIONS};
use pareto_gof::par::Execution;
use pareto_gof::rng;
use pareto_gof::statistic::{parse_test_list, TestStatistic, Tuning};
use pareto_gof::study::{run_power_study, PowerStudyConfig};
use rand::Rng;

const SEED: u64 = 20_240_617;
const MC: usize = 10_000;
const ALPHA: f64 = 0.05;

#[derive(Default)]
struct Gate {
    passed: usize,
    failed: Vec<String>,
}

impl Gate {
    fn check(&mut self, criterion: u32, name: &str, ok: bool, detail: String) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("[{verdict}] C{criterion} {name}: {detail}");
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(format!("C{criterion} {name}"));
        }
    }

    fn timed(&mut self, criterion: u32, started: Instant, limit: Duration) {
        let took = started.elapsed();
        self.check(
            criterion,
            "runtime",
            took < limit,
            format!("{:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()),
        );
    }
}

fn battery() -> Vec<TestStatistic> {
    TestStatistic::battery(Tuning::default()).unwrap()
}

fn alt(label: &str) -> AlternativeSpec {
    label.parse().unwrap()
}

fn golfer_statistics(gate: &mut Gate) {
    let started = Instant::now();
    let by_threshold = golfer_sample(Rescale::Threshold(700.0));
    let beta = mom_estimate(&by_threshold).unwrap().beta();
    gate.check(
        1,
        "beta_hat (earnings / 700)",
        (beta - REFERENCE_BETA).abs() <= 0.001,
        format!("{beta:.4} vs {REFERENCE_BETA} +- 0.001"),
    );

    let by_minimum = golfer_sample(Rescale::SampleMinimum);
    for test in battery() {
        let r = reference(test.label()).unwrap();
        let tol = match r.significant_figures {
            Some(sf) => format!("{sf} significant figure"),
            None => format!("+- {}", r.statistic_tol),
        };
        match test.evaluate(&by_minimum) {
            Ok(v) => gate.check(
                1,
                &format!("{test} statistic (earnings / minimum)"),
                r.statistic_matches(v),
                format!("{v:.5} vs {} {tol}", r.statistic),
            ),
            Err(e) => gate.check(
                1,
                &format!("{test} statistic (earnings / minimum)"),
                false,
                format!("{e} vs {} {tol}", r.statistic),
            ),
        }
    }
    for test in battery() {
        let v = test.evaluate(&by_threshold).unwrap();
        println!("       C1 note: {test} on earnings / 700 = {v:.5}");
    }
    gate.timed(1, started, Duration::from_secs(1));
}

fn golfer_pvalues(gate: &mut Gate) {
    let started = Instant::now();
    let data = golfer_sample(Rescale::Threshold(700.0));
    let cfg = BootstrapConfig::new(REFERENCE_REPLICATIONS, ALPHA, SEED)
        .unwrap()
        .with_refit(false);
    let reports = pvalue_battery(&data, &battery(), &cfg).unwrap();
    for (test, report) in battery().iter().zip(reports) {
        let r = reference(test.label()).unwrap();
        match report {
            Ok(rep) => gate.check(
                2,
                &format!("{test} p-value (earnings / 700, beta fixed)"),
                r.p_value_matches(rep.p_value),
                format!("{:.4} vs {} +- 0.02 (beta {:.4})", rep.p_value, r.p_value, rep.beta_hat),
            ),
            Err(e) => gate.check(2, &format!("{test} p-value"), false, e.to_string()),
        }
    }
    gate.timed(2, started, Duration::from_secs(120));

    // Same bootstrap on the minimum-rescaled data with the shape refitted
    // in every bootstrap sample; informational only.
    let data = golfer_sample(Rescale::SampleMinimum);
    let cfg = cfg.with_refit(true);
    let reports = pvalue_battery(&data, &battery(), &cfg).unwrap();
    for (test, report) in battery().iter().zip(reports) {
        let r = reference(test.label()).unwrap();
        let shown = match report {
            Ok(rep) => format!("{:.4}", rep.p_value),
            Err(e) => e.to_string(),
        };
        println!(
            "       C2 note: {test} p-value (earnings / minimum, refit) = {shown} vs {}",
            r.p_value
        );
    }
}

fn size_control(gate: &mut Gate) {
    let started = Instant::now();
    let cfg = BootstrapConfig::new(MC, ALPHA, SEED).unwrap();
    for (ai, label) in ["P(2)", "P(5)", "P(10)"].iter().enumerate() {
        for (ni, n) in [20, 30].into_iter().enumerate() {
            let est = warp_speed_battery(&alt(label), n, &battery(), &cfg, &[ai as u64, ni as u64]).unwrap();
            for e in est {
                let rate = e.rejection_rate;
                gate.check(
                    3,
                    &format!("size {label} n={n} {}", e.test),
                    (0.035..=0.065).contains(&rate),
                    format!("{:.4} in [0.035, 0.065]", rate),
                );
            }
        }
    }
    gate.timed(3, started, Duration::from_secs(20 * 60));
}

fn power_spot_checks(gate: &mut Gate) {
    let cases: [(&str, usize, &str, f64); 10] = [
        ("W(1.5)", 20, "S1", 97.0),
        ("W(1.5)", 20, "S2", 97.0),
        ("GAM(1)", 20, "S2", 51.0),
        ("LN(2.5)", 20, "T1", 43.0),
        ("LN(2.5)", 20, "T2", 47.0),
        ("GAM(1.2)", 30, "S2", 92.0),
        ("LN(1)", 30, "ZA", 98.0),
        ("LNMIX(0.9)", 30, "G", 86.0),
        ("LNMIX(0.9)", 30, "S2", 87.0),
        ("EXPMIX(0.9)", 30, "S1", 25.0),
    ];
    let cfg = BootstrapConfig::new(MC, ALPHA, SEED).unwrap();
    for (i, (label, n, test, expect)) in cases.into_iter().enumerate() {
        let t = parse_test_list(test, Tuning::default()).unwrap();
        let est = warp_speed_battery(&alt(label), n, &t, &cfg, &[100 + i as u64]).unwrap();
        let got = 100.0 * est[0].rejection_rate;
        gate.check(
            4,
            &format!("power {label} n={n} {test}"),
            (got - expect).abs() <= 3.0,
            format!("{got:.2} vs {expect} +- 3 (se {:.2})", 100.0 * est[0].standard_error()),
        );
    }
}

fn oracle_suite(gate: &mut Gate) {
    let started = Instant::now();
    let mut r = rng::stream(SEED, &[5]);
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for m in [2, 3].into_iter().filter(|&m| m <= n) {
            let s = small_sample(SEED, (10 * n + m) as u64, n);
            for _ in 0..25 {
                let t = r.random_range(-10.0..10.0);
                for form in [EcfForm::V, EcfForm::U] {
                    let fast = ecf::ecf_min(&s, m, form, t).unwrap();
                    let slow = naive::ecf_min_naive(&s, m, t, form).unwrap();
                    worst = worst.max((fast - slow).norm());
                }
            }
        }
    }
    gate.check(
        5,
        "single-sum ECF vs enumeration (n <= 8, m in {2,3}, 25 t)",
        worst < 1e-12,
        format!("max |diff| {worst:.2e} < 1e-12"),
    );

    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let n = 4 + (i as usize % 5);
        let m = 2 + (i as usize % 2);
        let a = [0.5, 1.0, 2.0, 3.0][i as usize % 4];
        let s = small_sample(SEED, 1000 + i, n);
        for kernel in [Kernel::Laplace, Kernel::Gaussian] {
            for form in [EcfForm::V, EcfForm::U] {
                let got = ecf::statistic(&s, &EcfConfig::new(m, a, kernel, form).unwrap()).unwrap();
                let expect = statistic_by_quadrature(&s, m, a, kernel, form);
                worst = worst.max(relative_error(got, expect));
            }
        }
    }
    gate.check(
        5,
        "closed-form S/T vs quadrature (20 samples x 4 statistics)",
        worst < 1e-6,
        format!("max relative error {worst:.2e} < 1e-6"),
    );

    let mut worst = 0.0f64;
    for i in 0..5 {
        let s = small_sample(SEED, 2000 + i, 4);
        for kernel in [Kernel::Laplace, Kernel::Gaussian] {
            let got = ecf::stat_s(&s, 2, 1.0, kernel).unwrap();
            let expect = naive::v_statistic_2m(&s, 2, 1.0, kernel).unwrap();
            worst = worst.max(relative_error(got, expect));
        }
    }
    gate.check(
        5,
        "closed-form S vs 2m-fold V-statistic enumeration",
        worst < 1e-10,
        format!("max relative error {worst:.2e} < 1e-10"),
    );

    let mut worst = 0.0f64;
    for x in [1.0, 1.5, std::f64::consts::E, 10.0] {
        for a in [0.5, 1.0, 2.0] {
            let m = mellin_integrals(x, MellinWeight::new(a).unwrap()).unwrap();
            for (k, got) in [m.i0, m.i1, m.i2].into_iter().enumerate() {
                worst = worst.max((got - mellin_by_quadrature(x, a, k as i32)).abs());
            }
        }
    }
    gate.check(
        5,
        "Mellin closed forms vs quadrature",
        worst < 1e-8,
        format!("max |diff| {worst:.2e} < 1e-8"),
    );
    gate.timed(5, started, Duration::from_secs(60));
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[k - 1] + v[k])
    } else {
        v[k]
    }
}

fn median_t_over_n(label: &str, n: usize, kernel: Kernel, stream: u64) -> f64 {
    let cfg = EcfConfig::new(3, 2.0, kernel, EcfForm::U).unwrap();
    let spec = alt(label);
    median(
        (0..50u64)
            .map(|i| {
                let mut r = rng::stream(SEED, &[6, stream, n as u64, i]);
                let s = sample_alternative(&spec, n, &mut r).unwrap();
                ecf::statistic(&s, &cfg).unwrap() / n as f64
            })
            .collect(),
    )
}

fn consistency(gate: &mut Gate) {
    let started = Instant::now();
    for (name, kernel) in [("T1", Kernel::Laplace), ("T2", Kernel::Gaussian)] {
        let w: Vec<f64> = [200, 400, 800]
            .iter()
            .map(|&n| median_t_over_n("W(1.5)", n, kernel, 0))
            .collect();
        let hi = w.iter().cloned().fold(f64::MIN, f64::max);
        let lo = w.iter().cloned().fold(f64::MAX, f64::min);
        let spread = (hi - lo) / lo;
        gate.check(
            6,
            &format!("{name} W(1.5) median T/n stable over n"),
            lo > 0.0 && spread < 0.25,
            format!(
                "{:.5} / {:.5} / {:.5}, spread {:.1}% < 25%",
                w[0],
                w[1],
                w[2],
                100.0 * spread
            ),
        );
        let null = median_t_over_n("P(2)", 800, kernel, 1);
        gate.check(
            6,
            &format!("{name} W(1.5) exceeds 10x P(2) at n=800"),
            w[2] > 10.0 * null,
            format!("{:.5} vs 10 x {:.6}", w[2], null),
        );
    }
    gate.timed(6, started, Duration::from_secs(120));
}

fn study(exec: Execution) -> (String, String) {
    let mut cfg = PowerStudyConfig::from_toml(
        r#"
        tests = "all"
        alternatives = ["P(2)", "W(1.5)", "LNMIX(0.5)"]
        sample_sizes = [20]
        mc = 500
        alpha = 0.05
        seed = 77
        decimals = 1
        "#,
    )
    .unwrap();
    cfg.exec = exec;
    let table = run_power_study(&cfg).unwrap();
    (table.to_csv(), serde_json::to_string(&table).unwrap())
}

fn pvalue_json(exec: Execution) -> String {
    let data = golfer_sample(Rescale::Threshold(700.0));
    let cfg = BootstrapConfig::new(500, ALPHA, 3).unwrap().with_execution(exec);
    let reports: Vec<_> = pvalue_battery(&data, &battery(), &cfg)
        .unwrap()
        .into_iter()
        .map(|r| r.unwrap())
        .collect();
    serde_json::to_string(&reports).unwrap()
}

fn determinism(gate: &mut Gate) {
    let (csv_a, json_a) = study(Execution::Parallel);
    let (csv_b, json_b) = study(Execution::Sequential);
    let (csv_c, json_c) = study(Execution::Parallel);
    gate.check(
        7,
        "power-study CSV byte-identical (parallel, serial, repeat)",
        csv_a == csv_b && csv_a == csv_c,
        format!("{} bytes", csv_a.len()),
    );
    gate.check(
        7,
        "power-study JSON byte-identical (parallel, serial, repeat)",
        json_a == json_b && json_a == json_c,
        format!("{} bytes", json_a.len()),
    );
    let p = pvalue_json(Execution::Parallel);
    let q = pvalue_json(Execution::Sequential);
    gate.check(
        7,
        "p-value report JSON byte-identical (parallel, serial)",
        p == q && p == pvalue_json(Execution::Parallel),
        format!("{} bytes", p.len()),
    );
}

fn main() {
    let mut gate = Gate::default();
    golfer_statistics(&mut gate);
    golfer_pvalues(&mut gate);
    size_control(&mut gate);
    power_spot_checks(&mut gate);
    oracle_suite(&mut gate);
    consistency(&mut gate);
    determinism(&mut gate);

    println!();
    println!("acceptance: {} passed, {} failed", gate.passed, gate.failed.len());
    for f in &gate.failed {
        println!("  failed: {f}");
    }
    if !gate.failed.is_empty() {
        std::process::exit(1);
    }
}
