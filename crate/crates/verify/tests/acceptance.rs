//! One pass/fail line per acceptance criterion on the desk tier. Runs the
//! suites through the registry, checks case counts, verdicts and wall-time
//! limits, then re-runs every suite to compare report bytes.

use std::process::ExitCode;
use std::time::Duration;

use harmspace::report::VerificationReport;
use harmspace_verify::export::{to_csv, to_json};
use harmspace_verify::{run_suite, SuiteConfig};

struct Run {
    report: VerificationReport,
    time: Duration,
}

fn run(name: &str) -> Run {
    let report = run_suite(&SuiteConfig::new(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    let time = report.timing.unwrap_or_default();
    Run { report, time }
}

fn count(r: &VerificationReport, prefix: &str) -> usize {
    r.cases.iter().filter(|c| c.case_id.starts_with(prefix)).count()
}

struct Gate {
    failed: usize,
}

impl Gate {
    fn line(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("criterion {id} {name:<28} {} {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn summary(runs: &[&Run]) -> (bool, usize, usize, Duration) {
    let ok = runs.iter().all(|r| r.report.verdict && r.report.recomputed_verdict());
    let cases = runs.iter().map(|r| r.report.cases.len()).sum();
    let failed = runs.iter().map(|r| r.report.failures().count()).sum();
    let time = runs.iter().map(|r| r.time).sum();
    (ok, cases, failed, time)
}

fn timed(gate: &mut Gate, id: usize, name: &str, runs: &[&Run], limit: Option<f64>, extra: bool, note: &str) {
    let (ok, cases, failed, time) = summary(runs);
    let secs = time.as_secs_f64();
    let in_time = limit.is_none_or(|l| secs < l);
    let limit_text = limit.map_or(String::new(), |l| format!(" (limit {l} s)"));
    gate.line(
        id,
        name,
        ok && in_time && extra,
        format!("{cases} cases, {failed} failed, {secs:.2} s{limit_text}{note}"),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };

    let gamma = run("gamma-exact");
    let worst = gamma.report.cases.iter().fold(0.0f64, |a, c| a.max((c.value - c.expected).abs() / c.expected.abs()));
    timed(&mut gate, 1, "exact gamma integral", &[&gamma], Some(1.0), gamma.report.cases.len() == 24, &format!(", worst rel err {worst:.1e}"));

    let poisson = run("poisson");
    let cfg = &poisson.report.config;
    let sized = cfg["cases"].as_u64() == Some(200)
        && cfg["max_degree"].as_u64().is_some_and(|k| k >= 12)
        && cfg["tol"].as_f64() == Some(1e-8)
        && cfg["addition_tol"].as_f64() == Some(1e-10);
    timed(&mut gate, 2, "poisson consistency", &[&poisson], Some(10.0), sized, "");

    let repro = run("reproduction");
    let half = run("reproduction-halfspace");
    let sized = count(&repro.report, "") == 8 && count(&half.report, "") == 10;
    timed(&mut gate, 3, "reproduction formulas", &[&repro, &half], Some(60.0), sized, "");

    let rro = run("rro");
    let qbeta = run("qbeta");
    let qm = run("qm");
    let fy = run("fy-estimates");
    let kernel = run("kernel-estimate");
    let sized = count(&fy.report, "") == 24;
    timed(&mut gate, 4, "asymptotic exponents", &[&rro, &qbeta, &qm, &fy, &kernel], Some(120.0), sized, "");

    let wellkn = run("wellkn");
    let sized = wellkn.report.config["functions"].as_u64() == Some(100);
    timed(&mut gate, 5, "increasing-G inequality", &[&wellkn], None, sized, "");

    let pairing = run("pairing");
    timed(&mut gate, 6, "pairing identity", &[&pairing], None, pairing.report.cases.len() == 50, "");

    let mult = run("multipliers");
    let young = run("young");
    let embedding = run("embedding");
    let sequences = ["bpbq_large", "bpbq_small", "bphs", "h1hp"]
        .iter()
        .map(|s| (0..5).filter(|k| count(&mult.report, &format!("{s}/seq{k}/")) > 0).count())
        .sum::<usize>();
    let sanity = count(&mult.report, "zero/") == 2 && count(&mult.report, "one/") == 2;
    timed(
        &mut gate,
        7,
        "multiplier theorems",
        &[&mult, &young, &embedding],
        None,
        sequences == 20 && sanity,
        &format!(", {sequences} sequences"),
    );

    let ball = run("distance-ball");
    let hs = run("distance-halfspace");
    let slopes = ["constant", "polynomial", "extremal"].iter().all(|f| count(&ball.report, &format!("{f}/f1_slope")) == 1);
    timed(&mut gate, 8, "distance decomposition", &[&ball, &hs], Some(300.0), slopes, "");

    let mut identical = 0;
    let mut mismatched = Vec::new();
    let all = [
        &gamma, &poisson, &repro, &half, &rro, &qbeta, &qm, &fy, &kernel, &wellkn, &pairing, &mult, &young,
        &embedding, &ball, &hs,
    ];
    for r in &all {
        let again = run(&r.report.suite);
        let same = to_json(&r.report).ok() == to_json(&again.report).ok()
            && to_csv(&r.report).ok() == to_csv(&again.report).ok();
        if same {
            identical += 1;
        } else {
            mismatched.push(r.report.suite.clone());
        }
    }
    gate.line(
        9,
        "determinism",
        mismatched.is_empty() && identical > 0,
        format!("{identical} suites byte-identical on re-run{}", if mismatched.is_empty() { String::new() } else { format!(", differing: {mismatched:?}") }),
    );

    let total: Duration = all.iter().map(|r| r.time).sum();
    println!("desk tier total {:.1} s", total.as_secs_f64());
    if gate.failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria fail", gate.failed);
        ExitCode::FAILURE
    }
}
