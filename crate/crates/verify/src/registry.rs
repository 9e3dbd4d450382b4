//! Name → suite table used by the CLI and the acceptance tests.

use std::time::Instant;

use harmspace::report::VerificationReport;

use crate::config::SuiteConfig;
use crate::error::{Result, VerifyError};
use crate::suites::{distance, exponents, identities, multipliers, reproduction, wellkn};

pub struct SuiteInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    /// Config keys the suite reads.
    pub params: &'static str,
    pub run: fn(&SuiteConfig) -> Result<VerificationReport>,
}

const SUITES: &[SuiteInfo] = &[
    SuiteInfo { name: "gamma-exact", anchor: identities::GAMMA_ANCHOR, params: "n, s, t, order", run: identities::gamma_exact },
    SuiteInfo { name: "poisson", anchor: identities::POISSON_ANCHOR, params: "n, cases, degree, tol", run: identities::poisson },
    SuiteInfo { name: "pairing", anchor: identities::PAIRING_ANCHOR, params: "n, m, degree, cases, tol", run: identities::pairing },
    SuiteInfo { name: "reproduction", anchor: reproduction::BALL_ANCHOR, params: "n, beta, degree, cases, tol", run: reproduction::ball },
    SuiteInfo {
        name: "reproduction-halfspace",
        anchor: reproduction::HALFSPACE_ANCHOR,
        params: "m, cases, tol",
        run: reproduction::halfspace,
    },
    SuiteInfo { name: "rro", anchor: exponents::RRO_ANCHOR, params: "alpha, lambda, order, tol", run: exponents::rro },
    SuiteInfo { name: "qbeta", anchor: exponents::QBETA_ANCHOR, params: "beta, delta, gamma, tol", run: exponents::qbeta },
    SuiteInfo { name: "kernel-estimate", anchor: exponents::KERNEL_ANCHOR, params: "n, beta, tol", run: exponents::kernel_estimate },
    SuiteInfo { name: "qm", anchor: exponents::QM_ANCHOR, params: "m, delta, gamma, tol", run: exponents::qm },
    SuiteInfo { name: "fy-estimates", anchor: exponents::FY_ANCHOR, params: "n, m, p, alpha, tol", run: exponents::fy_estimates },
    SuiteInfo { name: "wellkn", anchor: wellkn::ANCHOR, params: "alpha, beta, gamma, q, cases, bound", run: wellkn::run },
    SuiteInfo {
        name: "multipliers",
        anchor: multipliers::MULTIPLIER_ANCHOR,
        params: "n, alpha, beta, m, degree, cases, bound",
        run: multipliers::multipliers,
    },
    SuiteInfo {
        name: "young",
        anchor: multipliers::YOUNG_ANCHOR,
        params: "n, p, q, s (as r), alpha, beta, gamma, degree, cases, bound",
        run: multipliers::young,
    },
    SuiteInfo {
        name: "embedding",
        anchor: multipliers::EMBEDDING_ANCHOR,
        params: "n, p, alpha, m, degree, cases, bound",
        run: multipliers::embedding,
    },
    SuiteInfo { name: "distance-ball", anchor: distance::BALL_ANCHOR, params: "n, p, alpha, eps", run: distance::ball },
    SuiteInfo { name: "distance-halfspace", anchor: distance::HALFSPACE_ANCHOR, params: "p, alpha, m, eps", run: distance::halfspace },
];

pub fn suites() -> &'static [SuiteInfo] {
    SUITES
}

pub fn find(name: &str) -> Result<&'static SuiteInfo> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
        VerifyError::Usage(format!("unknown suite '{name}'; expected one of {}", names.join(", ")))
    })
}

/// Runs the suite named in `cfg.suite` and records the wall time.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let info = find(&cfg.suite)?;
    let start = Instant::now();
    let mut report = (info.run)(cfg)?;
    report.timing = Some(start.elapsed());
    Ok(report)
}
