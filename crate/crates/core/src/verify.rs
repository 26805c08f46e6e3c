//! Checks an estimator's output against the exact oracle, one integer
//! inequality at a time.

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::oracle::{exact_metrics, ExactMetrics};
use crate::report::{run_estimator, Algo, EstimateReport, Params, DEFAULT_K};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// The inequality with numbers substituted.
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        format!("{}: {verdict} ({})", self.name, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub report: EstimateReport,
    pub diameter: u64,
    pub radius: u64,
    pub max_weight: u64,
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn ge(name: &str, lhs: i128, lhs_text: String, rhs: i128, rhs_text: String) -> Check {
    Check::new(name, lhs >= rhs, format!("{lhs_text} ≥ {rhs_text}"))
}

/// `D̃ ≤ D` plus the algorithm's lower bound.
pub fn diameter_checks(algo: Algo, k: usize, estimate: u64, exact: &ExactMetrics, max_weight: u64) -> Vec<Check> {
    let (dt, d, mw) = (estimate as i128, exact.diameter as i128, max_weight as i128);
    let mut checks = vec![ge("D ≥ D̃", d, d.to_string(), dt, dt.to_string())];
    match algo {
        Algo::Cgr | Algo::RadiusEcc => {
            let p = 1i128 << (k - 1);
            let (a, b, c) = (2 * p - 1, p, p - 1);
            let rhs = b * d - c * mw;
            checks.push(ge(
                &format!("{a}·D̃ ≥ {b}·D − {c}·M"),
                a * dt,
                format!("{a}·{dt}"),
                rhs,
                format!("{b}·{d} − {c}·{mw} = {rhs}"),
            ));
        }
        Algo::ThreeHalves => {
            checks.push(ge("3·D̃ ≥ 2·D", 3 * dt, format!("3·{dt}"), 2 * d, (2 * d).to_string()));
        }
        Algo::FiveThirds => {
            let slack = 18.max(25 - d);
            let rhs = 9 * d - slack;
            checks.push(ge(
                "15·D̃ ≥ 9·D − max(18, 25−D)",
                15 * dt,
                format!("15·{dt}"),
                rhs,
                format!("9·{d} − {slack} = {rhs}"),
            ));
        }
        Algo::Exact => {}
    }
    checks
}

/// Radius and per-vertex eccentricity bounds of the CGR sweep.
pub fn radius_ecc_checks(k: usize, radius_est: u64, ecc_est: &[u64], exact: &ExactMetrics, max_weight: u64) -> Vec<Check> {
    let p = 1i128 << (k - 1);
    let mw = max_weight as i128;
    let (rt, r) = (radius_est as i128, exact.radius as i128);
    let rhs = (2 * p - 1) * r + (p - 1) * mw;
    let mut checks = vec![
        ge("R̃ ≥ R", rt, rt.to_string(), r, r.to_string()),
        Check::new(
            format!("{p}·R̃ ≤ {}·R + {}·M", 2 * p - 1, p - 1),
            p * rt <= rhs,
            format!("{p}·{rt} ≤ {}·{r} + {}·{mw} = {rhs}", 2 * p - 1, p - 1),
        ),
    ];
    let (a, b, c) = (3 * p - 1, p + 1, 2 * p - 2);
    let mut upper_fail = None;
    let mut lower_fail = None;
    for (w, (&et, &e)) in ecc_est.iter().zip(&exact.eccentricities).enumerate() {
        let (et, e) = (et as i128, e as i128);
        if et > e && upper_fail.is_none() {
            upper_fail = Some(format!("w = {w}: {et} > {e}"));
        }
        if a * et < b * e - c * mw && lower_fail.is_none() {
            lower_fail = Some(format!("w = {w}: {a}·{et} < {b}·{e} − {c}·{mw}"));
        }
    }
    let n = ecc_est.len();
    checks.push(Check::new(
        "ε̃_w ≤ ε(w) for all w",
        upper_fail.is_none(),
        upper_fail.unwrap_or_else(|| format!("{n}/{n} vertices")),
    ));
    checks.push(Check::new(
        format!("{a}·ε̃_w ≥ {b}·ε(w) − {c}·M for all w"),
        lower_fail.is_none(),
        lower_fail.unwrap_or_else(|| format!("{n}/{n} vertices")),
    ));
    checks
}

/// Runs `algo` and the oracle on `g` and evaluates every applicable bound.
pub fn verify(g: &Graph, algo: Algo, params: &Params) -> Result<Verdict> {
    let report = run_estimator(g, algo, params)?;
    let exact = exact_metrics(g, params.oracle_cap)?;
    let mw = g.max_weight();
    let k = report.k.unwrap_or(DEFAULT_K);
    let mut checks = Vec::new();
    match algo {
        Algo::Exact => {
            let ecc = &exact.eccentricities;
            let d = report.diameter.unwrap_or(0);
            let r = report.radius.unwrap_or(0);
            let max = ecc.iter().copied().max().unwrap_or(0);
            let min = ecc.iter().copied().min().unwrap_or(0);
            checks.push(Check::new("D = max ε", d == max, format!("{d} = {max}")));
            checks.push(Check::new("R = min ε", r == min, format!("{r} = {min}")));
        }
        _ => {
            let est = report.estimate.unwrap_or(0);
            checks.extend(diameter_checks(algo, k, est, &exact, mw));
            if algo == Algo::RadiusEcc {
                let r = report.radius_estimate.unwrap_or(0);
                let ecc = report.eccentricities.as_deref().unwrap_or(&[]);
                checks.extend(radius_ecc_checks(k, r, ecc, &exact, mw));
            }
        }
    }
    Ok(Verdict {
        report,
        diameter: exact.diameter,
        radius: exact.radius,
        max_weight: mw,
        checks,
    })
}
