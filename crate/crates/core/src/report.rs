//! Running an estimator by name and packaging its result.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cgr::cgr_sweep;
use crate::error::{Error, Result};
use crate::five_thirds::estimate_diameter_53;
use crate::graph::{Dist, Graph, Vertex};
use crate::oracle::{exact_metrics, DEFAULT_ORACLE_CAP};
use crate::three_halves::estimate_diameter_32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Cgr,
    ThreeHalves,
    FiveThirds,
    RadiusEcc,
    Exact,
}

impl Algo {
    pub const ALL: [Algo; 5] = [Algo::Cgr, Algo::ThreeHalves, Algo::FiveThirds, Algo::RadiusEcc, Algo::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Cgr => "cgr",
            Algo::ThreeHalves => "three-halves",
            Algo::FiveThirds => "five-thirds",
            Algo::RadiusEcc => "radius-ecc",
            Algo::Exact => "exact",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algo> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm '{s}'")))
    }
}

/// Parameter overrides; `None` picks the algorithm's default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub k: Option<usize>,
    pub q: Option<usize>,
    pub ell: Option<usize>,
    pub big_l: Option<usize>,
    pub oracle_cap: usize,
}

impl Default for Params {
    fn default() -> Params {
        Params {
            k: None,
            q: None,
            ell: None,
            big_l: None,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

pub const DEFAULT_K: usize = 2;

impl Params {
    /// Rejects overrides the chosen algorithm does not take.
    pub fn validate(&self, algo: Algo) -> Result<()> {
        let allowed: &[&str] = match algo {
            Algo::Cgr | Algo::RadiusEcc => &["k", "q"],
            Algo::ThreeHalves => &["ell"],
            Algo::FiveThirds => &["ell", "bigL"],
            Algo::Exact => &[],
        };
        let given = [
            ("k", self.k.is_some()),
            ("q", self.q.is_some()),
            ("ell", self.ell.is_some()),
            ("bigL", self.big_l.is_some()),
        ];
        for (name, set) in given {
            if set && !allowed.contains(&name) {
                return Err(Error::InvalidParameter(format!("--{name} does not apply to {algo}")));
            }
        }
        Ok(())
    }
}

/// Result of one estimator run. Optional fields are omitted from JSON when
/// they do not apply.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub algo: Algo,
    pub n: usize,
    pub m: usize,
    pub directed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(default, rename = "bigL", skip_serializing_if = "Option::is_none")]
    pub big_l: Option<usize>,
    /// Diameter estimate `D̃`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<Dist>,
    /// Pair realising `estimate` (a `d̃` pair when `lower_estimate` is set).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Vertex, Vertex)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_estimate: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_estimate: Option<Dist>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eccentricities: Option<Vec<Dist>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diameter: Option<Dist>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<Dist>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub searches: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spanner_edges: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub set_sizes: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl EstimateReport {
    fn new(algo: Algo, g: &Graph) -> EstimateReport {
        EstimateReport {
            algo,
            n: g.n(),
            m: g.m(),
            directed: g.is_directed(),
            k: None,
            q: None,
            ell: None,
            big_l: None,
            estimate: None,
            witness: None,
            lower_estimate: None,
            radius_estimate: None,
            center: None,
            eccentricities: None,
            diameter: None,
            radius: None,
            searches: None,
            spanner_edges: None,
            set_sizes: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }

    /// JSON without the timing field; identical across runs of one config.
    pub fn to_json_stable(&self) -> String {
        let mut copy = self.clone();
        copy.wall_time_ms = None;
        copy.to_json()
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let mut params = Vec::new();
        for (name, v) in [("k", self.k), ("q", self.q), ("ell", self.ell), ("L", self.big_l)] {
            if let Some(v) = v {
                params.push(format!("{name} = {v}"));
            }
        }
        let line = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        if params.is_empty() {
            line(&mut out, format!("algorithm: {}", self.algo));
        } else {
            line(&mut out, format!("algorithm: {} ({})", self.algo, params.join(", ")));
        }
        let kind = if self.directed { "directed" } else { "undirected" };
        line(&mut out, format!("graph: n = {}, m = {}, {kind}", self.n, self.m));
        if let Some(d) = self.diameter {
            line(&mut out, format!("diameter: {d}"));
        }
        if let Some(r) = self.radius {
            line(&mut out, format!("radius: {r}"));
        }
        if let Some(e) = self.estimate {
            let mut s = format!("diameter estimate: {e}");
            if let Some((a, b)) = self.witness {
                let how = if self.lower_estimate == Some(true) { "lower estimate for" } else { "witness" };
                s.push_str(&format!(" ({how} {a} -> {b})"));
            }
            line(&mut out, s);
        }
        if let Some(r) = self.radius_estimate {
            line(&mut out, format!("radius estimate: {r}"));
        }
        if let Some(c) = self.center {
            line(&mut out, format!("center: {c}"));
        }
        if let Some(ecc) = &self.eccentricities {
            let shown: Vec<String> = ecc.iter().take(20).map(|e| e.to_string()).collect();
            let more = if ecc.len() > 20 { ", ..." } else { "" };
            line(&mut out, format!("eccentricities: [{}{more}]", shown.join(", ")));
        }
        if let Some(s) = self.searches {
            line(&mut out, format!("searches: {s}"));
        }
        if let Some(s) = self.spanner_edges {
            line(&mut out, format!("spanner edges: {s}"));
        }
        if !self.set_sizes.is_empty() {
            let sizes: Vec<String> = self.set_sizes.iter().map(|(k, v)| format!("|{k}| = {v}")).collect();
            line(&mut out, format!("set sizes: {}", sizes.join(", ")));
        }
        if let Some(t) = self.wall_time_ms {
            line(&mut out, format!("time: {t:.3} ms"));
        }
        out
    }
}

/// Runs `algo` on `g` and fills in a report including wall time.
pub fn run_estimator(g: &Graph, algo: Algo, params: &Params) -> Result<EstimateReport> {
    params.validate(algo)?;
    let start = Instant::now();
    let mut report = EstimateReport::new(algo, g);
    match algo {
        Algo::Cgr | Algo::RadiusEcc => {
            let k = params.k.unwrap_or(DEFAULT_K);
            let r = cgr_sweep(g, k, params.q)?;
            report.k = Some(r.k);
            report.q = Some(r.q);
            report.estimate = Some(r.diameter);
            report.witness = Some(r.diameter_pair);
            if algo == Algo::RadiusEcc {
                report.radius_estimate = Some(r.radius);
                report.center = Some(r.center);
                report.eccentricities = Some(r.eccentricities);
            }
            report.searches = Some(r.searches);
            for (i, size) in r.hierarchy.level_sizes().into_iter().enumerate() {
                report.set_sizes.insert(format!("A{i}"), size);
            }
        }
        Algo::ThreeHalves => {
            let r = estimate_diameter_32(g, params.ell)?;
            report.ell = Some(r.ell);
            report.estimate = Some(r.diameter);
            report.witness = Some(r.diameter_pair);
            report.searches = Some(r.searches);
            report.set_sizes.insert("S".into(), r.set_size);
        }
        Algo::FiveThirds => {
            let r = estimate_diameter_53(g, params.ell, params.big_l)?;
            report.ell = Some(r.ell);
            report.big_l = Some(r.big_l);
            report.estimate = Some(r.diameter);
            report.witness = Some(r.diameter_pair);
            report.lower_estimate = Some(r.from_estimate);
            report.searches = Some(r.searches);
            report.spanner_edges = Some(r.spanner_edges);
            report.set_sizes.insert("T".into(), r.t_size);
            report.set_sizes.insert("S1".into(), r.s1_size);
            report.set_sizes.insert("S2".into(), r.s2_size);
        }
        Algo::Exact => {
            let m = exact_metrics(g, params.oracle_cap)?;
            report.diameter = Some(m.diameter);
            report.witness = Some(m.diameter_pair);
            report.radius = Some(m.radius);
            report.center = Some(m.center);
            report.eccentricities = Some(m.eccentricities);
            report.searches = Some(g.n());
        }
    }
    report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1000.0);
    Ok(report)
}
