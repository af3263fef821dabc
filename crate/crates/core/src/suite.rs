//! Verification suites and the report they produce.
//!
//! Expected outcomes come from `data/expectations.toml`. A suite passes when
//! every observed value matches its expectation, including the expected
//! negatives at small `n`.

use std::collections::BTreeMap;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automorphisms::{self, AutGroup};
use crate::connectivity::{self, CertificateMode, ModeRequest};
use crate::domination;
use crate::error::{Error, Result};
use crate::graph::{BlockKind, PancakeGraph, VertexId};
use crate::permutations::Permutation;

pub const REPORT_SCHEMA_VERSION: &str = "1.0.0";
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const MIN_SUITE_N: usize = 3;
pub const MAX_SUITE_N: usize = 8;

/// Perfect-code enumeration above this `n` needs `deep`.
pub const DOMINATION_DEFAULT_MAX_N: usize = 6;
/// Automorphism search above this `n` needs `deep`.
pub const AUTOMORPHISM_DEFAULT_MAX_N: usize = 6;

const EXPECTATIONS_TOML: &str = include_str!("../data/expectations.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Connectivity,
    Domination,
    Automorphisms,
    Structure,
    /// Neighborhood determination; named `thm31` on the command line.
    #[serde(rename = "thm31")]
    Neighborhood,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Connectivity, Suite::Domination, Suite::Automorphisms, Suite::Structure, Suite::Neighborhood];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Connectivity => "connectivity",
            Suite::Domination => "domination",
            Suite::Automorphisms => "automorphisms",
            Suite::Structure => "structure",
            Suite::Neighborhood => "thm31",
        }
    }

    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|s| s.name() == name).map(|&s| vec![s])
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Allow the expensive `n = 7` enumerations.
    pub deep: bool,
    /// Demand exhaustive connectivity certificates (refuse otherwise).
    pub exhaustive: bool,
    /// Run independent suites concurrently.
    pub parallel: bool,
    /// Wall-clock cap for any single suite.
    pub budget: Option<Duration>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Expectation {
    pub n: usize,
    pub kappa: usize,
    pub girth: u32,
    pub super_connected: bool,
    pub hyper_connected: bool,
    pub eds_count: usize,
    pub aut_order: u64,
    pub grr: bool,
    pub edge_orbits: Option<usize>,
    #[serde(default)]
    pub nd_unique: bool,
    #[serde(default)]
    pub nd_extra_sets: Vec<Vec<Vec<u8>>>,
}

#[derive(Deserialize)]
struct ExpectationTable {
    #[allow(dead_code)]
    schema: u32,
    case: Vec<Expectation>,
}

pub fn expectations() -> Vec<Expectation> {
    toml::from_str::<ExpectationTable>(EXPECTATIONS_TOML).expect("bundled expectation table parses").case
}

pub fn expectation_for(n: usize) -> Result<Expectation> {
    expectations()
        .into_iter()
        .find(|e| e.n == n)
        .ok_or_else(|| Error::domain(format!("no expectations recorded for n = {n}")))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, expected: impl Serialize, observed: impl Serialize) -> Self {
        let expected = serde_json::to_value(expected).expect("serializable");
        let observed = serde_json::to_value(observed).expect("serializable");
        let passed = expected == observed;
        Check { name: name.to_string(), expected, observed, passed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Pass,
    Fail,
    /// The suite was not run: outside its budget.
    Refused,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    /// Producing operations.
    pub operations: Vec<String>,
    pub mode: String,
    pub status: SuiteStatus,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
    pub certificate: Value,
}

impl SuiteResult {
    fn from_checks(suite: Suite, operations: &[&str], mode: &str, checks: Vec<Check>, certificate: Value) -> Self {
        let status = if checks.iter().all(|c| c.passed) { SuiteStatus::Pass } else { SuiteStatus::Fail };
        SuiteResult {
            suite,
            operations: operations.iter().map(|s| s.to_string()).collect(),
            mode: mode.to_string(),
            status,
            checks,
            refusal: None,
            certificate,
        }
    }

    fn refused(suite: Suite, reason: String) -> Self {
        SuiteResult {
            suite,
            operations: Vec::new(),
            mode: "none".into(),
            status: SuiteStatus::Refused,
            checks: Vec::new(),
            refusal: Some(reason),
            certificate: Value::Null,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub artifact_version: String,
    pub n: usize,
    pub deep: bool,
    pub exhaustive: bool,
    pub suites: Vec<SuiteResult>,
    pub status: SuiteStatus,
    /// Seconds per suite. Kept apart so the rest of the report is byte-stable.
    pub timings: BTreeMap<String, f64>,
}

impl VerificationReport {
    /// Process exit status: 0 all pass, 1 an expectation failed, 2 a refusal
    /// with no failure.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            SuiteStatus::Pass => 0,
            SuiteStatus::Fail => 1,
            SuiteStatus::Refused => 2,
        }
    }

    pub fn suite(&self, suite: Suite) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.suite == suite)
    }

    /// Serialized report without the `timings` field.
    pub fn stable_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("serializable");
        value.as_object_mut().expect("object").remove("timings");
        serde_json::to_string_pretty(&value).expect("serializable")
    }
}

pub fn run_suite(n: usize, suites: &[Suite], options: &SuiteOptions) -> Result<VerificationReport> {
    if !(MIN_SUITE_N..=MAX_SUITE_N).contains(&n) {
        return Err(Error::refusal(format!("verification at n = {n}"), format!("{MIN_SUITE_N} <= n <= {MAX_SUITE_N}")));
    }
    if suites.is_empty() {
        return Err(Error::domain("no suites selected"));
    }
    let mut selected = suites.to_vec();
    selected.sort();
    selected.dedup();

    let expectation = expectation_for(n)?;
    let run_one = |suite: Suite| -> Result<(SuiteResult, f64)> {
        let started = Instant::now();
        let result = run_with_budget(n, suite, options, &expectation)?;
        Ok((result, started.elapsed().as_secs_f64()))
    };
    let outcomes: Vec<Result<(SuiteResult, f64)>> = if options.parallel {
        thread::scope(|scope| {
            let handles: Vec<_> = selected.iter().map(|&s| scope.spawn(move || run_one(s))).collect();
            handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
        })
    } else {
        selected.iter().map(|&s| run_one(s)).collect()
    };

    let mut results = Vec::new();
    let mut timings = BTreeMap::new();
    for outcome in outcomes {
        let (result, secs) = outcome?;
        timings.insert(result.suite.name().to_string(), secs);
        results.push(result);
    }
    // A violation outranks a refusal: it is the more important news.
    let status = if results.iter().any(|r| r.status == SuiteStatus::Fail) {
        SuiteStatus::Fail
    } else if results.iter().any(|r| r.status == SuiteStatus::Refused) {
        SuiteStatus::Refused
    } else {
        SuiteStatus::Pass
    };
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION.into(),
        artifact_version: ARTIFACT_VERSION.into(),
        n,
        deep: options.deep,
        exhaustive: options.exhaustive,
        suites: results,
        status,
        timings,
    })
}

fn run_with_budget(n: usize, suite: Suite, options: &SuiteOptions, expectation: &Expectation) -> Result<SuiteResult> {
    let Some(budget) = options.budget else {
        return refusal_as_result(suite, run_single(n, suite, options, expectation));
    };
    let (tx, rx) = mpsc::channel();
    let (opts, exp) = (options.clone(), expectation.clone());
    // Detached: on timeout the worker is abandoned.
    thread::spawn(move || {
        let _ = tx.send(run_single(n, suite, &opts, &exp));
    });
    match rx.recv_timeout(budget) {
        Ok(result) => refusal_as_result(suite, result),
        Err(_) => Ok(SuiteResult::refused(
            suite,
            format!("suite {} exceeded its budget of {} s", suite.name(), budget.as_secs_f64()),
        )),
    }
}

fn refusal_as_result(suite: Suite, result: Result<SuiteResult>) -> Result<SuiteResult> {
    match result {
        Err(e) if e.is_scale_refusal() => Ok(SuiteResult::refused(suite, e.to_string())),
        other => other,
    }
}

pub fn run_single(n: usize, suite: Suite, options: &SuiteOptions, expectation: &Expectation) -> Result<SuiteResult> {
    match suite {
        Suite::Connectivity => connectivity_suite(n, options, expectation),
        Suite::Domination => domination_suite(n, options, expectation),
        Suite::Automorphisms => automorphism_suite(n, options, expectation),
        Suite::Structure => structure_suite(n),
        Suite::Neighborhood => neighborhood_suite(n, expectation),
    }
}

fn mode_name(mode: CertificateMode) -> &'static str {
    match mode {
        CertificateMode::Exhaustive => "exhaustive",
        CertificateMode::Structural => "structural",
    }
}

fn connectivity_suite(n: usize, options: &SuiteOptions, exp: &Expectation) -> Result<SuiteResult> {
    let g = PancakeGraph::build(n)?;
    let request = if options.exhaustive { ModeRequest::Exhaustive } else { ModeRequest::Auto };
    let cert = connectivity::certify_connectivity(&g, request)?;
    let girth = g.girth();
    let checks = vec![
        Check::new("kappa", exp.kappa, cert.kappa),
        Check::new("girth", exp.girth, girth),
        Check::new("super_connected", exp.super_connected, cert.super_connected.result),
        Check::new("hyper_connected", exp.hyper_connected, cert.hyper_connected.result),
    ];
    let mode = mode_name(cert.super_connected.mode);
    Ok(SuiteResult::from_checks(
        Suite::Connectivity,
        &["vertex_connectivity", "girth", "is_super_connected", "is_hyper_connected"],
        mode,
        checks,
        json!({
            "kappa": cert.kappa,
            "girth": girth,
            "super": cert.super_connected,
            "hyper": cert.hyper_connected,
        }),
    ))
}

/// Certificate body shared by the suite and `verify domination`.
pub fn domination_certificate(g: &PancakeGraph) -> Result<(domination::DominationReport, Value)> {
    let report = domination::enumerate_efficient_dominating_sets(g)?;
    let value = json!({
        "n": report.n,
        "count": report.count,
        "search_nodes": report.search_nodes,
        "sets": report.summaries(g),
    });
    Ok((report, value))
}

fn domination_suite(n: usize, options: &SuiteOptions, exp: &Expectation) -> Result<SuiteResult> {
    if n > DOMINATION_DEFAULT_MAX_N && !options.deep {
        return Err(Error::refusal(
            format!("perfect-code enumeration on P_{n} without --deep"),
            format!("n <= {DOMINATION_DEFAULT_MAX_N}, or n <= {} with --deep", domination::MAX_ENUMERATION_N),
        ));
    }
    let g = PancakeGraph::build(n)?;
    let (report, certificate) = domination_certificate(&g)?;
    let size = crate::permutations::factorial(n - 1) as usize;
    let all_valid = report.sets.iter().all(|s| domination::is_efficient_dominating_set(&g, &s.members).is_ok());
    let mut labels: Vec<Option<usize>> = report.sets.iter().map(|s| s.label).collect();
    labels.sort();
    let min_distance = report.sets.iter().filter_map(|s| domination::min_pairwise_distance(&g, &s.members)).min();
    let checks = vec![
        Check::new("count", exp.eds_count, report.count),
        Check::new("sizes", vec![size; exp.eds_count], report.sets.iter().map(|s| s.members.len()).collect::<Vec<_>>()),
        Check::new("labels", (1..=n).map(Some).collect::<Vec<_>>(), labels),
        Check::new("all_perfect_codes", true, all_valid),
        Check::new("min_pairwise_distance_at_least_3", true, min_distance.is_some_and(|d| d >= 3)),
    ];
    Ok(SuiteResult::from_checks(
        Suite::Domination,
        &["enumerate_efficient_dominating_sets", "is_efficient_dominating_set"],
        "exhaustive",
        checks,
        certificate,
    ))
}

/// Certificate body shared by the suite and `verify automorphisms`.
pub fn automorphism_certificate(g: &PancakeGraph) -> Result<(AutGroup, automorphisms::GrrCertificate, Value)> {
    let aut = automorphisms::compute_automorphism_group(g)?;
    let grr = automorphisms::certify_grr(g, &aut)?;
    let value = json!({
        "n": g.n(),
        "order": aut.order,
        "regular": aut.regular,
        "grr": grr.grr,
        "edge_orbits": aut.edge_orbit_count,
        "ratio": grr.ratio,
        "base": aut.base,
        "orbit_sizes": aut.orbit_sizes,
        "generators": aut.generators,
    });
    Ok((aut, grr, value))
}

fn automorphism_suite(n: usize, options: &SuiteOptions, exp: &Expectation) -> Result<SuiteResult> {
    if n > AUTOMORPHISM_DEFAULT_MAX_N && !options.deep {
        return Err(Error::refusal(
            format!("automorphism search on P_{n} without --deep"),
            format!("n <= {AUTOMORPHISM_DEFAULT_MAX_N}, or n <= {} with --deep", automorphisms::MAX_AUTOMORPHISM_N),
        ));
    }
    let g = PancakeGraph::build(n)?;
    let (aut, grr, mut certificate) = automorphism_certificate(&g)?;
    let stabilizer = automorphisms::generating_set_stabilizer(n)?;
    let mut checks = vec![
        Check::new("order", exp.aut_order as u128, aut.order),
        Check::new("grr", exp.grr, grr.grr),
        Check::new("order_divisible_by_n_factorial", true, aut.order % g.vertex_count() as u128 == 0),
        Check::new("left_translations_preserve_edges", true, grr.left_translations_preserve_edges),
    ];
    if let Some(orbits) = exp.edge_orbits {
        checks.push(Check::new("edge_orbits", orbits, aut.edge_orbit_count));
    }
    if !exp.grr {
        let semidirect = automorphisms::semidirect_reconstruction(&g, &aut)?;
        checks.push(Check::new("semidirect_reconstruction", exp.aut_order as u128, semidirect.generated_order));
        checks.push(Check::new("semidirect_contains_aut", true, semidirect.aut_contained));
    }
    certificate["connection_set_stabilizer"] = json!({
        "elements": stabilizer.elements,
        "inner_only": stabilizer.inner_only,
        "complete": stabilizer.complete,
    });
    Ok(SuiteResult::from_checks(
        Suite::Automorphisms,
        &["compute_automorphism_group", "certify_grr", "generating_set_stabilizer"],
        "exhaustive",
        checks,
        certificate,
    ))
}

fn structure_suite(n: usize) -> Result<SuiteResult> {
    let cert = automorphisms::verify_copy_structure(n)?;
    let checks = vec![
        Check::new("copy_isomorphisms", vec![true; n], &cert.isomorphisms),
        Check::new("first_symbol_exact_one", true, cert.first_symbol_exact_one),
        Check::new("first_last_exact_one", true, cert.first_last_exact_one),
    ];
    Ok(SuiteResult::from_checks(
        Suite::Structure,
        &["verify_copy_structure"],
        "exhaustive",
        checks,
        serde_json::to_value(&cert)?,
    ))
}

fn neighborhood_suite(n: usize, exp: &Expectation) -> Result<SuiteResult> {
    let g = PancakeGraph::build(n)?;
    let mut checks = Vec::new();
    let mut per_symbol = Vec::new();
    for i in 1..=n {
        let solutions = automorphisms::neighborhood_determination(&g, i)?;
        let own = g.block_members(BlockKind::LastSymbol(i))?;
        checks.push(Check::new(&format!("contains_last_symbol_block_{i}"), true, solutions.contains(&own)));
        if exp.nd_unique {
            checks.push(Check::new(&format!("unique_solution_{i}"), 1, solutions.len()));
        }
        per_symbol.push(json!({
            "i": i,
            "count": solutions.len(),
            "solutions": solutions
                .iter()
                .map(|x| x.iter().map(|&v| g.label(v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }));
        if i == 1 {
            for (idx, extra) in exp.nd_extra_sets.iter().enumerate() {
                let mut ids: Vec<VertexId> = extra
                    .iter()
                    .map(|p| Permutation::new(p.clone()).and_then(|p| g.id_of(&p)))
                    .collect::<Result<_>>()?;
                ids.sort_unstable();
                checks.push(Check::new(&format!("counterexample_{idx}_is_solution"), true, solutions.contains(&ids)));
                checks.push(Check::new(&format!("counterexample_{idx}_differs"), true, ids != own));
            }
        }
    }
    Ok(SuiteResult::from_checks(
        Suite::Neighborhood,
        &["neighborhood_determination"],
        "exhaustive",
        checks,
        json!({ "n": n, "symbols": per_symbol }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectation_table_covers_suite_range() {
        for n in MIN_SUITE_N..=MAX_SUITE_N {
            let e = expectation_for(n).unwrap();
            assert_eq!(e.kappa, n - 1);
        }
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(vec![s]));
        }
        assert_eq!(Suite::parse("all").unwrap().len(), 5);
        assert!(Suite::parse("bogus").is_none());
    }

    #[test]
    fn range_is_enforced() {
        let opts = SuiteOptions::default();
        assert!(run_suite(9, &[Suite::Structure], &opts).unwrap_err().is_scale_refusal());
        assert!(run_suite(2, &[Suite::Structure], &opts).unwrap_err().is_scale_refusal());
        assert!(run_suite(4, &[], &opts).is_err());
    }

    #[test]
    fn n3_connectivity_negatives_pass() {
        let report = run_suite(3, &[Suite::Connectivity], &SuiteOptions::default()).unwrap();
        let conn = report.suite(Suite::Connectivity).unwrap();
        assert_eq!(conn.status, SuiteStatus::Pass);
        assert_eq!(conn.certificate["super"]["result"], false);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn deep_gates_domination_at_n7() {
        let report = run_suite(7, &[Suite::Domination], &SuiteOptions::default()).unwrap();
        assert_eq!(report.status, SuiteStatus::Refused);
        assert_eq!(report.exit_code(), 2);
    }

    #[test]
    fn exhaustive_request_refused_at_n6() {
        let opts = SuiteOptions { exhaustive: true, ..Default::default() };
        let report = run_suite(6, &[Suite::Connectivity], &opts).unwrap();
        assert_eq!(report.status, SuiteStatus::Refused);
    }

    #[test]
    fn tiny_budget_refuses() {
        let opts = SuiteOptions { budget: Some(Duration::from_nanos(1)), ..Default::default() };
        let report = run_suite(6, &[Suite::Automorphisms], &opts).unwrap();
        assert_eq!(report.status, SuiteStatus::Refused);
    }
}
