//! The verification layer: structured checks over the group constructions,
//! the Steenrod tables, the psi recursions, the degree tables, invariance of
//! the h families, field-generation certificates and the two rank-8 worked
//! examples, aggregated into a deterministic JSON report.

pub mod certificate;
pub mod examples;
pub mod linalg;
pub mod suites;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Family;
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckResult {
    pub fn pass(id: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: Status::Pass,
            witness: None,
            wall_ms: None,
        }
    }

    pub fn fail(id: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            wall_ms: None,
        }
    }

    pub fn skipped(id: impl Into<String>, reason: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: Status::Skipped,
            witness: Some(reason.into()),
            wall_ms: None,
        }
    }

    pub fn from_flag(id: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        if ok {
            Self::pass(id)
        } else {
            Self::fail(id, witness)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteKind {
    Group,
    Steenrod,
    Psi,
    Degrees,
    Invariance,
    Certificates,
    Examples,
}

impl SuiteKind {
    pub fn parse(s: &str) -> Option<SuiteKind> {
        Some(match s {
            "group" => SuiteKind::Group,
            "steenrod" => SuiteKind::Steenrod,
            "psi" => SuiteKind::Psi,
            "degrees" => SuiteKind::Degrees,
            "invariance" => SuiteKind::Invariance,
            "certificates" => SuiteKind::Certificates,
            "examples" => SuiteKind::Examples,
            _ => return None,
        })
    }

    pub fn all() -> Vec<SuiteKind> {
        vec![
            SuiteKind::Group,
            SuiteKind::Steenrod,
            SuiteKind::Psi,
            SuiteKind::Degrees,
            SuiteKind::Invariance,
            SuiteKind::Certificates,
            SuiteKind::Examples,
        ]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Target {
    pub family: Family,
    pub m: usize,
    pub q: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Config {
    pub suites: Vec<SuiteKind>,
    /// Family instances for the per-group suites; empty means the default
    /// grid (each family at m = 2 with the smallest legal q per parity).
    pub targets: Vec<Target>,
    /// Spread independent checks over threads; result order is fixed either
    /// way.
    pub parallel: bool,
    /// Include wall-clock timings (off by default so that reports are
    /// byte-identical across runs).
    pub timings: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            suites: SuiteKind::all(),
            targets: Vec::new(),
            parallel: true,
            timings: false,
        }
    }
}

/// Default verification grid: both parities for the orthogonal families.
pub fn default_targets() -> Vec<Target> {
    vec![
        Target { family: Family::GuEven, m: 2, q: 2 },
        Target { family: Family::GuOdd, m: 2, q: 2 },
        Target { family: Family::Sp, m: 2, q: 2 },
        Target { family: Family::Sp, m: 2, q: 3 },
        Target { family: Family::OPlus, m: 2, q: 2 },
        Target { family: Family::OPlus, m: 2, q: 3 },
        Target { family: Family::OMinus, m: 2, q: 2 },
        Target { family: Family::OMinus, m: 2, q: 3 },
        Target { family: Family::OOdd, m: 2, q: 2 },
        Target { family: Family::OOdd, m: 2, q: 3 },
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: Config,
    /// Action convention used throughout: matrices act on polynomials by
    /// substitution along rows, f |-> f(Mx).
    pub action_convention: String,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Run every selected suite and aggregate the results. Checks are
/// independent; the aggregation preserves a fixed order so serialized
/// reports are stable.
pub fn suite_runner(config: &Config) -> Result<Report> {
    for t in &config.targets {
        // validate targets before spawning work
        crate::groups::GroupSpec::new(t.family, t.m, t.q)
            .map_err(|e| Error::ConfigInvalid(format!("target {:?}: {e}", t)))?;
    }
    if config.suites.is_empty() {
        return Err(Error::ConfigInvalid("no suites selected".into()));
    }
    let targets = if config.targets.is_empty() {
        default_targets()
    } else {
        config.targets.clone()
    };

    // build the task list as closures tagged for ordering
    type Task = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>;
    let parallel = config.parallel;
    let mut tasks: Vec<Task> = Vec::new();
    for kind in &config.suites {
        match kind {
            SuiteKind::Group => {
                for t in targets.clone() {
                    tasks.push(Box::new(move || suites::group_suite(t.family, t.m, t.q)));
                }
            }
            SuiteKind::Steenrod => {
                tasks.push(Box::new(move || suites::steenrod_suite_with(parallel)))
            }
            SuiteKind::Psi => tasks.push(Box::new(move || suites::psi_suite_with(parallel))),
            SuiteKind::Degrees => {
                tasks.push(Box::new(move || suites::degree_suite_with(parallel)))
            }
            SuiteKind::Invariance => {
                for t in targets.clone() {
                    tasks.push(Box::new(move || {
                        suites::invariance_suite(t.family, t.m, t.q)
                    }));
                }
                tasks.push(Box::new(move || suites::norm_form_suite_with(parallel)));
            }
            SuiteKind::Certificates => {
                for t in targets.clone() {
                    tasks.push(Box::new(move || {
                        suites::certificate_suite(t.family, t.m, t.q)
                    }));
                }
            }
            SuiteKind::Examples => tasks.push(Box::new(examples::rank8_examples)),
        }
    }

    let timings = config.timings;
    let groups_of_results = par::map_collect(config.parallel, tasks, move |task| {
        let started = Instant::now();
        let mut rs = task();
        if timings {
            let ms = started.elapsed().as_millis() as u64;
            for r in rs.iter_mut() {
                r.wall_ms = Some(ms);
            }
        }
        rs
    });
    let results: Vec<CheckResult> = groups_of_results.into_iter().flatten().collect();

    let summary = Summary {
        total: results.len(),
        passed: results.iter().filter(|r| r.status == Status::Pass).count(),
        failed: results.iter().filter(|r| r.status == Status::Fail).count(),
        skipped: results
            .iter()
            .filter(|r| r.status == Status::Skipped)
            .count(),
    };
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        action_convention: "f |-> f(Mx): x_i -> sum_j M[i][j] x_j".to_string(),
        results,
        summary,
    })
}
