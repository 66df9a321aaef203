//! The `zsf` subcommands as functions from arguments to exit code and
//! output text, so the binary stays a thin argument parser.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use super::cache::{Cache, CacheKey};
use super::table::{c0_table, cached_c0, expand_family, table_csv};
use crate::certificate::{Certificate, Verdict};
use crate::error::Error;
use crate::group::Group;
use crate::invariants::{
    davenport, f_g_k, m_formula, BoundSide, InvariantKind, InvariantResult, InvariantValue, Method,
    Partial, PartialReason, SearchConfig, SearchStats,
};
use crate::lab::{verify_lemma, LemmaId, LemmaReport, Scope};
use crate::sequence::Sequence;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by all subcommands.
#[derive(Clone, Debug)]
pub struct Flags {
    pub max_order: Option<u32>,
    pub timeout_sec: Option<u64>,
    pub seed: u64,
    pub jobs: usize,
    pub no_cache: bool,
    pub format: Format,
    /// Disables automorphism-orbit reduction.
    pub no_orbits: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            max_order: None,
            timeout_sec: None,
            seed: 0,
            jobs: 0,
            no_cache: false,
            format: Format::Json,
            no_orbits: false,
        }
    }
}

impl Flags {
    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            jobs: self.jobs,
            orbit_reduction: !self.no_orbits,
            timeout: self.timeout_sec.map(Duration::from_secs),
            max_order: self.max_order.map(|m| m as usize),
        }
    }

    /// Runs with a timeout bypass the cache.
    fn cache(&self) -> Cache {
        Cache::from_env(!self.no_cache && self.timeout_sec.is_none())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(code: i32, stdout: String) -> Self {
        CommandOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        CommandOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// `zsf invariant KIND GROUP [--k K] [--method M]`.
///
/// Kinds: `c0`, `m`, `davenport` (alias `D`), `f` (needs `k`).
pub fn cmd_invariant(
    kind: &str,
    group: &str,
    k: Option<usize>,
    method: Option<&str>,
    flags: &Flags,
) -> CommandOutput {
    let group: Group = match group.parse() {
        Ok(g) => g,
        Err(e) => return CommandOutput::usage(format!("bad group spec {group:?}: {e}")),
    };
    let method = match method {
        None => None,
        Some("formula") => Some(Method::Formula),
        Some("exhaustive") => Some(Method::Exhaustive),
        Some(m) => return CommandOutput::usage(format!("unknown method {m:?}")),
    };
    let config = flags.search_config();
    let cache = flags.cache();
    let result = match kind {
        "m" | "m_formula" => Ok(m_formula(&group)),
        "c0" => {
            if method == Some(Method::Formula) {
                return CommandOutput::usage("c0 has no formula method; use m");
            }
            cached_c0(&group, &config, &cache)
        }
        "davenport" | "D" => {
            let method = method.unwrap_or(Method::Exhaustive);
            let key = CacheKey::new(
                InvariantKind::Davenport,
                group.invariant_factors(),
                None,
                method,
                config.orbit_reduction,
            );
            match cache.get_or_compute(&key, || davenport(&group, method, &config)) {
                Err(Error::BoundExceeded { .. }) => Ok(davenport_lower_bound(&group)),
                r => r,
            }
        }
        "f" | "f_G_k" => {
            let Some(k) = k else {
                return CommandOutput::usage("f needs --k");
            };
            if k == 0 || k >= group.order() {
                return CommandOutput::usage(format!("f needs 1 <= k < |G|, got k={k}"));
            }
            let key = CacheKey::new(
                InvariantKind::FGk,
                group.invariant_factors(),
                Some(k),
                Method::Exhaustive,
                false,
            );
            match cache.get_or_compute(&key, || f_g_k(&group, k, &config)) {
                Err(Error::BoundExceeded { .. }) => Ok(f_lower_bound(&group, k)),
                r => r,
            }
        }
        other => return CommandOutput::usage(format!("unknown invariant {other:?}")),
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return CommandOutput::usage(e),
    };
    let code = if result.is_partial() {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    };
    let stdout = match flags.format {
        Format::Json => to_json(&result),
        Format::Csv => invariant_csv(&result),
    };
    CommandOutput::ok(code, stdout)
}

/// `D(G) ≥ 1 + Σ(nᵢ − 1)`, shown by the basis elements.
fn davenport_lower_bound(group: &Group) -> InvariantResult {
    let d: u64 = 1 + group
        .invariant_factors()
        .iter()
        .map(|&n| n as u64 - 1)
        .sum::<u64>();
    InvariantResult {
        kind: InvariantKind::Davenport,
        group: group.invariant_factors().to_vec(),
        k: None,
        value: InvariantValue::Finite(d),
        method: Method::Formula,
        witness: None,
        search_stats: SearchStats::default(),
        partial: Some(Partial {
            reason: PartialReason::BoundExceeded,
            bound: BoundSide::Lower,
        }),
    }
}

/// `|Σ(S)| ≥ |S|` for zero-sum-free `S`.
fn f_lower_bound(group: &Group, k: usize) -> InvariantResult {
    InvariantResult {
        kind: InvariantKind::FGk,
        group: group.invariant_factors().to_vec(),
        k: Some(k),
        value: InvariantValue::Finite(k as u64),
        method: Method::Formula,
        witness: None,
        search_stats: SearchStats::default(),
        partial: Some(Partial {
            reason: PartialReason::BoundExceeded,
            bound: BoundSide::Lower,
        }),
    }
}

fn invariant_csv(r: &InvariantResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let group = r
        .group
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join("x");
    let partial = r
        .partial
        .map(|p| {
            let reason = match p.reason {
                PartialReason::Timeout => "timeout",
                PartialReason::BoundExceeded => "bound_exceeded",
            };
            let side = match p.bound {
                BoundSide::Lower => "lower",
                BoundSide::Upper => "upper",
            };
            format!("{reason}:{side}")
        })
        .unwrap_or_default();
    let method = match r.method {
        Method::Formula => "formula",
        Method::Exhaustive => "exhaustive",
    };
    let rows: [[String; 8]; 2] = [
        [
            "kind",
            "group",
            "k",
            "value",
            "method",
            "witness",
            "nodes_visited",
            "partial",
        ]
        .map(String::from),
        [
            r.kind.name().to_string(),
            group,
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            r.value.to_string(),
            method.to_string(),
            r.witness
                .as_ref()
                .map(|c| c.payload.sequence.clone())
                .unwrap_or_default(),
            r.search_stats.nodes_visited.to_string(),
            partial,
        ],
    ];
    for row in rows {
        w.write_record(row).expect("csv into memory");
    }
    String::from_utf8(w.into_inner().expect("csv into memory")).expect("utf-8")
}

/// What `verify` writes for one lemma.
#[derive(Clone, Debug)]
pub struct VerifyArtifacts {
    pub report_path: PathBuf,
    pub certificate_paths: Vec<PathBuf>,
}

fn report_file_stem(id: LemmaId) -> String {
    format!("report-{id}")
}

fn write_report(dir: &Path, report: &LemmaReport) -> std::io::Result<VerifyArtifacts> {
    fs::create_dir_all(dir)?;
    let report_path = dir.join(format!("{}.json", report_file_stem(report.lemma_id)));
    fs::write(&report_path, to_json(report))?;
    let mut certificate_paths = Vec::new();
    for (i, cx) in report.failures.iter().enumerate() {
        let primary = cx
            .sequences
            .values()
            .next()
            .and_then(|t| Sequence::parse(t).ok());
        let Some((group, seq)) = primary else {
            continue;
        };
        let cert = Certificate::lemma_counterexample(&group, &seq, cx.clone());
        let path = dir.join(format!("counterexample-{}-{i}.json", report.lemma_id));
        fs::write(&path, cert.to_json())?;
        certificate_paths.push(path);
    }
    Ok(VerifyArtifacts {
        report_path,
        certificate_paths,
    })
}

/// `zsf verify LEMMA|all [--max-order N] [--samples N] [--seed S] [--out DIR]`.
///
/// Writes one report per lemma into `out_dir`, plus a certificate for every
/// counterexample, and prints the reports.
pub fn cmd_verify(
    lemma: &str,
    samples: Option<usize>,
    out_dir: &Path,
    flags: &Flags,
) -> CommandOutput {
    let ids: Vec<LemmaId> = if lemma == "all" {
        LemmaId::ALL.to_vec()
    } else {
        match lemma.parse() {
            Ok(id) => vec![id],
            Err(e) => return CommandOutput::usage(e),
        }
    };
    let scope = Scope {
        max_order: flags.max_order,
        samples,
        seed: flags.seed,
        jobs: flags.jobs,
    };
    let mut reports = Vec::new();
    let mut stderr = String::new();
    let mut failed = false;
    for id in ids {
        match verify_lemma(id, &scope) {
            Ok(r) => {
                failed |= !r.passed();
                match write_report(out_dir, &r) {
                    Ok(a) => {
                        stderr.push_str(&format!("report: {}\n", a.report_path.display()));
                        for p in a.certificate_paths {
                            stderr.push_str(&format!("counterexample: {}\n", p.display()));
                        }
                    }
                    Err(e) => {
                        return CommandOutput::usage(format!(
                            "cannot write report into {}: {e}",
                            out_dir.display()
                        ))
                    }
                }
                reports.push(r);
            }
            Err(Error::WitnessNotFound(msg)) => {
                // contradicts a proven lower bound
                return CommandOutput {
                    code: EXIT_FAILED,
                    stdout: String::new(),
                    stderr: format!("error: {id}: witness not found: {msg}\n"),
                };
            }
            Err(e) => return CommandOutput::usage(format!("{id}: {e}")),
        }
    }
    let stdout = match flags.format {
        Format::Json if reports.len() == 1 => to_json(&reports[0]),
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "lemma_id",
                "cases_checked",
                "non_vacuous",
                "failures",
                "seed",
            ])
            .expect("csv into memory");
            for r in &reports {
                w.write_record([
                    r.lemma_id.to_string(),
                    r.cases_checked.to_string(),
                    r.non_vacuous.map(|n| n.to_string()).unwrap_or_default(),
                    r.failures.len().to_string(),
                    r.scope.seed.to_string(),
                ])
                .expect("csv into memory");
            }
            String::from_utf8(w.into_inner().expect("csv into memory")).expect("utf-8")
        }
    };
    CommandOutput {
        code: if failed { EXIT_FAILED } else { EXIT_OK },
        stdout,
        stderr,
    }
}

/// `zsf check-certificate PATH`.
pub fn cmd_check_certificate(path: &Path) -> CommandOutput {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return CommandOutput::usage(format!("cannot read {}: {e}", path.display())),
    };
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => return CommandOutput::usage(format!("{}: {e}", path.display())),
    };
    match cert.verify() {
        Verdict::Valid => CommandOutput::ok(EXIT_OK, "valid\n".into()),
        Verdict::Invalid(why) => CommandOutput {
            code: EXIT_FAILED,
            stdout: format!("invalid: {why}\n"),
            stderr: String::new(),
        },
    }
}

/// `zsf table KIND FAMILY [--format csv] [--output PATH]`. The only table
/// kind is `c0`, with columns group, order, m, c0, D, match, status.
pub fn cmd_table(kind: &str, family: &str, output: Option<&Path>, flags: &Flags) -> CommandOutput {
    if kind != "c0" {
        return CommandOutput::usage(format!("unknown table kind {kind:?}"));
    }
    let groups = match expand_family(family) {
        Ok(g) => g,
        Err(e) => return CommandOutput::usage(format!("bad family spec {family:?}: {e}")),
    };
    let cache = flags.cache();
    let rows = match c0_table(&groups, &flags.search_config(), &cache) {
        Ok(r) => r,
        Err(e) => return CommandOutput::usage(e),
    };
    let text = match flags.format {
        Format::Json => to_json(&rows),
        Format::Csv => match table_csv(&rows) {
            Ok(t) => t,
            Err(e) => return CommandOutput::usage(e),
        },
    };
    let code = if rows.iter().all(|r| r.is_complete()) {
        EXIT_OK
    } else {
        EXIT_PARTIAL
    };
    match output {
        None => CommandOutput::ok(code, text),
        Some(p) => match fs::write(p, text) {
            Ok(()) => CommandOutput::ok(code, String::new()),
            Err(e) => CommandOutput::usage(format!("cannot write {}: {e}", p.display())),
        },
    }
}
