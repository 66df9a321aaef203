//! The invariants `D(G)`, `m(G)`, `f(G,k)` and `c₀(G)`.

mod f;
pub(crate) mod search;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::sequence::{Canonizer, Sequence};

pub use f::{f_floor_scan, f_g_k, FloorScanReport, FloorScanRow};

use search::{Control, Limits, Mode, Problem};

pub const C0_ORDER_BOUND: usize = 36;
pub const DAVENPORT_ORDER_BOUND: usize = 64;
pub const F_ORDER_BOUND: usize = 64;

/// `m(G)`, the conjectured value of `c₀(G)`, read off the invariant factors
/// with `p` the smallest prime dividing `|G|`:
///
/// * `|G|` if `G` is cyclic,
/// * `2p − 1` if `G ≅ C_p ⊕ C_p`,
/// * `kp + 2p − 3` if `G ≅ C_p ⊕ C_{pk}` with `k ≥ 2`,
/// * `|G|/p + p − 2` otherwise.
///
/// The known rank-3 and rank-4 exceptions all sit at orders far beyond
/// anything this crate can search, so they get no special handling.
pub fn m_of(group: &Group) -> u64 {
    let n = group.order() as u64;
    if group.is_cyclic() {
        return n;
    }
    let p = group.smallest_prime() as u64;
    let f = group.invariant_factors();
    if f.len() == 2 && f[0] as u64 == p {
        let k = f[1] as u64 / p;
        if k == 1 {
            return 2 * p - 1;
        }
        return k * p + 2 * p - 3;
    }
    n / p + p - 2
}

/// An invariant value; `Infinity` is greater than every integer and
/// serializes as the string `"infinity"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantValue {
    Finite(u64),
    Infinity,
}

impl InvariantValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            InvariantValue::Finite(v) => Some(v),
            InvariantValue::Infinity => None,
        }
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantValue::Finite(v) => write!(f, "{v}"),
            InvariantValue::Infinity => f.write_str("infinity"),
        }
    }
}

impl Serialize for InvariantValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            InvariantValue::Finite(v) => s.serialize_u64(*v),
            InvariantValue::Infinity => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for InvariantValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(InvariantValue::Finite(v)),
            Raw::S(s) if s == "infinity" => Ok(InvariantValue::Infinity),
            Raw::S(s) => Err(serde::de::Error::custom(format!(
                "bad invariant value {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantKind {
    #[serde(rename = "davenport")]
    Davenport,
    #[serde(rename = "m_formula")]
    MFormula,
    #[serde(rename = "f_G_k")]
    FGk,
    #[serde(rename = "c0")]
    C0,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::Davenport => "davenport",
            InvariantKind::MFormula => "m_formula",
            InvariantKind::FGk => "f_G_k",
            InvariantKind::C0 => "c0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Exhaustive,
}

/// Search counters. Wall time is left out of equality and of the
/// serialized form, so equal computations compare and serialize equal.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_visited: u64,
    /// Root branches skipped by automorphism-orbit reduction.
    pub orbits_pruned: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PartialEq for SearchStats {
    fn eq(&self, other: &Self) -> bool {
        (self.nodes_visited, self.orbits_pruned) == (other.nodes_visited, other.orbits_pruned)
    }
}

impl Eq for SearchStats {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartialReason {
    Timeout,
    BoundExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Marks a value as a bound rather than the exact invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partial {
    pub reason: PartialReason,
    pub bound: BoundSide,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub kind: InvariantKind,
    pub group: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub value: InvariantValue,
    pub method: Method,
    pub witness: Option<Certificate>,
    pub search_stats: SearchStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial: Option<Partial>,
}

impl InvariantResult {
    pub fn is_partial(&self) -> bool {
        self.partial.is_some()
    }

    /// The witness sequence, parsed back out of its certificate.
    pub fn witness_sequence(&self) -> Option<Sequence> {
        let c = self.witness.as_ref()?;
        Sequence::parse(&c.payload.sequence).ok().map(|(_, s)| s)
    }
}

/// Knobs shared by the exhaustive searches.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Worker threads; `0` lets the pool decide.
    pub jobs: usize,
    pub orbit_reduction: bool,
    pub timeout: Option<Duration>,
    /// Overrides the per-invariant order bound.
    pub max_order: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            jobs: 0,
            orbit_reduction: true,
            timeout: None,
            max_order: None,
        }
    }
}

impl SearchConfig {
    fn check_order(&self, group: &Group, default: usize, what: &'static str) -> Result<()> {
        let bound = self.max_order.unwrap_or(default);
        if group.order() > bound {
            return Err(Error::BoundExceeded {
                what,
                bound,
                order: group.order(),
            });
        }
        Ok(())
    }

    fn control(&self) -> Control {
        Control::new(self.timeout.map(|t| Instant::now() + t))
    }
}

/// `m(G)` as a result record.
pub fn m_formula(group: &Group) -> InvariantResult {
    InvariantResult {
        kind: InvariantKind::MFormula,
        group: group.invariant_factors().to_vec(),
        k: None,
        value: InvariantValue::Finite(m_of(group)),
        method: Method::Formula,
        witness: None,
        search_stats: SearchStats::default(),
        partial: None,
    }
}

/// `D(G)`. The formula covers rank ≤ 2; the exhaustive search returns a
/// zero-sum-free sequence of length `D(G) − 1` as witness.
pub fn davenport(group: &Group, method: Method, config: &SearchConfig) -> Result<InvariantResult> {
    match method {
        Method::Formula => {
            let f = group.invariant_factors();
            let value = match f {
                [n] => *n as u64,
                [a, b] => (a + b - 1) as u64,
                _ => return Err(Error::FormulaUnavailable(f.len())),
            };
            Ok(InvariantResult {
                kind: InvariantKind::Davenport,
                group: f.to_vec(),
                k: None,
                value: InvariantValue::Finite(value),
                method,
                witness: None,
                search_stats: SearchStats::default(),
                partial: None,
            })
        }
        Method::Exhaustive => davenport_exhaustive(group, config),
    }
}

fn canonizer_for(group: &Group) -> Option<Canonizer> {
    Canonizer::new(group).ok()
}

fn davenport_exhaustive(group: &Group, config: &SearchConfig) -> Result<InvariantResult> {
    config.check_order(group, DAVENPORT_ORDER_BOUND, "davenport search")?;
    let start = Instant::now();
    let canon = canonizer_for(group);
    let auts = canon
        .as_ref()
        .filter(|_| config.orbit_reduction)
        .map(|c| c.automorphisms());
    let (branches, orbits_pruned) = search::branches(group, auts);
    // e₁^[n₁−1]·…·e_r^[n_r−1] is zero-sum free, so nothing shorter matters.
    let floor: usize = group
        .invariant_factors()
        .iter()
        .map(|&n| n as usize - 1)
        .sum();
    let p = Problem::new(group, Mode::ZeroSumFree, &[], canon);
    let control = config.control();
    let limits = Limits {
        floor,
        ..Limits::default()
    };
    let out = search::run_all(&p, &branches, limits, &control, config.jobs);
    let (len, witness) = match (out.best_len, out.best) {
        (Some(l), Some(counts)) => (l, Sequence::from_count_vector(&counts)),
        _ if out.interrupted => {
            let mut s = Sequence::new();
            for (i, &n) in group.invariant_factors().iter().enumerate() {
                s.push(group.basis_element(i), n - 1);
            }
            (floor, s)
        }
        _ => {
            return Err(Error::WitnessNotFound(format!(
                "no zero-sum-free sequence of length {floor} over {group}"
            )))
        }
    };
    Ok(InvariantResult {
        kind: InvariantKind::Davenport,
        group: group.invariant_factors().to_vec(),
        k: None,
        value: InvariantValue::Finite(len as u64 + 1),
        method: Method::Exhaustive,
        witness: Some(Certificate::zero_sum_free(group, &witness)),
        search_stats: SearchStats {
            nodes_visited: out.nodes,
            orbits_pruned,
            wall_time: start.elapsed(),
        },
        partial: out.interrupted.then_some(Partial {
            reason: PartialReason::Timeout,
            bound: BoundSide::Lower,
        }),
    })
}

/// `c₀(G)`: one more than the longest regular sequence that is not an
/// additive basis.
///
/// Regular non-bases are closed under taking subsequences, so a single
/// depth-first pass that never extends a basis (or a sequence whose `Σ₀` is
/// already all of `G`) visits every one of them. The witness is the least
/// canonical form among the longest ones. On timeout the result is a lower
/// bound and is marked partial.
pub fn c0(group: &Group, config: &SearchConfig) -> Result<InvariantResult> {
    config.check_order(group, C0_ORDER_BOUND, "c0 search")?;
    let start = Instant::now();
    let proper = group.proper_subgroups()?;
    let canon = canonizer_for(group);
    let auts = canon
        .as_ref()
        .filter(|_| config.orbit_reduction)
        .map(|c| c.automorphisms());
    let (branches, orbits_pruned) = search::branches(group, auts);
    let p = Problem::new(group, Mode::RegularNonBasis, &proper, canon);
    let control = config.control();
    let out = search::run_all(&p, &branches, Limits::default(), &control, config.jobs);
    let (len, witness) = match (out.best_len, out.best) {
        (Some(l), Some(counts)) => (l, Sequence::from_count_vector(&counts)),
        _ => (0, Sequence::new()),
    };
    Ok(InvariantResult {
        kind: InvariantKind::C0,
        group: group.invariant_factors().to_vec(),
        k: None,
        value: InvariantValue::Finite(len as u64 + 1),
        method: Method::Exhaustive,
        witness: Some(Certificate::non_basis(group, &witness)),
        search_stats: SearchStats {
            nodes_visited: out.nodes,
            orbits_pruned,
            wall_time: start.elapsed(),
        },
        partial: out.interrupted.then_some(Partial {
            reason: PartialReason::Timeout,
            bound: BoundSide::Lower,
        }),
    })
}

/// The partial answer for a `c₀` request beyond the search bound: the
/// proven lower bound `m(G)`, with no witness.
pub fn c0_bound_only(group: &Group) -> InvariantResult {
    InvariantResult {
        kind: InvariantKind::C0,
        group: group.invariant_factors().to_vec(),
        k: None,
        value: InvariantValue::Finite(m_of(group)),
        method: Method::Formula,
        witness: None,
        search_stats: SearchStats::default(),
        partial: Some(Partial {
            reason: PartialReason::BoundExceeded,
            bound: BoundSide::Lower,
        }),
    }
}

/// A regular non-basis of exactly `len` terms, in canonical form, or `None`
/// if the search space holds none. Runs on one thread, stopping at the first
/// hit.
pub fn regular_non_basis_of_length(
    group: &Group,
    len: usize,
    config: &SearchConfig,
) -> Result<Option<Sequence>> {
    config.check_order(group, C0_ORDER_BOUND, "c0 search")?;
    if len == 0 {
        return Ok(Some(Sequence::new()));
    }
    let proper = group.proper_subgroups()?;
    let canon = canonizer_for(group);
    let auts = canon
        .as_ref()
        .filter(|_| config.orbit_reduction)
        .map(|c| c.automorphisms());
    let (branches, _) = search::branches(group, auts);
    let p = Problem::new(group, Mode::RegularNonBasis, &proper, canon);
    let limits = Limits {
        max_len: Some(len),
        exact_len: Some(len),
        ..Limits::default()
    };
    let out = search::run_first(&p, &branches, limits, &config.control());
    Ok(out.best.map(|c| Sequence::from_count_vector(&c)))
}

/// Regular non-bases of exactly `len` terms, at least one from every
/// `Aut(G)`-orbit when orbit reduction is on, otherwise all of them. The
/// `bool` is true when the search was cut short by the timeout.
pub fn regular_non_bases_of_length(
    group: &Group,
    len: usize,
    config: &SearchConfig,
) -> Result<(Vec<Sequence>, bool)> {
    config.check_order(group, C0_ORDER_BOUND, "c0 search")?;
    let proper = group.proper_subgroups()?;
    let canon = canonizer_for(group);
    let auts = canon
        .as_ref()
        .filter(|_| config.orbit_reduction)
        .map(|c| c.automorphisms());
    let (branches, _) = search::branches(group, auts);
    let p = Problem::new(group, Mode::RegularNonBasis, &proper, None);
    let limits = Limits {
        max_len: Some(len),
        exact_len: Some(len),
        collect: true,
        ..Limits::default()
    };
    let out = search::run_all(&p, &branches, limits, &config.control(), config.jobs);
    let seqs = out
        .collected
        .iter()
        .map(|c| Sequence::from_count_vector(c))
        .collect();
    Ok((seqs, out.interrupted))
}
