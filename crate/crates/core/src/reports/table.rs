//! Reproduction tables of `m(G)`, `c₀(G)` and `D(G)` over group families.

use serde::Serialize;

use super::cache::{Cache, CacheKey};
use crate::error::{Error, Result};
use crate::group::{groups_up_to, Group};
use crate::invariants::{
    c0, c0_bound_only, davenport, m_of, InvariantKind, InvariantResult, InvariantValue, Method,
    PartialReason, SearchConfig,
};

/// Expands a family spec into groups, ordered by order then factors.
///
/// Accepted forms, joined by `;` if several are wanted:
///
/// * `cyclic:A..B`, `rank2:A..B`, `all:A..B` with either end optional
///   (`rank2:..20`); `rankR:` works for any `R`,
/// * an explicit comma-separated list such as `3x3,2x4`,
/// * the empty string, which is the empty family.
///
/// ```
/// use zsf::reports::expand_family;
///
/// let gs = expand_family("cyclic:2..10").unwrap();
/// assert_eq!(gs.len(), 9);
/// assert_eq!(expand_family("rank2:..8").unwrap().len(), 2);
/// assert!(expand_family("").unwrap().is_empty());
/// ```
pub fn expand_family(spec: &str) -> Result<Vec<Group>> {
    let mut out: Vec<Group> = Vec::new();
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once(':') {
            Some((family, range)) => {
                let (lo, hi) = parse_range(range)?;
                let rank = match family {
                    "cyclic" => Some(1),
                    "all" => None,
                    f => match f.strip_prefix("rank").map(str::parse::<usize>) {
                        Some(Ok(r)) if r >= 1 => Some(r),
                        _ => return Err(Error::Parse(format!("unknown group family {f:?}"))),
                    },
                };
                out.extend(
                    groups_up_to(hi)
                        .into_iter()
                        .filter(|g| g.order() >= lo as usize)
                        .filter(|g| rank.is_none_or(|r| g.rank() == r)),
                );
            }
            None => {
                for g in part.split(',').map(str::trim).filter(|g| !g.is_empty()) {
                    out.push(g.parse()?);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.order(), a.invariant_factors()).cmp(&(b.order(), b.invariant_factors())));
    out.dedup_by(|a, b| a.invariant_factors() == b.invariant_factors());
    Ok(out)
}

fn parse_range(r: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("bad order range {r:?}, expected A..B"));
    let (lo, hi) = r.split_once("..").ok_or_else(bad)?;
    let lo = if lo.is_empty() {
        1
    } else {
        lo.parse().map_err(|_| bad())?
    };
    let hi = hi.parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// How a table cell came out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Exact,
    BoundExceeded,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub group: String,
    pub order: usize,
    pub m: u64,
    /// `None` unless computed exactly.
    pub c0: Option<u64>,
    pub davenport: Option<u64>,
    /// `c₀ = m`, when `c₀` is known.
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub status: RowStatus,
}

impl TableRow {
    pub fn is_complete(&self) -> bool {
        self.status == RowStatus::Exact
    }
}

/// `c₀` through the cache.
pub fn cached_c0(group: &Group, config: &SearchConfig, cache: &Cache) -> Result<InvariantResult> {
    let key = CacheKey::new(
        InvariantKind::C0,
        group.invariant_factors(),
        None,
        Method::Exhaustive,
        config.orbit_reduction,
    );
    match cache.get_or_compute(&key, || c0(group, config)) {
        Err(Error::BoundExceeded { .. }) => Ok(c0_bound_only(group)),
        r => r,
    }
}

fn davenport_of(group: &Group, config: &SearchConfig, cache: &Cache) -> Result<Option<u64>> {
    let method = if group.rank() <= 2 {
        Method::Formula
    } else {
        Method::Exhaustive
    };
    let key = CacheKey::new(
        InvariantKind::Davenport,
        group.invariant_factors(),
        None,
        method,
        config.orbit_reduction,
    );
    match cache.get_or_compute(&key, || davenport(group, method, config)) {
        Ok(r) if !r.is_partial() => Ok(r.value.finite()),
        Ok(_) | Err(Error::BoundExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn c0_table(groups: &[Group], config: &SearchConfig, cache: &Cache) -> Result<Vec<TableRow>> {
    groups
        .iter()
        .map(|g| {
            let m = m_of(g);
            let r = cached_c0(g, config, cache)?;
            let status = match r.partial.map(|p| p.reason) {
                None => RowStatus::Exact,
                Some(PartialReason::BoundExceeded) => RowStatus::BoundExceeded,
                Some(PartialReason::Timeout) => RowStatus::Timeout,
            };
            let c0 = match (status, r.value) {
                (RowStatus::Exact, InvariantValue::Finite(v)) => Some(v),
                _ => None,
            };
            Ok(TableRow {
                group: g.to_string(),
                order: g.order(),
                m,
                c0,
                davenport: davenport_of(g, config, cache)?,
                matches: c0.map(|v| v == m),
                status,
            })
        })
        .collect()
}

pub fn table_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["group", "order", "m", "c0", "D", "match", "status"])
        .map_err(csv_err)?;
    let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        let status = match r.status {
            RowStatus::Exact => "exact",
            RowStatus::BoundExceeded => "bound_exceeded",
            RowStatus::Timeout => "timeout",
        };
        w.write_record([
            r.group.clone(),
            r.order.to_string(),
            r.m.to_string(),
            opt(r.c0),
            opt(r.davenport),
            r.matches.map(|b| b.to_string()).unwrap_or_default(),
            status.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}
