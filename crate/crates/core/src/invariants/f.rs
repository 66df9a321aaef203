//! `f(G,k)`: the least `|Σ(S)|` over zero-sum-free `k`-subsets of `G ∖ {0}`.

use std::sync::atomic::Ordering;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::search::Control;
use super::{
    BoundSide, InvariantKind, InvariantResult, InvariantValue, Method, Partial, PartialReason,
    SearchConfig, SearchStats, F_ORDER_BOUND,
};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::group::{groups_up_to, Element, Group};
use crate::sequence::Sequence;
use crate::set::ElementSet;

struct Scan<'a> {
    group: &'a Group,
    k: usize,
    nonzero: Vec<Element>,
    control: &'a Control,
    stack: Vec<ElementSet>,
    chosen: Vec<Element>,
    best: usize,
    witness: Option<Vec<Element>>,
    nodes: u64,
    interrupted: bool,
}

impl Scan<'_> {
    /// Subsets in lexicographic order of index lists; only strict
    /// improvements replace the incumbent, so the witness is the
    /// lexicographically first attainer.
    fn visit(&mut self, depth: usize, start: usize) {
        self.nodes += 1;
        if self.nodes & 0x3ff == 0 {
            if let Some(d) = self.control.deadline {
                if Instant::now() >= d {
                    self.control.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.control.stopped() {
            self.interrupted = true;
            return;
        }
        // |Σ(S)| = |Σ₀(S)| − 1 while S is zero-sum free, and it only grows.
        let size = self.stack[depth].len() - 1;
        if depth == self.k {
            if size < self.best {
                self.best = size;
                self.witness = Some(self.chosen.clone());
            }
            return;
        }
        if size >= self.best {
            return;
        }
        let need = self.k - depth;
        for pos in start..self.nonzero.len() {
            if self.nonzero.len() - pos < need {
                break;
            }
            let g = self.nonzero[pos];
            if self.stack[depth].contains(self.group.neg(g)) {
                continue;
            }
            let (lo, hi) = self.stack.split_at_mut(depth + 1);
            hi[0].clone_from(&lo[depth]);
            lo[depth].translate_union_into(self.group, g, &mut hi[0]);
            self.chosen.push(g);
            self.visit(depth + 1, pos + 1);
            self.chosen.pop();
            if self.interrupted {
                return;
            }
        }
    }
}

/// `f(G,k)`, with an attaining subset as witness, or `Infinity` when every
/// `k`-subset of `G ∖ {0}` has a nonempty zero-sum subset.
pub fn f_g_k(group: &Group, k: usize, config: &SearchConfig) -> Result<InvariantResult> {
    if k == 0 || k >= group.order() {
        return Err(Error::PreconditionViolated(format!(
            "f(G,k) needs 1 ≤ k ≤ |G|−1, got k={k} for {group}"
        )));
    }
    config.check_order(group, F_ORDER_BOUND, "f(G,k) search")?;
    let start = Instant::now();
    let n = group.order();
    let control = config.control();
    let nonzero: Vec<Element> = group.nonzero_elements().collect();

    // One branch per least element; each keeps its own incumbent.
    let run = |first: usize| -> Scan {
        let mut s = Scan {
            group,
            k,
            nonzero: nonzero.clone(),
            control: &control,
            stack: vec![ElementSet::singleton(n, Element::ZERO); k + 1],
            chosen: Vec::with_capacity(k),
            best: usize::MAX,
            witness: None,
            nodes: 0,
            interrupted: false,
        };
        let g = nonzero[first];
        s.stack[1] = ElementSet::from_elements(n, [Element::ZERO, g]);
        s.chosen.push(g);
        s.visit(1, first + 1);
        s
    };
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .expect("thread pool");
    let branches = nonzero.len().saturating_sub(k - 1);
    let parts: Vec<(usize, Option<Vec<Element>>, u64, bool)> = pool.install(|| {
        (0..branches)
            .into_par_iter()
            .map(|i| {
                let s = run(i);
                (s.best, s.witness, s.nodes, s.interrupted)
            })
            .collect()
    });
    let mut best = usize::MAX;
    let mut witness = None;
    let mut nodes = 0;
    let mut interrupted = false;
    for (b, w, nd, int) in parts {
        nodes += nd;
        interrupted |= int;
        if b < best {
            best = b;
            witness = w;
        }
    }
    let value = if best == usize::MAX {
        InvariantValue::Infinity
    } else {
        InvariantValue::Finite(best as u64)
    };
    let witness = witness.map(|w| Certificate::f_attainer(group, &Sequence::from_elements(w)));
    Ok(InvariantResult {
        kind: InvariantKind::FGk,
        group: group.invariant_factors().to_vec(),
        k: Some(k),
        value,
        method: Method::Exhaustive,
        witness,
        search_stats: SearchStats {
            nodes_visited: nodes,
            orbits_pruned: 0,
            wall_time: start.elapsed(),
        },
        // an interrupted minimum search only bounds f from above
        partial: interrupted.then_some(Partial {
            reason: PartialReason::Timeout,
            bound: BoundSide::Upper,
        }),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FloorScanRow {
    pub group: Vec<u32>,
    pub value: InvariantValue,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FloorScanReport {
    pub k: usize,
    pub max_order: u32,
    /// `⌈k²/6⌉`, raised to 19 for `k = 6`.
    pub required: u64,
    pub rows: Vec<FloorScanRow>,
    /// The least `f(G,k)` seen, an upper bound on `f(k)`.
    pub minimum: InvariantValue,
    pub violations: Vec<FloorScanRow>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl FloorScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `f(G,k)` for every group of order at most `max_order`, checked against
/// `f(G,k) ≥ ⌈k²/6⌉` (and `≥ 19` when `k = 6`). Groups with `|G| ≤ k` have
/// no `k`-subsets of nonzero elements and are skipped.
pub fn f_floor_scan(k: usize, max_order: u32, config: &SearchConfig) -> Result<FloorScanReport> {
    let start = Instant::now();
    let mut required = (k * k).div_ceil(6) as u64;
    if k == 6 {
        required = required.max(19);
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut minimum = InvariantValue::Infinity;
    for group in groups_up_to(max_order) {
        if group.order() <= k {
            continue;
        }
        let r = f_g_k(&group, k, config)?;
        if r.is_partial() {
            return Err(Error::BoundExceeded {
                what: "f floor scan (timed out)",
                bound: max_order as usize,
                order: group.order(),
            });
        }
        let row = FloorScanRow {
            group: r.group.clone(),
            value: r.value,
            witness: r.witness.as_ref().map(|c| c.payload.sequence.clone()),
        };
        minimum = minimum.min(r.value);
        if r.value < InvariantValue::Finite(required) {
            violations.push(row.clone());
        }
        rows.push(row);
    }
    Ok(FloorScanReport {
        k,
        max_order,
        required,
        rows,
        minimum,
        violations,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u32]) -> Group {
        Group::new(f).unwrap()
    }

    #[test]
    fn spec_examples() {
        let cfg = SearchConfig::default();
        let r = f_g_k(&g(&[5]), 2, &cfg).unwrap();
        assert_eq!(r.value, InvariantValue::Finite(3));
        assert!(r.witness.unwrap().verify().is_valid());
        assert_eq!(
            f_g_k(&g(&[2]), 1, &cfg).unwrap().value,
            InvariantValue::Finite(1)
        );
        let inf = f_g_k(&g(&[3]), 2, &cfg).unwrap();
        assert_eq!(inf.value, InvariantValue::Infinity);
        assert!(inf.witness.is_none());
        assert!(f_g_k(&g(&[3]), 3, &cfg).is_err());
        assert!(f_g_k(&g(&[3]), 0, &cfg).is_err());
    }

    #[test]
    fn witness_is_lexicographically_first() {
        let cfg = SearchConfig {
            jobs: 1,
            ..SearchConfig::default()
        };
        let r = f_g_k(&g(&[7]), 2, &cfg).unwrap();
        // {1,2} gives {1,2,3}
        assert_eq!(r.value, InvariantValue::Finite(3));
        assert_eq!(r.witness.unwrap().payload.sequence, "7:(1)^1,(2)^1");
        let par = f_g_k(&g(&[7]), 2, &SearchConfig::default()).unwrap();
        assert_eq!(
            par.witness_sequence().unwrap().to_text(&g(&[7])),
            "7:(1)^1,(2)^1"
        );
    }

    #[test]
    fn floor_scan_small() {
        let cfg = SearchConfig::default();
        let r = f_floor_scan(1, 10, &cfg).unwrap();
        assert!(r.passed());
        assert!(r
            .rows
            .iter()
            .all(|row| row.value == InvariantValue::Finite(1)));
        assert_eq!(r.minimum, InvariantValue::Finite(1));
    }
}
