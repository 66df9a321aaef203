//! Depth-first enumeration of sequences over `G ∖ {0}` in nondecreasing
//! index order, shared by the `c₀` and Davenport searches.
//!
//! Root branches are independent and may run on any number of workers. Each
//! branch keeps its own incumbent, so node counts do not depend on
//! scheduling, and the merge (longest first, then least canonical count
//! vector) does not depend on completion order.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use crate::group::{Automorphism, Element, Group};
use crate::sequence::Canonizer;
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Regular sequences that are not additive bases.
    RegularNonBasis,
    /// Zero-sum-free sequences.
    ZeroSumFree,
}

pub struct Problem<'a> {
    pub group: &'a Group,
    pub mode: Mode,
    /// `|H| − 1` per proper subgroup (regular mode only).
    caps: Vec<u32>,
    /// Proper subgroups containing each element, by index into `caps`.
    containing: Vec<Vec<u32>>,
    pub canonizer: Option<Canonizer>,
}

impl<'a> Problem<'a> {
    pub fn new(
        group: &'a Group,
        mode: Mode,
        proper: &[crate::group::Subgroup],
        canonizer: Option<Canonizer>,
    ) -> Self {
        let mut caps = Vec::new();
        let mut containing = vec![Vec::new(); group.order()];
        if mode == Mode::RegularNonBasis {
            for (i, h) in proper.iter().enumerate() {
                caps.push(h.order as u32 - 1);
                for x in h.members.iter() {
                    containing[x.index()].push(i as u32);
                }
            }
        }
        Problem {
            group,
            mode,
            caps,
            containing,
            canonizer,
        }
    }

    fn canonical(&self, counts: &[u32]) -> Vec<u32> {
        match &self.canonizer {
            Some(c) => c.canonical_counts(counts),
            None => counts.to_vec(),
        }
    }
}

/// A root element and the elements the rest of the sequence may use.
#[derive(Clone, Debug)]
pub struct Branch {
    pub root: Element,
    pub allowed: Vec<Element>,
}

/// Root branches. With automorphisms, one branch per orbit of nonzero
/// elements: branch `i` is rooted at the least element of orbit `i` and may
/// only use elements of orbits `≥ i`. Every orbit of sequences meets exactly
/// the branch of the least orbit it touches. Without, one branch per nonzero
/// element `g`, using elements of index `≥ g`.
pub fn branches(group: &Group, auts: Option<&[Automorphism]>) -> (Vec<Branch>, u64) {
    let nonzero: Vec<Element> = group.nonzero_elements().collect();
    match auts {
        None => {
            let out = nonzero
                .iter()
                .enumerate()
                .map(|(i, &g)| Branch {
                    root: g,
                    allowed: nonzero[i..].to_vec(),
                })
                .collect();
            (out, 0)
        }
        Some(auts) => {
            let mut orbit = vec![usize::MAX; group.order()];
            let mut reps = Vec::new();
            for &g in &nonzero {
                if orbit[g.index()] != usize::MAX {
                    continue;
                }
                let id = reps.len();
                reps.push(g);
                for a in auts {
                    orbit[a.apply(g).index()] = id;
                }
            }
            let out = reps
                .iter()
                .enumerate()
                .map(|(i, &r)| Branch {
                    root: r,
                    allowed: nonzero
                        .iter()
                        .copied()
                        .filter(|g| orbit[g.index()] >= i)
                        .collect(),
                })
                .collect();
            (out, (nonzero.len() - reps.len()) as u64)
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    /// Never extend beyond this length.
    pub max_len: Option<usize>,
    /// Only sequences of exactly this length count; the first one ends the
    /// branch.
    pub exact_len: Option<usize>,
    /// Lengths below this are not of interest (zero-sum-free bound only).
    pub floor: usize,
    /// With `exact_len`, keep every hit instead of stopping at the first.
    pub collect: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub best_len: Option<usize>,
    /// Canonical count vector of the chosen witness.
    pub best: Option<Vec<u32>>,
    pub nodes: u64,
    pub interrupted: bool,
    /// Raw count vectors of every hit, when collecting.
    pub collected: Vec<Vec<u32>>,
}

impl Outcome {
    fn absorb(&mut self, mut other: Outcome) {
        self.nodes += other.nodes;
        self.collected.append(&mut other.collected);
        self.interrupted |= other.interrupted;
        let better = match (self.best_len, other.best_len) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b > a || (b == a && other.best < self.best),
        };
        if better {
            self.best_len = other.best_len;
            self.best = other.best;
        }
    }
}

pub struct Control {
    pub stop: AtomicBool,
    pub deadline: Option<Instant>,
}

impl Control {
    pub fn new(deadline: Option<Instant>) -> Self {
        Control {
            stop: AtomicBool::new(false),
            deadline,
        }
    }

    pub fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

struct Worker<'p, 'g> {
    p: &'p Problem<'g>,
    allowed: &'p [Element],
    limits: Limits,
    control: &'p Control,
    sums: Vec<ElementSet>,
    zero: Vec<bool>,
    counters: Vec<u32>,
    counts: Vec<u32>,
    out: Outcome,
    done: bool,
}

impl Worker<'_, '_> {
    fn fits(&self, g: Element) -> bool {
        self.p.containing[g.index()]
            .iter()
            .all(|&h| self.counters[h as usize] < self.p.caps[h as usize])
    }

    fn push(&mut self, depth: usize, g: Element) {
        let group = self.p.group;
        if self.sums.len() <= depth + 1 {
            self.sums.push(ElementSet::empty(group.order()));
            self.zero.push(false);
        }
        let (lo, hi) = self.sums.split_at_mut(depth + 1);
        let cur = &lo[depth];
        let next = &mut hi[0];
        next.clone_from(cur);
        cur.translate_union_into(group, g, next);
        self.zero[depth + 1] = self.zero[depth] || cur.contains(group.neg(g));
        for &h in &self.p.containing[g.index()] {
            self.counters[h as usize] += 1;
        }
        self.counts[g.index()] += 1;
    }

    fn pop(&mut self, g: Element) {
        for &h in &self.p.containing[g.index()] {
            self.counters[h as usize] -= 1;
        }
        self.counts[g.index()] -= 1;
    }

    fn record(&mut self, len: usize) {
        if let Some(t) = self.limits.exact_len {
            if len == t && self.limits.collect {
                self.out.collected.push(self.counts.clone());
            } else if len == t {
                self.out.best_len = Some(len);
                self.out.best = Some(self.p.canonical(&self.counts));
                self.done = true;
            }
            return;
        }
        match self.out.best_len {
            Some(b) if len < b => {}
            Some(b) if len == b => {
                let c = self.p.canonical(&self.counts);
                if Some(&c) < self.out.best.as_ref() {
                    self.out.best = Some(c);
                }
            }
            _ => {
                if len >= self.limits.floor {
                    self.out.best_len = Some(len);
                    self.out.best = Some(self.p.canonical(&self.counts));
                }
            }
        }
    }

    fn visit(&mut self, depth: usize, start: usize) {
        self.out.nodes += 1;
        if self.out.nodes & 0x3ff == 0 {
            if let Some(d) = self.control.deadline {
                if Instant::now() >= d {
                    self.control.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.control.stopped() {
            self.out.interrupted = true;
            return;
        }
        let n = self.p.group.order();
        let full = self.sums[depth].is_full();
        match self.p.mode {
            Mode::RegularNonBasis => {
                if full && self.zero[depth] {
                    // a basis, and so is every extension
                    return;
                }
                self.record(depth);
                if full {
                    // every proper extension is a basis
                    return;
                }
            }
            Mode::ZeroSumFree => {
                self.record(depth);
                let reach = depth + n - self.sums[depth].len();
                let target = self.out.best_len.unwrap_or(0).max(self.limits.floor);
                if reach < target {
                    return;
                }
            }
        }
        if self.done || self.limits.max_len.is_some_and(|m| depth >= m) {
            return;
        }
        for pos in start..self.allowed.len() {
            let g = self.allowed[pos];
            let admissible = match self.p.mode {
                Mode::RegularNonBasis => self.fits(g),
                Mode::ZeroSumFree => !self.sums[depth].contains(self.p.group.neg(g)),
            };
            if !admissible {
                continue;
            }
            self.push(depth, g);
            self.visit(depth + 1, pos);
            self.pop(g);
            if self.done || self.out.interrupted {
                return;
            }
        }
    }
}

pub fn run_branch(p: &Problem, b: &Branch, limits: Limits, control: &Control) -> Outcome {
    let n = p.group.order();
    let mut w = Worker {
        p,
        allowed: &b.allowed,
        limits,
        control,
        sums: vec![ElementSet::singleton(n, Element::ZERO)],
        zero: vec![false],
        counters: vec![0; p.caps.len()],
        counts: vec![0; n],
        out: Outcome::default(),
        done: false,
    };
    let admissible = match p.mode {
        Mode::RegularNonBasis => w.fits(b.root),
        Mode::ZeroSumFree => !b.root.is_zero(),
    };
    if admissible {
        w.push(0, b.root);
        w.visit(1, 0);
    }
    w.out
}

/// Runs every branch on a pool of `jobs` workers and merges.
pub fn run_all(
    p: &Problem,
    branches: &[Branch],
    limits: Limits,
    control: &Control,
    jobs: usize,
) -> Outcome {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let parts: Vec<Outcome> = pool.install(|| {
        branches
            .par_iter()
            .map(|b| run_branch(p, b, limits, control))
            .collect()
    });
    let mut out = Outcome::default();
    for part in parts {
        out.absorb(part);
    }
    out
}

/// Runs branches in order and stops at the first success.
pub fn run_first(p: &Problem, branches: &[Branch], limits: Limits, control: &Control) -> Outcome {
    let mut out = Outcome::default();
    for b in branches {
        let part = run_branch(p, b, limits, control);
        let found = part.best_len.is_some();
        out.absorb(part);
        if found || out.interrupted {
            break;
        }
    }
    out
}
