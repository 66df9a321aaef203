//! Sequences over a group: finite multisets of elements.
//!
//! A [`Sequence`] carries no reference to its group; operations that need the
//! group structure take it explicitly. Term order is never observable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Automorphism, Element, Group, Subgroup};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    counts: BTreeMap<Element, u32>,
    len: usize,
}

impl Sequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_elements<I: IntoIterator<Item = Element>>(elems: I) -> Self {
        let mut s = Self::new();
        for e in elems {
            s.push(e, 1);
        }
        s
    }

    /// `g^[k]`.
    pub fn repeat(g: Element, k: u32) -> Self {
        let mut s = Self::new();
        s.push(g, k);
        s
    }

    /// Builds a sequence from a dense multiplicity vector indexed by element.
    pub fn from_count_vector(counts: &[u32]) -> Self {
        let mut s = Self::new();
        for (i, &c) in counts.iter().enumerate() {
            s.push(Element::new(i as u32), c);
        }
        s
    }

    pub fn push(&mut self, g: Element, k: u32) {
        if k > 0 {
            *self.counts.entry(g).or_insert(0) += k;
            self.len += k as usize;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, g: Element) -> u32 {
        self.counts.get(&g).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Element> {
        self.counts.keys().copied().collect()
    }

    /// `h(S)`, the largest multiplicity (0 for the empty sequence).
    pub fn max_multiplicity(&self) -> u32 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    /// `(element, multiplicity)` pairs in increasing element index.
    pub fn counts(&self) -> impl Iterator<Item = (Element, u32)> + '_ {
        self.counts.iter().map(|(&g, &k)| (g, k))
    }

    /// Every term, with repetition, in increasing element index.
    pub fn terms(&self) -> impl Iterator<Item = Element> + '_ {
        self.counts
            .iter()
            .flat_map(|(&g, &k)| std::iter::repeat_n(g, k as usize))
    }

    pub fn count_vector(&self, order: usize) -> Vec<u32> {
        let mut v = vec![0; order];
        for (g, k) in self.counts() {
            v[g.index()] = k;
        }
        v
    }

    /// True when no element repeats, i.e. the sequence is a set.
    pub fn is_set(&self) -> bool {
        self.max_multiplicity() <= 1
    }

    /// `S·T`.
    pub fn concat(&self, other: &Sequence) -> Sequence {
        let mut out = self.clone();
        for (g, k) in other.counts() {
            out.push(g, k);
        }
        out
    }

    /// `T | S`: every multiplicity of `self` is at most the one in `other`.
    pub fn divides(&self, other: &Sequence) -> bool {
        self.counts().all(|(g, k)| other.multiplicity(g) >= k)
    }

    /// `S·T^[-1]`.
    pub fn remove(&self, other: &Sequence) -> Result<Sequence> {
        if !other.divides(self) {
            return Err(Error::NotASubsequence);
        }
        let mut out = Sequence::new();
        for (g, k) in self.counts() {
            out.push(g, k - other.multiplicity(g));
        }
        Ok(out)
    }

    /// `σ(S)`.
    pub fn sigma(&self, group: &Group) -> Element {
        self.counts().fold(Element::ZERO, |acc, (g, k)| {
            group.add(acc, group.mul(k as u64, g))
        })
    }

    /// `S_H`: the terms lying in `H`.
    pub fn restrict_to(&self, h: &Subgroup) -> Sequence {
        let mut out = Sequence::new();
        for (g, k) in self.counts() {
            if h.contains(g) {
                out.push(g, k);
            }
        }
        out
    }

    /// Image under an automorphism.
    pub fn map(&self, aut: &Automorphism) -> Sequence {
        let mut out = Sequence::new();
        for (g, k) in self.counts() {
            out.push(aut.apply(g), k);
        }
        out
    }

    /// Every sub-multiset `T | S`, the empty one included.
    pub fn subsequences(&self) -> Vec<Sequence> {
        let mut out = vec![Sequence::new()];
        for (g, k) in self.counts() {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for t in &out {
                for j in 0..=k {
                    let mut u = t.clone();
                    u.push(g, j);
                    next.push(u);
                }
            }
            out = next;
        }
        out
    }

    /// The text form `n1xn2:(a1,a2)^k,…`, terms in increasing index order.
    pub fn to_text(&self, group: &Group) -> String {
        let mut s = group.to_string();
        s.push(':');
        for (i, (g, k)) in self.counts().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let coords: Vec<String> = group.coords(g).iter().map(u32::to_string).collect();
            write!(s, "({})^{}", coords.join(","), k).unwrap();
        }
        s
    }

    /// Parses the text form. Only the canonical spelling is accepted, so
    /// every accepted string round-trips through [`Sequence::to_text`]
    /// byte for byte.
    pub fn parse(text: &str) -> Result<(Group, Sequence)> {
        let bad = |why: &str| Error::Parse(format!("{why} in sequence {text:?}"));
        let (gspec, body) = text.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let group: Group = gspec.parse()?;
        if group.to_string() != gspec {
            return Err(bad("non-canonical group spec"));
        }
        let mut seq = Sequence::new();
        let mut last: Option<Element> = None;
        let mut rest = body;
        while !rest.is_empty() {
            rest = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let (coords, tail) = rest.split_once(")^").ok_or_else(|| bad("expected ')^'"))?;
            let coords: Vec<u32> = coords
                .split(',')
                .map(|c| parse_canonical_u32(c).ok_or_else(|| bad("bad coordinate")))
                .collect::<Result<_>>()?;
            if coords.len() != group.rank()
                || coords
                    .iter()
                    .zip(group.invariant_factors())
                    .any(|(&c, &n)| c >= n)
            {
                return Err(bad("coordinate vector out of range"));
            }
            let coords: Vec<i64> = coords.into_iter().map(i64::from).collect();
            let g = group.element(&coords)?;
            let (mult, tail) = match tail.split_once(',') {
                Some((m, t)) if !t.is_empty() => (m, t),
                Some(_) => return Err(bad("trailing ','")),
                None => (tail, ""),
            };
            let k = parse_canonical_u32(mult)
                .filter(|&k| k > 0)
                .ok_or_else(|| bad("bad multiplicity"))?;
            if last.is_some_and(|l| l >= g) {
                return Err(bad("terms not in increasing index order"));
            }
            last = Some(g);
            seq.push(g, k);
            rest = tail;
        }
        Ok((group, seq))
    }
}

fn parse_canonical_u32(s: &str) -> Option<u32> {
    let v: u32 = s.parse().ok()?;
    (v.to_string() == s).then_some(v)
}

/// Outcome of a regularity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub is_regular: bool,
    /// A proper subgroup of least order holding too many terms.
    pub violating_subgroup: Option<Subgroup>,
    pub count_in_subgroup: Option<usize>,
}

/// Regularity checks against a precomputed list of proper subgroups.
#[derive(Clone, Debug)]
pub struct RegularityChecker {
    proper: Vec<Subgroup>,
}

impl RegularityChecker {
    pub fn new(group: &Group) -> Result<Self> {
        Ok(RegularityChecker {
            proper: group.proper_subgroups()?,
        })
    }

    pub fn proper_subgroups(&self) -> &[Subgroup] {
        &self.proper
    }

    pub fn check(&self, seq: &Sequence) -> RegularityReport {
        // Subgroups are sorted by order, so the first violator is of least order.
        for h in &self.proper {
            let inside = seq.restrict_to(h).len();
            if inside >= h.order {
                return RegularityReport {
                    is_regular: false,
                    violating_subgroup: Some(h.clone()),
                    count_in_subgroup: Some(inside),
                };
            }
        }
        RegularityReport {
            is_regular: true,
            violating_subgroup: None,
            count_in_subgroup: None,
        }
    }

    pub fn is_regular(&self, seq: &Sequence) -> bool {
        self.proper
            .iter()
            .all(|h| seq.restrict_to(h).len() < h.order)
    }
}

/// `S` is regular when every proper subgroup `H` holds at most `|H| − 1` terms.
pub fn is_regular(group: &Group, seq: &Sequence) -> Result<RegularityReport> {
    Ok(RegularityChecker::new(group)?.check(seq))
}

/// Orbit representatives of sequences under `Aut(G)`.
#[derive(Clone, Debug)]
pub struct Canonizer {
    order: usize,
    auts: Vec<Automorphism>,
}

impl Canonizer {
    pub fn new(group: &Group) -> Result<Self> {
        Ok(Canonizer {
            order: group.order(),
            auts: group.automorphisms()?,
        })
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.auts
    }

    /// Lexicographically least count vector over the orbit of `counts`.
    pub fn canonical_counts(&self, counts: &[u32]) -> Vec<u32> {
        let mut best = counts.to_vec();
        let mut img = vec![0u32; self.order];
        for a in &self.auts {
            img.iter_mut().for_each(|x| *x = 0);
            for (i, &c) in counts.iter().enumerate() {
                if c > 0 {
                    img[a.apply(Element::new(i as u32)).index()] = c;
                }
            }
            if img < best {
                best.copy_from_slice(&img);
            }
        }
        best
    }

    pub fn canonical(&self, seq: &Sequence) -> Sequence {
        Sequence::from_count_vector(&self.canonical_counts(&seq.count_vector(self.order)))
    }
}

pub fn canonical_form(group: &Group, seq: &Sequence) -> Result<Sequence> {
    Ok(Canonizer::new(group)?.canonical(seq))
}
