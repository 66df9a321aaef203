//! Dense bitsets over the elements of a group.
//!
//! Bit `i` stands for the element with index `i`. Every subsequence-sum,
//! sumset and subgroup computation in the crate goes through this type.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::{Element, Group};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: Vec<u64>,
    universe: usize,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: vec![0; universe.div_ceil(WORD)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    pub fn singleton(universe: usize, e: Element) -> Self {
        let mut s = Self::empty(universe);
        s.insert(e);
        s
    }

    pub fn from_elements<I: IntoIterator<Item = Element>>(universe: usize, elems: I) -> Self {
        let mut s = Self::empty(universe);
        for e in elems {
            s.insert(e);
        }
        s
    }

    fn trim(&mut self) {
        let extra = self.words.len() * WORD - self.universe;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> extra;
            }
        }
    }

    /// Order of the ambient group.
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, e: Element) -> bool {
        let i = e.index();
        i < self.universe && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: Element) -> bool {
        let i = e.index();
        assert!(
            i < self.universe,
            "element {i} outside universe {}",
            self.universe
        );
        let w = &mut self.words[i / WORD];
        let fresh = *w >> (i % WORD) & 1 == 0;
        *w |= 1 << (i % WORD);
        fresh
    }

    #[inline]
    pub fn remove(&mut self, e: Element) -> bool {
        let i = e.index();
        if i >= self.universe {
            return false;
        }
        let w = &mut self.words[i / WORD];
        let present = *w >> (i % WORD) & 1 == 1;
        *w &= !(1 << (i % WORD));
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> ElementSet {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// `g + self`.
    pub fn translate(&self, group: &Group, g: Element) -> ElementSet {
        let mut out = ElementSet::empty(self.universe);
        self.translate_into(group, g, &mut out);
        out
    }

    /// Writes `g + self` into `out`, overwriting it.
    #[inline]
    pub fn translate_into(&self, group: &Group, g: Element, out: &mut ElementSet) {
        out.clear();
        for a in self.iter() {
            let s = group.add(a, g);
            out.words[s.index() / WORD] |= 1 << (s.index() % WORD);
        }
    }

    /// ORs `g + self` into `out`.
    #[inline]
    pub fn translate_union_into(&self, group: &Group, g: Element, out: &mut ElementSet) {
        for a in self.iter() {
            let s = group.add(a, g);
            out.words[s.index() / WORD] |= 1 << (s.index() % WORD);
        }
    }

    /// `-self`.
    pub fn negated(&self, group: &Group) -> ElementSet {
        ElementSet::from_elements(self.universe, self.iter().map(|a| group.neg(a)))
    }

    pub fn to_indices(&self) -> Vec<u32> {
        self.iter().map(|e| e.index() as u32).collect()
    }

    pub fn first(&self) -> Option<Element> {
        self.iter().next()
    }
}

impl Ord for ElementSet {
    /// Lexicographic on the ascending list of members.
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|e| e.index()))
            .finish()
    }
}

/// Serialized as the sorted list of member indices.
impl Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|e| e.index() as u32))
    }
}

/// Deserializing needs the universe, so it goes through [`IndexList`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexList(pub Vec<u32>);

impl IndexList {
    pub fn into_set(self, universe: usize) -> Option<ElementSet> {
        let mut s = ElementSet::empty(universe);
        for i in self.0 {
            if i as usize >= universe {
                return None;
            }
            s.insert(Element::new(i));
        }
        Some(s)
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = Element;

    #[inline]
    fn next(&mut self) -> Option<Element> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(Element::new((self.word * WORD + bit) as u32));
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word];
        }
    }
}
