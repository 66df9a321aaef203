//! Brute-force oracles. Nothing here uses the bitset DP or the search
//! engine; subsets are enumerated one by one.
#![allow(dead_code)]

use std::collections::BTreeSet;

use zsf::{Element, Group, Sequence};

pub fn g(spec: &str) -> Group {
    spec.parse().unwrap()
}

/// Sums of all nonempty subsequences, by walking the `2^|S|` index masks.
pub fn brute_sigma(group: &Group, terms: &[Element]) -> BTreeSet<u32> {
    let n = terms.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let mut s = group.zero();
        for (i, &t) in terms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s = group.add(s, t);
            }
        }
        out.insert(s.index() as u32);
    }
    out
}

pub fn brute_sigma0(group: &Group, terms: &[Element]) -> BTreeSet<u32> {
    let mut s = brute_sigma(group, terms);
    s.insert(0);
    s
}

pub fn brute_zero_sum_free(group: &Group, terms: &[Element]) -> bool {
    !brute_sigma(group, terms).contains(&0)
}

/// Every subgroup, as the addition-closed subsets containing 0. Only for
/// tiny groups.
pub fn brute_subgroups(group: &Group) -> Vec<BTreeSet<u32>> {
    let n = group.order();
    assert!(n <= 20, "brute subgroup scan is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let set: BTreeSet<u32> = std::iter::once(0)
            .chain((1..n as u32).filter(|i| mask >> (i - 1) & 1 == 1))
            .collect();
        let closed = set.iter().all(|&a| {
            set.iter().all(|&b| {
                let s = group.add(Element::new(a), Element::new(b));
                set.contains(&(s.index() as u32))
            })
        });
        if closed {
            out.push(set);
        }
    }
    out
}

pub fn brute_regular(group: &Group, subgroups: &[BTreeSet<u32>], terms: &[Element]) -> bool {
    subgroups
        .iter()
        .filter(|h| h.len() < group.order())
        .all(|h| {
            let inside = terms
                .iter()
                .filter(|t| h.contains(&(t.index() as u32)))
                .count();
            inside < h.len()
        })
}

/// Calls `f` on every multiset over `elems` with multiplicity of `elems[i]`
/// at most `caps[i]` and for which `keep` holds. `keep` must be closed under
/// taking subsequences; it is tested after each added term.
pub fn for_each_multiset(
    elems: &[Element],
    caps: &[u32],
    keep: &mut impl FnMut(&[Element]) -> bool,
    f: &mut impl FnMut(&[Element]),
) {
    fn rec(
        i: usize,
        elems: &[Element],
        caps: &[u32],
        cur: &mut Vec<Element>,
        keep: &mut impl FnMut(&[Element]) -> bool,
        f: &mut impl FnMut(&[Element]),
    ) {
        if i == elems.len() {
            f(cur);
            return;
        }
        let base = cur.len();
        rec(i + 1, elems, caps, cur, keep, f);
        for _ in 0..caps[i] {
            cur.push(elems[i]);
            if !keep(cur) {
                break;
            }
            rec(i + 1, elems, caps, cur, keep, f);
        }
        cur.truncate(base);
    }
    rec(0, elems, caps, &mut Vec::new(), keep, f);
}

/// `c₀(G)` as one more than the longest regular non-basis. A regular
/// sequence uses `g` at most `ord(g) − 1` times, which bounds the scan.
pub fn brute_c0(group: &Group) -> u64 {
    let subgroups = brute_subgroups(group);
    let elems: Vec<Element> = group.nonzero_elements().collect();
    let caps: Vec<u32> = elems
        .iter()
        .map(|&e| group.order_of(e) as u32 - 1)
        .collect();
    let mut longest = 0usize;
    // regular and non-basis are both inherited by subsequences
    let mut keep = |terms: &[Element]| {
        brute_regular(group, &subgroups, terms) && brute_sigma(group, terms).len() < group.order()
    };
    for_each_multiset(&elems, &caps, &mut keep, &mut |terms| {
        longest = longest.max(terms.len() + 1);
    });
    longest as u64
}

/// `D(G)` as one more than the longest zero-sum-free sequence.
pub fn brute_davenport(group: &Group) -> u64 {
    let elems: Vec<Element> = group.nonzero_elements().collect();
    let caps: Vec<u32> = elems
        .iter()
        .map(|&e| group.order_of(e) as u32 - 1)
        .collect();
    let mut longest = 0usize;
    let mut keep = |terms: &[Element]| brute_zero_sum_free(group, terms);
    for_each_multiset(&elems, &caps, &mut keep, &mut |terms| {
        longest = longest.max(terms.len());
    });
    longest as u64 + 1
}

/// `f(G,k)` by listing every `k`-subset of `G ∖ {0}`; `None` for infinity.
pub fn brute_f(group: &Group, k: usize) -> Option<u64> {
    let elems: Vec<Element> = group.nonzero_elements().collect();
    let mut best: Option<u64> = None;
    let caps = vec![1; elems.len()];
    let mut keep = |terms: &[Element]| terms.len() <= k && brute_zero_sum_free(group, terms);
    for_each_multiset(&elems, &caps, &mut keep, &mut |terms| {
        if terms.len() == k {
            let v = brute_sigma(group, terms).len() as u64;
            best = Some(best.map_or(v, |b| b.min(v)));
        }
    });
    best
}

pub fn seq(terms: &[Element]) -> Sequence {
    Sequence::from_elements(terms.iter().copied())
}
