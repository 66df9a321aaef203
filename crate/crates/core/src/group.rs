//! Finite abelian groups `C_{n1} ⊕ … ⊕ C_{nr}` given by invariant factors.
//!
//! Elements are encoded as a single mixed-radix index: the coordinate vector
//! `(a1, …, ar)` with `ai < ni` maps to `a1·(n2⋯nr) + … + ar`, so the last
//! coordinate varies fastest and index order is lexicographic order on
//! coordinates.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Default order bound for [`Group::subgroups`].
pub const SUBGROUP_ORDER_BOUND: usize = 10_000;
/// Default order bound for [`Group::automorphisms`].
pub const AUTOMORPHISM_ORDER_BOUND: usize = 200;
/// Cap on the number of generator-image tuples tried during automorphism
/// enumeration; elementary abelian groups of moderate order blow past this
/// long before they hit the order bound.
pub const AUTOMORPHISM_TUPLE_BOUND: usize = 4_000_000;

/// Groups at most this large get a precomputed Cayley table.
const TABLE_LIMIT: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);

    #[inline]
    pub const fn new(index: u32) -> Self {
        Element(index)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct Group {
    factors: Vec<u32>,
    order: usize,
    smallest_prime: u32,
    /// `strides[i]` is the index weight of coordinate `i`.
    strides: Vec<usize>,
    neg: Arc<[u32]>,
    table: Option<Arc<[u32]>>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({self})")
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Parses the `n1xn2x…` group spec.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        let factors = s
            .split('x')
            .map(|p| {
                p.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad invariant factor {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Group::new(&factors)
    }
}

impl Group {
    pub fn new(factors: &[u32]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        if let Some(&bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidFactor(bad));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::DivisibilityViolation(w[0], w[1]));
            }
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .filter(|&o| o <= u32::MAX as usize / 2)
            .ok_or(Error::BoundExceeded {
                what: "element encoding",
                bound: u32::MAX as usize / 2,
                order: usize::MAX,
            })?;
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        // Every prime dividing |G| divides the largest factor.
        let smallest_prime = smallest_prime_factor(*factors.last().unwrap());
        let mut g = Group {
            factors: factors.to_vec(),
            order,
            smallest_prime,
            strides,
            neg: Arc::from(Vec::new()),
            table: None,
        };
        let neg: Vec<u32> = (0..order)
            .map(|i| g.neg_slow(Element(i as u32)).0)
            .collect();
        g.neg = Arc::from(neg);
        if order <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    table.push(g.add_slow(Element(a as u32), Element(b as u32)).0);
                }
            }
            g.table = Some(Arc::from(table));
        }
        Ok(g)
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Group::new(&[n])
    }

    pub fn invariant_factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// The least prime dividing the group order.
    pub fn smallest_prime(&self) -> u32 {
        self.smallest_prime
    }

    /// Exponent of the group (the largest invariant factor).
    pub fn exponent(&self) -> u32 {
        *self.factors.last().unwrap()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn contains(&self, e: Element) -> bool {
        e.index() < self.order
    }

    pub fn check(&self, e: Element) -> Result<Element> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::IndexOutOfRange {
                index: e.index(),
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order as u32).map(Element)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Element> + '_ {
        (1..self.order as u32).map(Element)
    }

    pub fn coords(&self, e: Element) -> Vec<u32> {
        let mut rest = e.index();
        self.strides
            .iter()
            .map(|&s| {
                let c = rest / s;
                rest %= s;
                c as u32
            })
            .collect()
    }

    /// Encodes a coordinate vector; coordinates are reduced modulo their factor.
    pub fn element(&self, coords: &[i64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let idx = coords
            .iter()
            .zip(&self.factors)
            .zip(&self.strides)
            .map(|((&c, &n), &s)| c.rem_euclid(n as i64) as usize * s)
            .sum::<usize>();
        Ok(Element(idx as u32))
    }

    /// The `i`-th standard generator (order `n_i`).
    pub fn basis_element(&self, i: usize) -> Element {
        Element(self.strides[i] as u32)
    }

    fn add_slow(&self, a: Element, b: Element) -> Element {
        let (mut x, mut y) = (a.index(), b.index());
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.factors) {
            let (ca, cb) = (x / s, y / s);
            x %= s;
            y %= s;
            out += (ca + cb) % n as usize * s;
        }
        Element(out as u32)
    }

    fn neg_slow(&self, a: Element) -> Element {
        let mut x = a.index();
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.factors) {
            let c = x / s;
            x %= s;
            out += (n as usize - c) % n as usize * s;
        }
        Element(out as u32)
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.table {
            Some(t) => Element(t[a.index() * self.order + b.index()]),
            None => self.add_slow(a, b),
        }
    }

    pub fn checked_add(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        Element(self.neg[a.index()])
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    /// `k·g`.
    pub fn mul(&self, k: u64, g: Element) -> Element {
        let mut x = g.index();
        let mut out = 0;
        for (&s, &n) in self.strides.iter().zip(&self.factors) {
            let c = (x / s) as u64;
            x %= s;
            out += ((c * (k % n as u64)) % n as u64) as usize * s;
        }
        Element(out as u32)
    }

    /// Least `k ≥ 1` with `k·g = 0`.
    pub fn order_of(&self, g: Element) -> u64 {
        self.coords(g)
            .iter()
            .zip(&self.factors)
            .map(|(&a, &n)| (n / gcd(a, n)) as u64)
            .fold(1, lcm)
    }

    /// The subgroup generated by `gens`, by breadth-first closure.
    pub fn span(&self, gens: &[Element]) -> Subgroup {
        Subgroup::from_members(self, self.span_members(gens))
    }

    fn span_members(&self, gens: &[Element]) -> ElementSet {
        let mut members = ElementSet::singleton(self.order, Element::ZERO);
        let gens: Vec<Element> = gens.iter().copied().filter(|g| !g.is_zero()).collect();
        let mut queue = VecDeque::from([Element::ZERO]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.add(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        members
    }

    pub fn span_set(&self, set: &ElementSet) -> Subgroup {
        self.span(&set.iter().collect::<Vec<_>>())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self, ElementSet::full(self.order))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_members(self, ElementSet::singleton(self.order, Element::ZERO))
    }

    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        self.subgroups_bounded(SUBGROUP_ORDER_BOUND)
    }

    /// Every subgroup exactly once, sorted by `(order, members)`.
    ///
    /// A subgroup of a rank-`r` abelian group is generated by at most `r`
    /// elements, so it is the join of at most `r` cyclic subgroups. The joins
    /// are built one cyclic factor at a time and deduplicated on the member
    /// bitset.
    pub fn subgroups_bounded(&self, bound: usize) -> Result<Vec<Subgroup>> {
        if self.order > bound {
            return Err(Error::BoundExceeded {
                what: "subgroup enumeration",
                bound,
                order: self.order,
            });
        }
        let cyclic: BTreeSet<ElementSet> =
            self.elements().map(|g| self.span_members(&[g])).collect();
        let cyclic: Vec<ElementSet> = cyclic.into_iter().collect();
        let mut all: BTreeSet<ElementSet> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<ElementSet> = cyclic.clone();
        for _ in 1..self.rank() {
            let mut next = BTreeSet::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subset(h) {
                        continue;
                    }
                    let joined = subgroup_join(self, h, c);
                    if !all.contains(&joined) {
                        next.insert(joined);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next.into_iter().collect();
        }
        let mut out: Vec<Subgroup> = all
            .into_iter()
            .map(|m| Subgroup::from_members(self, m))
            .collect();
        out.sort_by(|a, b| {
            a.order
                .cmp(&b.order)
                .then_with(|| a.members.cmp(&b.members))
        });
        Ok(out)
    }

    pub fn proper_subgroups(&self) -> Result<Vec<Subgroup>> {
        let mut all = self.subgroups()?;
        all.pop();
        Ok(all)
    }

    /// `G/H` with coset representatives chosen as the least index in each coset.
    pub fn quotient(&self, h: &Subgroup) -> QuotientGroup {
        let mut coset_of = vec![u32::MAX; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if coset_of[g.index()] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(g);
            for x in h.members.iter() {
                coset_of[self.add(g, x).index()] = id;
            }
        }
        QuotientGroup {
            group: self.clone(),
            kernel_order: h.order,
            coset_of,
            reps,
        }
    }

    pub fn automorphisms(&self) -> Result<Vec<Automorphism>> {
        self.automorphisms_bounded(AUTOMORPHISM_ORDER_BOUND)
    }

    /// All automorphisms, identity first.
    ///
    /// A homomorphism is fixed by the images `h_i` of the standard generators,
    /// subject to `n_i·h_i = 0`; it is an automorphism iff it is injective.
    pub fn automorphisms_bounded(&self, bound: usize) -> Result<Vec<Automorphism>> {
        if self.order > bound {
            return Err(Error::BoundExceeded {
                what: "automorphism enumeration",
                bound,
                order: self.order,
            });
        }
        let candidates: Vec<Vec<Element>> = self
            .factors
            .iter()
            .map(|&n| {
                self.elements()
                    .filter(|&h| self.mul(n as u64, h).is_zero())
                    .collect()
            })
            .collect();
        let tuples = candidates
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
            .unwrap_or(usize::MAX);
        if tuples > AUTOMORPHISM_TUPLE_BOUND {
            return Err(Error::BoundExceeded {
                what: "automorphism enumeration (generator tuples)",
                bound: AUTOMORPHISM_TUPLE_BOUND,
                order: tuples,
            });
        }
        let r = self.rank();
        let mut choice = vec![0usize; r];
        let mut out = Vec::new();
        let mut image = vec![0u32; self.order];
        let mut seen = ElementSet::empty(self.order);
        'outer: loop {
            let imgs: Vec<Element> = (0..r).map(|i| candidates[i][choice[i]]).collect();
            seen.clear();
            seen.insert(Element::ZERO);
            let mut injective = true;
            for idx in 1..self.order {
                // Peel off the least significant nonzero coordinate.
                let i = (0..r)
                    .rev()
                    .find(|&i| !(idx / self.strides[i]).is_multiple_of(self.factors[i] as usize))
                    .unwrap();
                let prev = image[idx - self.strides[i]];
                let y = self.add(Element(prev), imgs[i]);
                image[idx] = y.0;
                if !seen.insert(y) {
                    injective = false;
                    break;
                }
            }
            if injective {
                out.push(Automorphism { map: image.clone() });
            }
            for i in (0..r).rev() {
                choice[i] += 1;
                if choice[i] < candidates[i].len() {
                    continue 'outer;
                }
                choice[i] = 0;
            }
            break;
        }
        out.sort_by(|a, b| {
            let ia = a.is_identity();
            let ib = b.is_identity();
            ib.cmp(&ia).then_with(|| a.map.cmp(&b.map))
        });
        Ok(out)
    }
}

fn subgroup_join(group: &Group, h: &ElementSet, k: &ElementSet) -> ElementSet {
    let mut out = ElementSet::empty(group.order());
    for x in k.iter() {
        h.translate_union_into(group, x, &mut out);
    }
    out
}

/// A subgroup together with a generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub members: ElementSet,
    pub generators: Vec<Element>,
    pub order: usize,
}

impl Subgroup {
    /// Wraps a member set that is already known to be a subgroup; the
    /// generators are picked greedily in index order.
    pub fn from_members(group: &Group, members: ElementSet) -> Self {
        let mut generators = Vec::new();
        let mut span = ElementSet::singleton(group.order(), Element::ZERO);
        for g in members.iter() {
            if !span.contains(g) {
                generators.push(g);
                span = group.span_members(&generators);
            }
        }
        let order = members.len();
        Subgroup {
            members,
            generators,
            order,
        }
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members.contains(e)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

/// `G/H`, with cosets numbered in the order of their least element.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    group: Group,
    kernel_order: usize,
    coset_of: Vec<u32>,
    reps: Vec<Element>,
}

impl QuotientGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel_order
    }

    /// The canonical projection `φ: G → G/H`.
    pub fn project(&self, g: Element) -> u32 {
        self.coset_of[g.index()]
    }

    pub fn representative(&self, coset: u32) -> Element {
        self.reps[coset as usize]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.project(self.group.add(self.reps[a as usize], self.reps[b as usize]))
    }

    pub fn order_of(&self, coset: u32) -> u64 {
        let mut k = 1;
        let mut x = coset;
        while x != 0 {
            x = self.add(x, coset);
            k += 1;
        }
        k
    }

    /// Isomorphism type of the quotient as invariant factors. The trivial
    /// quotient has an empty list.
    pub fn invariant_factors(&self) -> Vec<u32> {
        let orders: Vec<u64> = (0..self.order() as u32).map(|c| self.order_of(c)).collect();
        invariant_factors_from_orders(&orders)
    }
}

/// Recovers the invariant factors of a finite abelian group from the
/// multiset of its element orders.
///
/// For each prime `p`, `#{x : p^k·x = 0} = p^(Σ min(k, e_i))` over the
/// exponents `e_i` of the `p`-primary part, so successive quotients of
/// these counts give `#{i : e_i ≥ k}`.
pub fn invariant_factors_from_orders(orders: &[u64]) -> Vec<u32> {
    let n = orders.len() as u64;
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    // Per prime, the p-power parts of the invariant factors, largest first.
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for &p in &primes {
        let mut log_prev = 0u32;
        let mut at_least = Vec::new();
        let mut pk = p;
        loop {
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let log = count.ilog(p);
            if log == log_prev {
                break;
            }
            at_least.push((log - log_prev) as usize);
            log_prev = log;
            pk *= p;
        }
        // at_least[k-1] = #{i : e_i ≥ k}; turn into explicit prime powers.
        let len = at_least.first().copied().unwrap_or(0);
        let mut powers = vec![1u64; len];
        for &cnt in &at_least {
            for pw in powers.iter_mut().take(cnt) {
                *pw *= p;
            }
        }
        columns.push(powers);
    }
    let rank = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<u32> = (0..rank)
        .map(|i| {
            columns
                .iter()
                .map(|c| c.get(i).copied().unwrap_or(1))
                .product::<u64>() as u32
        })
        .collect();
    factors.reverse();
    factors
}

/// An automorphism as its table of images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    map: Vec<u32>,
}

impl Automorphism {
    #[inline]
    pub fn apply(&self, e: Element) -> Element {
        Element(self.map[e.index()])
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i as u32 == m)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut map = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            map[m as usize] = i as u32;
        }
        Automorphism { map }
    }
}

/// Orbits of `Aut(G)` on the group elements, each as its least member.
pub fn orbit_representatives(group: &Group, auts: &[Automorphism]) -> Vec<Element> {
    let mut seen = ElementSet::empty(group.order());
    let mut reps = Vec::new();
    for g in group.elements() {
        if seen.insert(g) {
            reps.push(g);
            for a in auts {
                seen.insert(a.apply(g));
            }
        }
    }
    reps
}

/// All invariant-factor lists of abelian groups of order exactly `n`.
pub fn groups_of_order(n: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, last: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        // acc holds factors from the largest down; each must divide the previous.
        if remaining == 1 {
            let mut f = acc.clone();
            f.reverse();
            out.push(f);
            return;
        }
        for d in (2..=remaining).rev() {
            if remaining.is_multiple_of(d) && last.is_multiple_of(d) {
                acc.push(d);
                rec(remaining / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for top in (2..=n).rev() {
        if !n.is_multiple_of(top) {
            continue;
        }
        rec(n / top, top, &mut vec![top], &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// All groups of order at most `max_order`, sorted by order then factors.
pub fn groups_up_to(max_order: u32) -> Vec<Group> {
    (2..=max_order)
        .flat_map(|n| {
            groups_of_order(n)
                .into_iter()
                .map(|f| Group::new(&f).expect("generated factors are valid"))
        })
        .collect()
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a as u32, b as u32) as u64 * b
}

pub fn smallest_prime_factor(n: u32) -> u32 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n as u32) as u64 == n
}
