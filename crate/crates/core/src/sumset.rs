//! Subsequence sums, sumsets, stabilizers and the zero-sum predicates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, Group, Subgroup};
use crate::sequence::Sequence;
use crate::set::ElementSet;

/// `Σ₀(S)` together with whether `0` is the sum of a nonempty subsequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsequenceSums {
    pub with_zero: ElementSet,
    pub zero_attained: bool,
}

impl SubsequenceSums {
    /// `Σ(S)`.
    pub fn nonempty(&self) -> ElementSet {
        let mut s = self.with_zero.clone();
        if !self.zero_attained {
            s.remove(Element::ZERO);
        }
        s
    }
}

/// Per-term fold: for each `g^[m]` in increasing index order, the running
/// `Σ₀` is replaced by `Σ₀ ∪ (Σ₀+g) ∪ … ∪ (Σ₀+mg)`, built by repeated
/// translation. `0` counts as attained once some translate by `jg`, `j ≥ 1`,
/// hits it.
pub fn sums(group: &Group, seq: &Sequence) -> SubsequenceSums {
    let n = group.order();
    let mut acc = ElementSet::singleton(n, Element::ZERO);
    let mut zero_attained = false;
    let mut shifted = ElementSet::empty(n);
    let mut scratch = ElementSet::empty(n);
    for (g, m) in seq.counts() {
        shifted.clone_from(&acc);
        let mut next = acc.clone();
        for _ in 0..m {
            shifted.translate_into(group, g, &mut scratch);
            std::mem::swap(&mut shifted, &mut scratch);
            zero_attained |= shifted.contains(Element::ZERO);
            next.union_with(&shifted);
            if next.is_full() && zero_attained {
                break;
            }
        }
        acc = next;
    }
    SubsequenceSums {
        with_zero: acc,
        zero_attained,
    }
}

/// `Σ(S)`: sums of nonempty subsequences.
pub fn subsequence_sums(group: &Group, seq: &Sequence) -> ElementSet {
    sums(group, seq).nonempty()
}

/// `Σ₀(S) = Σ(S) ∪ {0}`.
pub fn subsequence_sums_0(group: &Group, seq: &Sequence) -> ElementSet {
    sums(group, seq).with_zero
}

/// `A + B`.
pub fn sumset(group: &Group, a: &ElementSet, b: &ElementSet) -> Result<ElementSet> {
    for s in [a, b] {
        if s.universe() != group.order() {
            return Err(Error::GroupMismatch(s.universe(), group.order()));
        }
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = ElementSet::empty(group.order());
    for x in small.iter() {
        large.translate_union_into(group, x, &mut out);
        if out.is_full() {
            break;
        }
    }
    Ok(out)
}

/// `st(A) = {g : g + A = A}`.
pub fn stabilizer(group: &Group, a: &ElementSet) -> Result<Subgroup> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.universe() != group.order() {
        return Err(Error::GroupMismatch(a.universe(), group.order()));
    }
    let mut members = ElementSet::singleton(group.order(), Element::ZERO);
    let mut shifted = ElementSet::empty(group.order());
    // st(A) ⊆ A − a for any a ∈ A
    let base = a.first().unwrap();
    for x in a.iter() {
        let g = group.sub(x, base);
        if g.is_zero() {
            continue;
        }
        a.translate_into(group, g, &mut shifted);
        if shifted == *a {
            members.insert(g);
        }
    }
    Ok(Subgroup::from_members(group, members))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KneserReport {
    /// `|A₁ + ⋯ + A_r|`
    pub lhs: i64,
    /// `Σ|Aᵢ + H| − (r−1)|H|`
    pub rhs: i64,
    pub stabilizer: Subgroup,
    pub holds: bool,
}

/// Evaluates both sides of Kneser's inequality with `H = st(A₁+⋯+A_r)`.
/// A `false` `holds` means a bug somewhere in the engine.
pub fn kneser_check(group: &Group, sets: &[ElementSet]) -> Result<KneserReport> {
    if sets.is_empty() || sets.iter().any(ElementSet::is_empty) {
        return Err(Error::EmptySet);
    }
    let mut total = sets[0].clone();
    for s in &sets[1..] {
        total = sumset(group, &total, s)?;
    }
    let h = stabilizer(group, &total)?;
    let padded: i64 = sets
        .iter()
        .map(|s| sumset(group, s, &h.members).map(|x| x.len() as i64))
        .sum::<Result<i64>>()?;
    let lhs = total.len() as i64;
    let rhs = padded - (sets.len() as i64 - 1) * h.order as i64;
    Ok(KneserReport {
        lhs,
        rhs,
        holds: lhs >= rhs,
        stabilizer: h,
    })
}

/// `0 ∉ Σ(S)`.
pub fn is_zero_sum_free(group: &Group, seq: &Sequence) -> bool {
    !sums(group, seq).zero_attained
}

/// No two distinct members of `set` sum to zero. The set must avoid `0`.
pub fn is_two_zero_sum_free(group: &Group, set: &ElementSet) -> Result<bool> {
    if set.contains(Element::ZERO) {
        return Err(Error::ZeroInSet);
    }
    Ok(set.iter().all(|a| {
        let b = group.neg(a);
        b == a || !set.contains(b)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub is_basis: bool,
    /// `G ∖ Σ(S)`
    pub missing: ElementSet,
}

/// Whether `Σ(S) = G`.
pub fn is_additive_basis(group: &Group, seq: &Sequence) -> BasisReport {
    let missing = subsequence_sums(group, seq).complement();
    BasisReport {
        is_basis: missing.is_empty(),
        missing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::groups_up_to;

    fn g(f: &[u32]) -> Group {
        Group::new(f).unwrap()
    }

    fn set(grp: &Group, xs: &[u32]) -> ElementSet {
        ElementSet::from_elements(grp.order(), xs.iter().map(|&i| Element::new(i)))
    }

    #[test]
    fn subsequence_sum_examples() {
        let c5 = g(&[5]);
        assert!(subsequence_sums(&c5, &Sequence::new()).is_empty());
        assert_eq!(
            subsequence_sums(&c5, &Sequence::repeat(Element::new(1), 2)),
            set(&c5, &[1, 2])
        );
        assert_eq!(subsequence_sums_0(&c5, &Sequence::new()), set(&c5, &[0]));
        let c33 = g(&[3, 3]);
        let s = Sequence::from_elements([c33.basis_element(0), c33.basis_element(1)]);
        assert_eq!(subsequence_sums_0(&c33, &s).len(), 4);
    }

    #[test]
    fn zero_is_kept_only_when_attained() {
        let c5 = g(&[5]);
        let s = Sequence::from_elements([Element::new(1), Element::new(4)]);
        assert!(subsequence_sums(&c5, &s).contains(Element::ZERO));
        let z = Sequence::repeat(Element::ZERO, 1);
        assert_eq!(subsequence_sums(&c5, &z), set(&c5, &[0]));
    }

    #[test]
    fn sumset_examples() {
        let c5 = g(&[5]);
        let a = set(&c5, &[1, 2]);
        assert_eq!(sumset(&c5, &a, &set(&c5, &[0])).unwrap(), a);
        assert!(sumset(&c5, &a, &ElementSet::empty(5)).unwrap().is_empty());
        assert_eq!(sumset(&c5, &a, &a).unwrap(), set(&c5, &[2, 3, 4]));
        assert!(matches!(
            sumset(&c5, &a, &ElementSet::empty(6)),
            Err(Error::GroupMismatch(6, 5))
        ));
    }

    #[test]
    fn stabilizer_examples() {
        let c6 = g(&[6]);
        assert_eq!(stabilizer(&c6, &ElementSet::full(6)).unwrap().order, 6);
        for x in 0..6 {
            assert_eq!(stabilizer(&c6, &set(&c6, &[x])).unwrap().order, 1);
        }
        let h = stabilizer(&c6, &set(&c6, &[0, 2, 4])).unwrap();
        assert_eq!(h.members, set(&c6, &[0, 2, 4]));
        assert!(matches!(
            stabilizer(&c6, &ElementSet::empty(6)),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn stabilizer_is_maximal() {
        let grp = g(&[2, 6]);
        let subs = grp.subgroups().unwrap();
        for mask in 1u32..(1 << 12) {
            if mask.count_ones() % 2 == 1 && mask % 7 != 0 {
                continue;
            }
            let a = ElementSet::from_elements(
                12,
                (0..12).filter(|i| mask >> i & 1 == 1).map(Element::new),
            );
            let st = stabilizer(&grp, &a).unwrap();
            assert_eq!(sumset(&grp, &st.members, &a).unwrap(), a);
            for k in &subs {
                if st.members.is_subset(&k.members) && k.order > st.order {
                    assert_ne!(sumset(&grp, &k.members, &a).unwrap(), a);
                }
            }
        }
    }

    #[test]
    fn kneser_examples() {
        let c5 = g(&[5]);
        let a = set(&c5, &[0, 1]);
        let r = kneser_check(&c5, &[a.clone(), a.clone()]).unwrap();
        assert_eq!((r.lhs, r.rhs, r.stabilizer.order), (3, 3, 1));
        assert!(r.holds);
        let single = kneser_check(&c5, std::slice::from_ref(&a)).unwrap();
        assert_eq!((single.lhs, single.rhs), (2, 2));
        assert!(kneser_check(&c5, &[a, ElementSet::empty(5)]).is_err());
    }

    #[test]
    fn zero_sum_free_predicates() {
        let c5 = g(&[5]);
        let s = Sequence::from_elements([Element::new(1), Element::new(2)]);
        assert!(is_zero_sum_free(&c5, &s));
        assert!(!is_two_zero_sum_free(&c5, &set(&c5, &[1, 4])).unwrap());
        assert!(is_two_zero_sum_free(&c5, &set(&c5, &[1, 2])).unwrap());
        assert!(matches!(
            is_two_zero_sum_free(&c5, &set(&c5, &[0, 1])),
            Err(Error::ZeroInSet)
        ));
        let grp = g(&[3, 6]);
        for x in grp.nonzero_elements() {
            let s = Sequence::repeat(x, grp.order_of(x) as u32);
            assert!(!is_zero_sum_free(&grp, &s));
        }
    }

    #[test]
    fn basis_examples() {
        let c7 = g(&[7]);
        assert!(is_additive_basis(&c7, &Sequence::repeat(Element::new(1), 7)).is_basis);
        let v4 = g(&[2, 2]);
        let ab = Sequence::from_elements([Element::new(1), Element::new(2)]);
        let r = is_additive_basis(&v4, &ab);
        assert!(!r.is_basis);
        assert_eq!(r.missing, set(&v4, &[0]));
        let e = is_additive_basis(&v4, &Sequence::new());
        assert!(!e.is_basis);
        assert!(e.missing.is_full());
    }

    #[test]
    fn monotone_under_subsequences() {
        let grp = g(&[2, 4]);
        let s = Sequence::from_elements([1, 1, 3, 6, 7].map(Element::new));
        let full = sums(&grp, &s);
        for t in s.subsequences() {
            let part = sums(&grp, &t);
            assert!(part.with_zero.is_subset(&full.with_zero));
            assert!(part.nonempty().is_subset(&full.nonempty()));
        }
    }

    #[test]
    fn stabilizer_grows_under_sumsets() {
        for grp in groups_up_to(12) {
            let n = grp.order() as u32;
            let a = ElementSet::from_elements(grp.order(), (0..n).step_by(2).map(Element::new));
            let b = set(&grp, &[0, n - 1]);
            let sa = stabilizer(&grp, &a).unwrap();
            let sab = stabilizer(&grp, &sumset(&grp, &a, &b).unwrap()).unwrap();
            assert!(sa.members.is_subset(&sab.members), "{grp}");
        }
    }
}
