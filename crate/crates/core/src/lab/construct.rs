//! Constructions on long sequences: the greedy large-sumset subset, the
//! block factorization and the choice of `T₁`.

use serde::Serialize;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::invariants::{m_of, regular_non_basis_of_length, SearchConfig};
use crate::sequence::Sequence;
use crate::set::ElementSet;
use crate::sumset::sums;

/// Size threshold on `A` and size cap on `B` for the greedy construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyConfig {
    pub threshold: usize,
    pub cap: usize,
}

impl GreedyConfig {
    /// `|A| ≥ 6p(p+1)+1`, `|B| ≤ 6p+1`.
    pub fn standard(p: u32) -> Self {
        let p = p as usize;
        GreedyConfig {
            threshold: 6 * p * (p + 1) + 1,
            cap: 6 * p + 1,
        }
    }

    /// For `p = 3`, `f(6) = 19 ≥ 3·6+1` lets the cap drop to 6 and the
    /// threshold to 21.
    pub fn refined_p3() -> Self {
        GreedyConfig {
            threshold: 21,
            cap: 6,
        }
    }
}

/// True when `b` is a zero-sum-free set of at most `cap` elements with
/// `|Σ₀(B)| ≥ p|B|+2`.
pub fn block_ok(group: &Group, b: &ElementSet, p: u32, cap: usize) -> bool {
    let s = sums(group, &Sequence::from_elements(b.iter()));
    !b.is_empty()
        && b.len() <= cap
        && !s.zero_attained
        && s.with_zero.len() >= p as usize * b.len() + 2
}

/// Grows `B ⊆ A` one element at a time, always adjoining the least-index
/// `g ∈ A ∖ B` with `g ∉ −Σ(B)`, until `|Σ(B)| ≥ p|B|+1` or `|B|` reaches
/// the cap.
pub fn greedy_large_sumset_subset(group: &Group, a: &ElementSet, p: u32) -> Result<ElementSet> {
    greedy_large_sumset_subset_with(group, a, p, GreedyConfig::standard(p))
}

pub fn greedy_large_sumset_subset_with(
    group: &Group,
    a: &ElementSet,
    p: u32,
    config: GreedyConfig,
) -> Result<ElementSet> {
    if a.contains(Element::ZERO) {
        return Err(Error::PreconditionViolated("0 ∈ A".into()));
    }
    if p != group.smallest_prime() {
        return Err(Error::PreconditionViolated(format!(
            "p={p} is not the smallest prime dividing |G|={}",
            group.order()
        )));
    }
    if a.len() < config.threshold {
        return Err(Error::PreconditionViolated(format!(
            "|A|={} is below the threshold {}",
            a.len(),
            config.threshold
        )));
    }
    let n = group.order();
    let mut b = ElementSet::empty(n);
    let mut sigma0 = ElementSet::singleton(n, Element::ZERO);
    let mut next = ElementSet::empty(n);
    loop {
        let size = b.len();
        if size > 0 && sigma0.len() > p as usize * size + 1 {
            break;
        }
        if size == config.cap {
            break;
        }
        // g ∉ −Σ(B) ⇔ −g ∉ Σ₀(B) for g ≠ 0
        let g = a
            .iter()
            .find(|&g| !b.contains(g) && !sigma0.contains(group.neg(g)))
            .ok_or_else(|| {
                Error::WitnessNotFound(format!("no admissible element after {size} steps"))
            })?;
        b.insert(g);
        next.clone_from(&sigma0);
        sigma0.translate_union_into(group, g, &mut next);
        std::mem::swap(&mut sigma0, &mut next);
    }
    Ok(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub blocks: Vec<Sequence>,
    pub remainder: Sequence,
    /// `|Σ₀(Aᵢ)|` per block.
    pub block_sums: Vec<usize>,
}

impl Factorization {
    /// `A₁·…·A_t·T`.
    pub fn product(&self) -> Sequence {
        self.blocks
            .iter()
            .fold(self.remainder.clone(), |acc, b| acc.concat(b))
    }
}

/// `S = A₁·…·A_t·T`: blocks are cut from the support of what remains while
/// that support has more than `6p(p+1)` elements.
pub fn factorize_regular_sequence(group: &Group, s: &Sequence, p: u32) -> Result<Factorization> {
    if s.multiplicity(Element::ZERO) > 0 {
        return Err(Error::ZeroTermPresent);
    }
    let config = GreedyConfig::standard(p);
    let mut remainder = s.clone();
    let mut blocks = Vec::new();
    let mut block_sums = Vec::new();
    while remainder.support().len() >= config.threshold {
        let supp = ElementSet::from_elements(group.order(), remainder.support());
        let b = greedy_large_sumset_subset_with(group, &supp, p, config)?;
        let block = Sequence::from_elements(b.iter());
        block_sums.push(sums(group, &block).with_zero.len());
        remainder = remainder.remove(&block)?;
        blocks.push(block);
    }
    Ok(Factorization {
        blocks,
        remainder,
        block_sums,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionCase {
    /// `G/⟨supp(S₁)⟩` has prime order.
    PrimeQuotient,
    /// Seeded with a pair spanning a composite quotient.
    CompositePair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionBlock {
    pub t1: Sequence,
    /// `|⟨supp(T₁), supp(S₁)⟩ / ⟨supp(S₁)⟩|`
    pub quotient_order: usize,
    pub case: ExtensionCase,
}

fn span_order(group: &Group, gens: &[Element]) -> usize {
    group.span(gens).order
}

/// Picks `T₁ | S·S₁^[-1]` with `|T₁| = 2p−1` whose terms avoid
/// `K = ⟨supp(S₁)⟩` and with `|⟨supp(T₁), supp(S₁)⟩/K| ≥ 2p`. Returns
/// `None` when no such block exists. For regular `S` with
/// `⟨supp(S)⟩ = G` and quotient `G/K` of order at least `2p` one always does.
pub fn select_extension_block(
    group: &Group,
    s: &Sequence,
    s1: &Sequence,
    p: u32,
) -> Result<Option<ExtensionBlock>> {
    let need = 2 * p as usize - 1;
    let rest = s
        .remove(s1)
        .map_err(|_| Error::PreconditionViolated("S₁ is not a subsequence of S".into()))?;
    if rest.len() < need {
        return Err(Error::PreconditionViolated(format!(
            "|S·S₁^[-1]| = {} < 2p−1 = {need}",
            rest.len()
        )));
    }
    let k_gens = s1.support();
    let k = group.span(&k_gens);
    let quotient_order = group.order() / k.order;
    let outside: Vec<Element> = rest.terms().filter(|&g| !k.contains(g)).collect();
    if outside.len() < need {
        return Ok(None);
    }
    let finish = |t1: Sequence, case| {
        let mut gens = k_gens.clone();
        gens.extend(t1.support());
        let q = span_order(group, &gens) / k.order;
        (q >= 2 * p as usize).then_some(ExtensionBlock {
            t1,
            quotient_order: q,
            case,
        })
    };
    if crate::group::is_prime(quotient_order as u64) {
        let t1 = Sequence::from_elements(outside[..need].iter().copied());
        return Ok(finish(t1, ExtensionCase::PrimeQuotient));
    }
    // A pair (possibly one element twice) whose span over K has composite
    // order; then fill with the next terms in index order.
    let rest_out = Sequence::from_elements(outside.iter().copied());
    let supp = rest_out.support();
    for (i, &h1) in supp.iter().enumerate() {
        for &h2 in &supp[i..] {
            if h1 == h2 && rest_out.multiplicity(h1) < 2 {
                continue;
            }
            let mut gens = k_gens.clone();
            gens.extend([h1, h2]);
            let q = span_order(group, &gens) / k.order;
            if q < 2 || crate::group::is_prime(q as u64) {
                continue;
            }
            let mut t1 = Sequence::from_elements([h1, h2]);
            let mut left = rest_out.remove(&t1)?;
            while t1.len() < need {
                let g = left.terms().next().expect("enough terms outside K");
                t1.push(g, 1);
                left = left.remove(&Sequence::from_elements([g]))?;
            }
            return Ok(finish(t1, ExtensionCase::CompositePair));
        }
    }
    Ok(None)
}

/// A regular non-basis of length `m(G) − 1`, certified. Failure to find one
/// would contradict the lower bound `c₀(G) ≥ m(G)`.
pub fn find_lower_bound_witness(group: &Group, config: &SearchConfig) -> Result<Certificate> {
    let len = m_of(group) as usize - 1;
    match regular_non_basis_of_length(group, len, config)? {
        Some(seq) => Ok(Certificate::non_basis(group, &seq)),
        None => Err(Error::WitnessNotFound(format!(
            "no regular non-basis of length {len} over {group}"
        ))),
    }
}
