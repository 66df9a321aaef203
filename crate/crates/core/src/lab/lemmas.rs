use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::construct::{block_ok, find_lower_bound_witness, greedy_large_sumset_subset_with};
use super::{Counterexample, GreedyConfig, LemmaId, LemmaReport, Scope, ScopeRecord};
use crate::error::{Error, Result};
use crate::group::{groups_up_to, Element, Group};
use crate::invariants::{
    davenport, f_floor_scan, m_of, regular_non_bases_of_length, Method, SearchConfig,
};
use crate::sequence::{RegularityChecker, Sequence};
use crate::set::ElementSet;
use crate::sumset::{is_two_zero_sum_free, kneser_check, stabilizer, sums, sumset};

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

/// Maps `f` over `items` on `jobs` workers, keeping input order.
fn par_map<T: Sync, R: Send>(
    jobs: usize,
    items: &[T],
    f: impl Fn(&T) -> R + Sync + Send,
) -> Vec<R> {
    use rayon::prelude::*;
    pool(jobs).install(|| items.par_iter().map(f).collect())
}

/// Independent random stream per case, so results do not depend on the
/// worker count.
fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

fn specs(groups: &[Group]) -> Vec<String> {
    groups.iter().map(Group::to_string).collect()
}

fn report(id: LemmaId, scope: ScopeRecord) -> LemmaReport {
    LemmaReport {
        lemma_id: id,
        scope,
        cases_checked: 0,
        non_vacuous: None,
        failures: Vec::new(),
        wall_time: Default::default(),
    }
}

fn search_config(scope: &Scope) -> SearchConfig {
    SearchConfig {
        jobs: scope.jobs,
        ..SearchConfig::default()
    }
}

/// `Σ₀` of a set by listing all `2^|B|` subsets, and whether a nonempty
/// subset sums to zero.
fn brute_sigma0(group: &Group, elems: &[Element]) -> (ElementSet, bool) {
    let mut out = ElementSet::empty(group.order());
    let mut zero = false;
    for mask in 0u64..(1 << elems.len()) {
        let s = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(Element::ZERO, |acc, (_, &g)| group.add(acc, g));
        zero |= mask != 0 && s.is_zero();
        out.insert(s);
    }
    (out, zero)
}

fn random_subset(rng: &mut ChaCha8Rng, group: &Group) -> ElementSet {
    let n = group.order();
    let density: f64 = rng.gen_range(0.05..0.6);
    let mut s = ElementSet::empty(n);
    for g in group.elements() {
        if rng.gen_bool(density) {
            s.insert(g);
        }
    }
    if s.is_empty() {
        s.insert(Element::new(rng.gen_range(0..n as u32)));
    }
    s
}

fn set_seq(s: &ElementSet) -> Sequence {
    Sequence::from_elements(s.iter())
}

fn seq_set(group: &Group, s: &Sequence) -> ElementSet {
    ElementSet::from_elements(group.order(), s.support())
}

// L2.1 -----------------------------------------------------------------------

pub(super) fn kneser(scope: &Scope) -> Result<LemmaReport> {
    let max_order = scope.max_order.unwrap_or(36);
    let samples = scope.samples.unwrap_or(10_000);
    let groups = groups_up_to(max_order);
    let mut rep = report(
        LemmaId::L2_1,
        ScopeRecord {
            groups: specs(&groups),
            max_order: Some(max_order),
            samples: Some(samples),
            seed: scope.seed,
            mode: "sampled".into(),
        },
    );
    if groups.is_empty() {
        return Ok(rep);
    }
    let cases: Vec<u64> = (0..samples as u64).collect();
    let results = par_map(scope.jobs, &cases, |&i| -> Result<Option<Counterexample>> {
        let mut rng = case_rng(scope.seed, i);
        let group = &groups[rng.gen_range(0..groups.len())];
        let r = rng.gen_range(1..=3);
        let sets: Vec<ElementSet> = (0..r).map(|_| random_subset(&mut rng, group)).collect();
        let k = kneser_check(group, &sets)?;
        Ok((!k.holds).then(|| {
            let mut cx = Counterexample::new(
                LemmaId::L2_1,
                group,
                format!("|A₁+…+A_r| = {} < {}", k.lhs, k.rhs),
            );
            for (j, s) in sets.iter().enumerate() {
                cx = cx.with_seq(&format!("A{}", j + 1), group, &set_seq(s));
            }
            cx
        }))
    });
    for r in results {
        rep.cases_checked += 1;
        rep.failures.extend(r?);
    }
    Ok(rep)
}

// L2.2 -----------------------------------------------------------------------

/// The groups whose `c₀` is computed exactly by the acceptance suite.
pub fn lower_bound_groups() -> Vec<Group> {
    let mut out: Vec<Group> = (2..=10).map(|n| Group::cyclic(n).unwrap()).collect();
    for f in [[2, 2], [3, 3], [2, 4], [3, 6]] {
        out.push(Group::new(&f).unwrap());
    }
    out
}

pub(super) fn lower_bound(scope: &Scope) -> Result<LemmaReport> {
    let groups = match scope.max_order {
        Some(m) => groups_up_to(m),
        None => lower_bound_groups(),
    };
    let mut rep = report(
        LemmaId::L2_2,
        ScopeRecord {
            groups: specs(&groups),
            max_order: scope.max_order,
            samples: None,
            seed: scope.seed,
            mode: "exhaustive".into(),
        },
    );
    let cfg = SearchConfig {
        jobs: 1,
        ..search_config(scope)
    };
    let results = par_map(scope.jobs, &groups, |g| find_lower_bound_witness(g, &cfg));
    for (g, r) in groups.iter().zip(results) {
        // a missing witness contradicts a proven inequality: abort loudly
        let cert = r?;
        if !cert.verify().is_valid() {
            return Err(Error::WitnessNotFound(format!(
                "lower-bound witness for {g} does not re-verify"
            )));
        }
        let len = Sequence::parse(&cert.payload.sequence)?.1.len() as u64;
        if len + 1 < m_of(g) {
            return Err(Error::WitnessNotFound(format!(
                "witness for {g} is too short"
            )));
        }
        rep.cases_checked += 1;
    }
    Ok(rep)
}

// L2.3 -----------------------------------------------------------------------

fn stabilizer_threshold(group: &Group, cfg: &SearchConfig) -> Result<usize> {
    let p = group.smallest_prime() as usize;
    let d = match davenport(group, Method::Formula, cfg) {
        Ok(r) => r.value,
        Err(Error::FormulaUnavailable(_)) => davenport(group, Method::Exhaustive, cfg)?.value,
        Err(e) => return Err(e),
    };
    let d = d.finite().expect("D(G) is finite") as usize;
    Ok((group.order() / p + p - 2).max(d))
}

/// Checks the conclusion for one nonempty `T | S`.
fn stabilizer_conclusion_holds(group: &Group, t: &Sequence) -> Result<bool> {
    let s0 = sums(group, t).with_zero;
    Ok(stabilizer(group, &s0)?.is_trivial() && s0.len() > t.len())
}

fn random_regular(
    rng: &mut ChaCha8Rng,
    group: &Group,
    chk: &RegularityChecker,
    len: usize,
) -> Option<Sequence> {
    let nonzero: Vec<Element> = group.nonzero_elements().collect();
    'attempt: for _ in 0..50 {
        let mut s = Sequence::new();
        while s.len() < len {
            let options: Vec<Element> = nonzero
                .iter()
                .copied()
                .filter(|&g| chk.is_regular(&s.concat(&Sequence::from_elements([g]))))
                .collect();
            match options.choose(rng) {
                Some(&g) => s.push(g, 1),
                None => continue 'attempt,
            }
        }
        return Some(s);
    }
    None
}

pub(super) fn stabilizer_lemma(scope: &Scope) -> Result<LemmaReport> {
    let cfg = search_config(scope);
    let enumerated = match scope.max_order {
        Some(_) => Vec::new(),
        None => vec![Group::new(&[3, 9])?],
    };
    let max_order = scope.max_order.unwrap_or(16);
    let sampled = groups_up_to(max_order);
    let samples = scope.samples.unwrap_or(500);
    let mut groups = specs(&enumerated);
    groups.extend(specs(&sampled));
    let mut rep = report(
        LemmaId::L2_3,
        ScopeRecord {
            groups,
            max_order: Some(max_order),
            samples: Some(samples),
            seed: scope.seed,
            mode: if enumerated.is_empty() {
                "sampled".into()
            } else {
                "enumerated 3x9 at threshold length, then sampled".into()
            },
        },
    );
    let mut non_vacuous = 0u64;

    for group in &enumerated {
        let thr = stabilizer_threshold(group, &cfg)?;
        let (seqs, interrupted) = regular_non_bases_of_length(group, thr, &cfg)?;
        if interrupted {
            return Err(Error::BoundExceeded {
                what: "L2.3 enumeration",
                bound: thr,
                order: group.order(),
            });
        }
        non_vacuous += seqs.len() as u64;
        let results = par_map(
            scope.jobs,
            &seqs,
            |s| -> Result<(u64, Option<Counterexample>)> {
                let mut n = 0;
                for t in s.subsequences() {
                    if t.is_empty() {
                        continue;
                    }
                    n += 1;
                    if !stabilizer_conclusion_holds(group, &t)? {
                        let cx =
                            Counterexample::new(LemmaId::L2_3, group, "conclusion fails for T | S")
                                .with_seq("S", group, s)
                                .with_seq("T", group, &t)
                                .with_param("threshold", thr as u64);
                        return Ok((n, Some(cx)));
                    }
                }
                Ok((n, None))
            },
        );
        for r in results {
            let (n, cx) = r?;
            rep.cases_checked += n;
            rep.failures.extend(cx);
        }
    }

    if !sampled.is_empty() {
        let thresholds: Vec<usize> = sampled
            .iter()
            .map(|g| stabilizer_threshold(g, &cfg))
            .collect::<Result<_>>()?;
        let checkers: Vec<RegularityChecker> = sampled
            .iter()
            .map(RegularityChecker::new)
            .collect::<Result<_>>()?;
        let cases: Vec<u64> = (0..samples as u64).collect();
        let results = par_map(
            scope.jobs,
            &cases,
            |&i| -> Result<(u64, bool, Option<Counterexample>)> {
                let mut rng = case_rng(scope.seed, i);
                let gi = rng.gen_range(0..sampled.len());
                let group = &sampled[gi];
                let thr = thresholds[gi];
                let Some(s) = random_regular(&mut rng, group, &checkers[gi], thr) else {
                    return Ok((0, false, None));
                };
                let basis = sums(group, &s).nonempty().is_full();
                if basis {
                    return Ok((1, false, None));
                }
                let terms: Vec<Element> = s.terms().collect();
                for _ in 0..64 {
                    let t = loop {
                        let t = Sequence::from_elements(
                            terms.iter().copied().filter(|_| rng.gen_bool(0.5)),
                        );
                        if !t.is_empty() {
                            break t;
                        }
                    };
                    if !stabilizer_conclusion_holds(group, &t)? {
                        let cx =
                            Counterexample::new(LemmaId::L2_3, group, "conclusion fails for T | S")
                                .with_seq("S", group, &s)
                                .with_seq("T", group, &t)
                                .with_param("threshold", thr as u64);
                        return Ok((1, true, Some(cx)));
                    }
                }
                Ok((1, true, None))
            },
        );
        for r in results {
            let (n, nv, cx) = r?;
            rep.cases_checked += n;
            non_vacuous += nv as u64;
            rep.failures.extend(cx);
        }
    }
    rep.non_vacuous = Some(non_vacuous);
    Ok(rep)
}

// L2.4 remark ------------------------------------------------------------------

pub(super) fn f_floor(scope: &Scope) -> Result<LemmaReport> {
    let max_order = scope.max_order.unwrap_or(24);
    let max_k = 8;
    let groups = groups_up_to(max_order);
    let mut rep = report(
        LemmaId::L2_4Remark,
        ScopeRecord {
            groups: specs(&groups),
            max_order: Some(max_order),
            samples: None,
            seed: scope.seed,
            mode: format!("exhaustive, k = 1..={max_k}"),
        },
    );
    let cfg = search_config(scope);
    for k in 1..=max_k {
        let scan = f_floor_scan(k, max_order, &cfg)?;
        rep.cases_checked += scan.rows.len() as u64;
        for v in scan.violations {
            let group = Group::new(&v.group)?;
            let text = v.witness.expect("finite value has a witness");
            let (_, s) = Sequence::parse(&text)?;
            rep.failures.push(
                Counterexample::new(
                    LemmaId::L2_4Remark,
                    &group,
                    format!("f(G,{k}) = {} < {}", v.value, scan.required),
                )
                .with_seq("S", &group, &s),
            );
        }
    }
    Ok(rep)
}

fn f_required(k: usize) -> usize {
    let base = (k * k).div_ceil(6);
    if k == 6 {
        base.max(19)
    } else {
        base
    }
}

// L3.1 -----------------------------------------------------------------------

pub(super) fn greedy(scope: &Scope) -> Result<LemmaReport> {
    let samples = scope.samples.unwrap_or(20);
    let runs: Vec<(Group, u32, GreedyConfig, &str)> = vec![
        (Group::cyclic(38)?, 2, GreedyConfig::standard(2), "standard"),
        (Group::cyclic(81)?, 3, GreedyConfig::standard(3), "standard"),
        (Group::cyclic(81)?, 3, GreedyConfig::refined_p3(), "refined"),
    ];
    let mut rep = report(
        LemmaId::L3_1,
        ScopeRecord {
            groups: vec!["38".into(), "81".into()],
            max_order: None,
            samples: Some(samples),
            seed: scope.seed,
            mode: "sampled A; 38 and 81 standard, 81 refined (cap 6, threshold 21)".into(),
        },
    );
    let mut cases = Vec::new();
    for ri in 0..runs.len() {
        for i in 0..samples {
            cases.push((ri, (ri * samples + i) as u64));
        }
    }
    let results = par_map(
        scope.jobs,
        &cases,
        |&(ri, case)| -> Result<Option<Counterexample>> {
            let (group, p, config, name) = &runs[ri];
            let mut rng = case_rng(scope.seed, case);
            let mut nz: Vec<Element> = group.nonzero_elements().collect();
            nz.shuffle(&mut rng);
            let a =
                ElementSet::from_elements(group.order(), nz[..config.threshold].iter().copied());
            let b = greedy_large_sumset_subset_with(group, &a, *p, *config)?;
            let elems: Vec<Element> = b.iter().collect();
            let (brute, zero) = brute_sigma0(group, &elems);
            let ok = b.is_subset(&a)
                && !b.is_empty()
                && b.len() <= config.cap
                && !zero
                && brute.len() >= *p as usize * b.len() + 2;
            Ok((!ok).then(|| {
                Counterexample::new(LemmaId::L3_1, group, format!("{name} configuration"))
                    .with_seq("A", group, &set_seq(&a))
                    .with_seq("B", group, &set_seq(&b))
                    .with_param("p", *p as u64)
                    .with_param("cap", config.cap as u64)
            }))
        },
    );
    for r in results {
        rep.cases_checked += 1;
        rep.failures.extend(r?);
    }
    Ok(rep)
}

// L3.2 -----------------------------------------------------------------------

struct ShortScan<'a> {
    group: &'a Group,
    p: usize,
    max_len: usize,
    nonzero: Vec<Element>,
    cyclic: Vec<ElementSet>,
    sums: Vec<ElementSet>,
    spans: Vec<ElementSet>,
    terms: Vec<Element>,
    enumerated: u64,
    checked: u64,
    failures: Vec<Counterexample>,
}

impl ShortScan<'_> {
    fn visit(&mut self, depth: usize, start: usize) {
        if depth > 0 {
            self.enumerated += 1;
            let cond1 = depth < self.p;
            let cond2 = depth < 2 * self.p && self.spans[depth].len() >= 2 * self.p;
            if cond1 || cond2 {
                self.checked += 1;
                if self.sums[depth].len() < depth + 1 {
                    let t = Sequence::from_elements(self.terms.iter().copied());
                    self.failures.push(
                        Counterexample::new(LemmaId::L3_2, self.group, "|Σ₀(T)| < |T|+1")
                            .with_seq("T", self.group, &t),
                    );
                }
            }
        }
        if depth == self.max_len {
            return;
        }
        for pos in start..self.nonzero.len() {
            let g = self.nonzero[pos];
            if self.sums.len() <= depth + 1 {
                let n = self.group.order();
                self.sums.push(ElementSet::empty(n));
                self.spans.push(ElementSet::empty(n));
            }
            let (lo, hi) = self.sums.split_at_mut(depth + 1);
            hi[0].clone_from(&lo[depth]);
            lo[depth].translate_union_into(self.group, g, &mut hi[0]);
            let span = if self.spans[depth].contains(g) {
                self.spans[depth].clone()
            } else {
                sumset(self.group, &self.spans[depth], &self.cyclic[g.index()]).expect("same group")
            };
            self.spans[depth + 1] = span;
            self.terms.push(g);
            self.visit(depth + 1, pos);
            self.terms.pop();
        }
    }
}

pub(super) fn short_sequences(scope: &Scope) -> Result<LemmaReport> {
    let max_order = scope.max_order.unwrap_or(16);
    let groups = groups_up_to(max_order);
    let mut rep = report(
        LemmaId::L3_2,
        ScopeRecord {
            groups: specs(&groups),
            max_order: Some(max_order),
            samples: None,
            seed: scope.seed,
            mode: "exhaustive".into(),
        },
    );
    let results = par_map(scope.jobs, &groups, |group| {
        let p = group.smallest_prime() as usize;
        let n = group.order();
        // condition (2) needs a subgroup of order ≥ 2p
        let max_len = if n >= 2 * p { 2 * p - 1 } else { p - 1 };
        let mut scan = ShortScan {
            group,
            p,
            max_len,
            nonzero: group.nonzero_elements().collect(),
            cyclic: group.elements().map(|g| group.span(&[g]).members).collect(),
            sums: vec![ElementSet::singleton(n, Element::ZERO)],
            spans: vec![ElementSet::singleton(n, Element::ZERO)],
            terms: Vec::new(),
            enumerated: 0,
            checked: 0,
            failures: Vec::new(),
        };
        scan.visit(0, 0);
        (scan.checked, scan.failures)
    });
    for (checked, failures) in results {
        rep.cases_checked += checked;
        rep.failures.extend(failures);
    }
    Ok(rep)
}

// C3.3 -----------------------------------------------------------------------

fn coset_conditions(group: &Group, t: &Sequence, s: &Sequence) -> bool {
    let p = group.smallest_prime() as usize;
    let k = group.span(&s.support());
    let mut gens = s.support();
    gens.extend(t.support());
    let q = group.span(&gens).order / k.order;
    t.len() < p || (t.len() < 2 * p && q >= 2 * p)
}

pub(super) fn coset_corollary(scope: &Scope) -> Result<LemmaReport> {
    let max_order = scope.max_order.unwrap_or(24);
    let samples = scope.samples.unwrap_or(10_000);
    let groups = groups_up_to(max_order);
    let mut rep = report(
        LemmaId::C3_3,
        ScopeRecord {
            groups: specs(&groups),
            max_order: Some(max_order),
            samples: Some(samples),
            seed: scope.seed,
            mode: "sampled".into(),
        },
    );
    if groups.is_empty() {
        return Ok(rep);
    }
    let cases: Vec<u64> = (0..samples as u64).collect();
    let results = par_map(
        scope.jobs,
        &cases,
        |&i| -> Option<(bool, Option<Counterexample>)> {
            let mut rng = case_rng(scope.seed, i);
            for _ in 0..20 {
                let group = &groups[rng.gen_range(0..groups.len())];
                let p = group.smallest_prime() as usize;
                let slen = rng.gen_range(0..=3);
                let s = Sequence::from_elements(
                    (0..slen).map(|_| Element::new(rng.gen_range(0..group.order() as u32))),
                );
                let k = group.span(&s.support());
                let outside: Vec<Element> = group.elements().filter(|&g| !k.contains(g)).collect();
                if outside.is_empty() {
                    continue;
                }
                let tlen = rng.gen_range(1..2 * p);
                let t =
                    Sequence::from_elements((0..tlen).map(|_| *outside.choose(&mut rng).unwrap()));
                if !coset_conditions(group, &t, &s) {
                    return Some((false, None));
                }
                let lhs = sums(group, &t.concat(&s)).with_zero.len();
                let rhs = (t.len() + 1) * sums(group, &s).with_zero.len();
                let cx = (lhs < rhs).then(|| {
                    Counterexample::new(LemmaId::C3_3, group, format!("{lhs} < {rhs}"))
                        .with_seq("T", group, &t)
                        .with_seq("S", group, &s)
                });
                return Some((true, cx));
            }
            None
        },
    );
    for (asserted, cx) in results.into_iter().flatten() {
        rep.cases_checked += asserted as u64;
        rep.failures.extend(cx);
    }
    Ok(rep)
}

// L3.4 -----------------------------------------------------------------------

pub(super) fn three_sets(scope: &Scope) -> Result<LemmaReport> {
    let max_order = scope.max_order.unwrap_or(20);
    let groups = groups_up_to(max_order);
    let mut rep = report(
        LemmaId::L3_4,
        ScopeRecord {
            groups: specs(&groups),
            max_order: Some(max_order),
            samples: None,
            seed: scope.seed,
            mode: "exhaustive".into(),
        },
    );
    let results = par_map(scope.jobs, &groups, |group| {
        let nz: Vec<Element> = group.nonzero_elements().collect();
        let mut checked = 0u64;
        let mut failures = Vec::new();
        for (i, &a) in nz.iter().enumerate() {
            for (j, &b) in nz.iter().enumerate().skip(i + 1) {
                if group.add(a, b).is_zero() {
                    continue;
                }
                for &c in &nz[j + 1..] {
                    if group.add(a, c).is_zero() || group.add(b, c).is_zero() {
                        continue;
                    }
                    checked += 1;
                    let has_two = [a, b, c].iter().any(|&x| group.order_of(x) == 2);
                    let set = Sequence::from_elements([a, b, c]);
                    if !has_two && sums(group, &set).with_zero.len() < 7 {
                        failures.push(
                            Counterexample::new(LemmaId::L3_4, group, "|Σ₀(A)| < 7")
                                .with_seq("A", group, &set),
                        );
                    }
                }
            }
        }
        (checked, failures)
    });
    for (checked, failures) in results {
        rep.cases_checked += checked;
        rep.failures.extend(failures);
    }
    Ok(rep)
}

// replay -----------------------------------------------------------------------

pub(super) fn replay(cx: &Counterexample) -> Result<bool> {
    let nonzero_terms = |s: &Sequence| s.multiplicity(Element::ZERO) == 0;
    Ok(match cx.lemma {
        LemmaId::L2_1 => {
            let mut sets = Vec::new();
            for (name, _) in cx.sequences.iter().filter(|(k, _)| k.starts_with('A')) {
                let (g, s) = cx.sequence(name)?;
                sets.push((g.clone(), seq_set(&g, &s)));
            }
            let Some((group, _)) = sets.first().cloned() else {
                return Ok(false);
            };
            let sets: Vec<ElementSet> = sets.into_iter().map(|(_, s)| s).collect();
            !kneser_check(&group, &sets)?.holds
        }
        LemmaId::L2_2 => {
            return Err(Error::PreconditionViolated(
                "lower-bound failures abort the run and have no counterexample".into(),
            ))
        }
        LemmaId::L2_3 => {
            let (group, s) = cx.sequence("S")?;
            let (_, t) = cx.sequence("T")?;
            let thr = stabilizer_threshold(&group, &SearchConfig::default())?;
            RegularityChecker::new(&group)?.is_regular(&s)
                && s.len() >= thr
                && !t.is_empty()
                && t.divides(&s)
                && !sums(&group, &s).nonempty().is_full()
                && !stabilizer_conclusion_holds(&group, &t)?
        }
        LemmaId::L2_4Remark => {
            let (group, s) = cx.sequence("S")?;
            let r = sums(&group, &s);
            s.is_set()
                && nonzero_terms(&s)
                && !s.is_empty()
                && !r.zero_attained
                && r.nonempty().len() < f_required(s.len())
        }
        LemmaId::L3_1 => {
            let (group, a) = cx.sequence("A")?;
            let (_, b) = cx.sequence("B")?;
            let p = cx.param("p")? as u32;
            let cap = cx.param("cap")? as usize;
            let (a, b) = (seq_set(&group, &a), seq_set(&group, &b));
            !a.contains(Element::ZERO) && b.is_subset(&a) && !block_ok(&group, &b, p, cap)
        }
        LemmaId::L3_2 => {
            let (group, t) = cx.sequence("T")?;
            let p = group.smallest_prime() as usize;
            let h = group.span(&t.support()).order;
            let cond = t.len() < p || (t.len() < 2 * p && h >= 2 * p);
            !t.is_empty()
                && nonzero_terms(&t)
                && cond
                && sums(&group, &t).with_zero.len() < t.len() + 1
        }
        LemmaId::C3_3 => {
            let (group, t) = cx.sequence("T")?;
            let (_, s) = cx.sequence("S")?;
            let k = group.span(&s.support());
            let lhs = sums(&group, &t.concat(&s)).with_zero.len();
            let rhs = (t.len() + 1) * sums(&group, &s).with_zero.len();
            t.terms().all(|g| !k.contains(g)) && coset_conditions(&group, &t, &s) && lhs < rhs
        }
        LemmaId::L3_4 => {
            let (group, a) = cx.sequence("A")?;
            let set = seq_set(&group, &a);
            a.is_set()
                && a.len() == 3
                && !set.contains(Element::ZERO)
                && is_two_zero_sum_free(&group, &set)?
                && a.terms().all(|x| group.order_of(x) != 2)
                && sums(&group, &a).with_zero.len() < 7
        }
    })
}
