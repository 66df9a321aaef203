//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zsf::group::groups_up_to;
use zsf::invariants::{c0, davenport, f_floor_scan, m_of, InvariantValue, Method, SearchConfig};
use zsf::lab::{
    find_lower_bound_witness, greedy_large_sumset_subset, verify_lemma, LemmaId, Scope,
};
use zsf::reports::{cmd_check_certificate, EXIT_OK};
use zsf::sumset::subsequence_sums;
use zsf::{Element, ElementSet, Group};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_c0(spec: &str, cfg: &SearchConfig) -> Result<u64, String> {
    let r = c0(&g(spec), cfg).map_err(|e| format!("{spec}: {e}"))?;
    if r.is_partial() {
        return Err(format!("{spec}: partial result"));
    }
    r.value
        .finite()
        .ok_or_else(|| format!("{spec}: infinite c0"))
}

fn c0_small_values() -> Outcome {
    let cfg = SearchConfig::default();
    let mut cases: Vec<(String, u64)> = (2..=10).map(|n| (n.to_string(), n)).collect();
    cases.extend([("2x2".into(), 3), ("3x3".into(), 5), ("2x4".into(), 5)]);
    for (spec, want) in &cases {
        let got = exact_c0(spec, &cfg)?;
        ensure(got == *want, || {
            format!("c0({spec}) = {got}, expected {want}")
        })?;
        let m = m_of(&g(spec));
        ensure(got == m, || format!("c0({spec}) = {got} but m = {m}"))?;
    }
    Ok(format!("{} groups, c0 = m on all", cases.len()))
}

fn c0_3x6() -> Outcome {
    let got = exact_c0("3x6", &SearchConfig::default())?;
    ensure(got == 9 && m_of(&g("3x6")) == 9, || {
        format!("c0(3x6) = {got}, expected 9")
    })?;
    Ok("c0(3x6) = 9 = m(3x6)".into())
}

fn davenport_rank2() -> Outcome {
    let cfg = SearchConfig::default();
    let groups: Vec<Group> = groups_up_to(36)
        .into_iter()
        .filter(|g| g.rank() <= 2)
        .collect();
    for grp in &groups {
        let f = grp.invariant_factors();
        let want = f.iter().map(|&n| n as u64 - 1).sum::<u64>() + 1;
        let r = davenport(grp, Method::Exhaustive, &cfg).map_err(|e| format!("{grp}: {e}"))?;
        ensure(
            !r.is_partial() && r.value == InvariantValue::Finite(want),
            || format!("D({grp}) = {} by search, formula gives {want}", r.value),
        )?;
    }
    Ok(format!(
        "{} groups of rank <= 2 and order <= 36",
        groups.len()
    ))
}

fn f_floors() -> Outcome {
    let cfg = SearchConfig::default();
    let mut mins = Vec::new();
    for k in 1..=8 {
        let r = f_floor_scan(k, 24, &cfg).map_err(|e| format!("k={k}: {e}"))?;
        ensure(r.passed(), || {
            format!("k={k}: {} groups below {}", r.violations.len(), r.required)
        })?;
        mins.push(format!("k{k}:{}", r.minimum));
    }
    Ok(format!("minima over order <= 24: {}", mins.join(" ")))
}

fn lemma(id: LemmaId, max_order: u32) -> Outcome {
    let r = verify_lemma(
        id,
        &Scope {
            max_order: Some(max_order),
            ..Scope::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(r.passed(), || {
        format!("{} failures, first: {:?}", r.failures.len(), r.failures[0])
    })?;
    ensure(r.cases_checked > 0, || "no cases checked".into())?;
    Ok(format!("{} cases, 0 failures", r.cases_checked))
}

fn three_sets() -> Outcome {
    let detail = lemma(LemmaId::L3_4, 20)?;
    // independent recount of the failures the lemma rules out
    for grp in groups_up_to(20) {
        let nz: Vec<Element> = grp.nonzero_elements().collect();
        for (i, &a) in nz.iter().enumerate() {
            for (j, &b) in nz.iter().enumerate().skip(i + 1) {
                for &c in &nz[j + 1..] {
                    let set = [a, b, c];
                    let two_zsf = [(a, b), (a, c), (b, c)]
                        .iter()
                        .all(|&(x, y)| !grp.add(x, y).is_zero());
                    let has_two = set.iter().any(|&x| grp.order_of(x) == 2);
                    ensure(
                        !two_zsf || has_two || brute_sigma0(&grp, &set).len() >= 7,
                        || format!("{grp}: {:?}", set.map(|e| e.index())),
                    )?;
                }
            }
        }
    }
    Ok(detail)
}

fn greedy_construction() -> Outcome {
    let detail = lemma(LemmaId::L3_1, 81)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x3_1);
    let mut runs = 0;
    for (spec, size, p) in [("38", 37usize, 2u32), ("81", 73, 3)] {
        let grp = g(spec);
        let mut nz: Vec<Element> = grp.nonzero_elements().collect();
        for _ in 0..20 {
            nz.shuffle(&mut rng);
            let a = ElementSet::from_elements(grp.order(), nz[..size].iter().copied());
            let b = greedy_large_sumset_subset(&grp, &a, p).map_err(|e| e.to_string())?;
            let terms: Vec<Element> = b.iter().collect();
            let s0 = brute_sigma0(&grp, &terms).len();
            ensure(
                b.is_subset(&a)
                    && terms.len() <= 6 * p as usize + 1
                    && brute_zero_sum_free(&grp, &terms)
                    && s0 >= p as usize * terms.len() + 2,
                || format!("{spec}: B = {:?}, |Σ₀(B)| = {s0}", b.to_indices()),
            )?;
            runs += 1;
        }
    }
    Ok(format!(
        "{detail} in the lemma check; {runs} more runs re-verified"
    ))
}

fn dp_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let groups = groups_up_to(24);
    let check = |grp: &Group, terms: &[Element]| -> Result<(), String> {
        let fast: BTreeSet<u32> = subsequence_sums(grp, &seq(terms))
            .to_indices()
            .into_iter()
            .collect();
        ensure(fast == brute_sigma(grp, terms), || {
            format!("{grp}: {}", seq(terms).to_text(grp))
        })
    };
    for _ in 0..1000 {
        let grp = &groups[rng.gen_range(0..groups.len())];
        let len = rng.gen_range(0..=12);
        let terms: Vec<Element> = (0..len)
            .map(|_| Element::new(rng.gen_range(0..grp.order() as u32)))
            .collect();
        check(grp, &terms)?;
    }
    let mut exhaustive = 0u64;
    for grp in groups_up_to(9) {
        let elems: Vec<Element> = grp.elements().collect();
        let caps = vec![6; elems.len()];
        let mut err = None;
        let mut keep = |t: &[Element]| t.len() <= 6;
        for_each_multiset(&elems, &caps, &mut keep, &mut |t| {
            exhaustive += 1;
            if err.is_none() {
                err = check(&grp, t).err();
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(format!("1000 random cases, {exhaustive} exhaustive cases"))
}

fn lower_bound_witnesses() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = SearchConfig::default();
    let mut specs: Vec<String> = (2..=10).map(|n: u32| n.to_string()).collect();
    specs.extend(["2x2", "3x3", "2x4", "3x6"].map(String::from));
    for spec in &specs {
        let grp = g(spec);
        let cert = find_lower_bound_witness(&grp, &cfg).map_err(|e| format!("{spec}: {e}"))?;
        let path = dir.path().join(format!("{spec}.json"));
        std::fs::write(&path, cert.to_json()).map_err(|e| e.to_string())?;
        let out = cmd_check_certificate(&path);
        ensure(out.code == EXIT_OK, || {
            format!("{spec}: {}", out.stdout.trim())
        })?;
        let (_, s) = zsf::Sequence::parse(&cert.payload.sequence).map_err(|e| e.to_string())?;
        ensure(s.len() as u64 + 1 == m_of(&grp), || {
            format!("{spec}: length {}", s.len())
        })?;
    }
    Ok(format!("{} certificates checked", specs.len()))
}

fn determinism() -> Outcome {
    let groups = groups_up_to(12);
    let run = |grp: &Group, jobs, orbit_reduction| {
        let cfg = SearchConfig {
            jobs,
            orbit_reduction,
            ..SearchConfig::default()
        };
        c0(grp, &cfg).map_err(|e| format!("{grp}: {e}"))
    };
    for grp in &groups {
        let base = run(grp, 1, true)?;
        let base_json = serde_json::to_string(&base).unwrap();
        for jobs in [2, 4] {
            let other = serde_json::to_string(&run(grp, jobs, true)?).unwrap();
            ensure(other == base_json, || {
                format!("{grp}: jobs 1 vs {jobs} differ")
            })?;
        }
        // node counts measure the pruning itself, so compare the result proper
        for jobs in [1, 4] {
            let off = run(grp, jobs, false)?;
            let same = off.value == base.value
                && serde_json::to_string(&off.witness).unwrap()
                    == serde_json::to_string(&base.witness).unwrap();
            ensure(same, || {
                format!("{grp}: orbit reduction changes the result")
            })?;
        }
    }
    Ok(format!("{} groups", groups.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "1 c0 exact values",
            Duration::from_secs(120),
            c0_small_values,
        ),
        ("2 c0(C3+C6) = 9", Duration::from_secs(1800), c0_3x6),
        (
            "3 Davenport cross-check",
            Duration::from_secs(600),
            davenport_rank2,
        ),
        ("4 f-bounds", Duration::from_secs(900), f_floors),
        ("5 three-set sumsets, exhaustive", Duration::MAX, three_sets),
        ("6 short sequences, exhaustive", Duration::MAX, || {
            lemma(LemmaId::L3_2, 16)
        }),
        (
            "7 greedy large-sumset subsets",
            Duration::from_secs(300),
            greedy_construction,
        ),
        ("8 oracle equivalence", Duration::MAX, dp_oracle),
        (
            "9 lower-bound witnesses",
            Duration::MAX,
            lower_bound_witnesses,
        ),
        ("10 determinism and pruning", Duration::MAX, determinism),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > limit => Err(format!("{d}, but took {took:.1?} (limit {limit:?})")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] {why} ({took:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
