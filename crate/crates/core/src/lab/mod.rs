//! Executable checks of the lemmas, each producing a [`LemmaReport`].
//!
//! Every failure carries a [`Counterexample`] holding the offending
//! sequences in text form; [`replay_counterexample`] re-evaluates the lemma
//! on them from scratch.

mod construct;
mod lemmas;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::sequence::Sequence;

pub use construct::{
    block_ok, factorize_regular_sequence, find_lower_bound_witness, greedy_large_sumset_subset,
    greedy_large_sumset_subset_with, select_extension_block, ExtensionBlock, ExtensionCase,
    Factorization, GreedyConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    #[serde(rename = "L2.1")]
    L2_1,
    #[serde(rename = "L2.2")]
    L2_2,
    #[serde(rename = "L2.3")]
    L2_3,
    #[serde(rename = "L2.4-remark")]
    L2_4Remark,
    #[serde(rename = "L3.1")]
    L3_1,
    #[serde(rename = "L3.2")]
    L3_2,
    #[serde(rename = "C3.3")]
    C3_3,
    #[serde(rename = "L3.4")]
    L3_4,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::L2_1,
        LemmaId::L2_2,
        LemmaId::L2_3,
        LemmaId::L2_4Remark,
        LemmaId::L3_1,
        LemmaId::L3_2,
        LemmaId::C3_3,
        LemmaId::L3_4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::L2_1 => "L2.1",
            LemmaId::L2_2 => "L2.2",
            LemmaId::L2_3 => "L2.3",
            LemmaId::L2_4Remark => "L2.4-remark",
            LemmaId::L3_1 => "L3.1",
            LemmaId::L3_2 => "L3.2",
            LemmaId::C3_3 => "C3.3",
            LemmaId::L3_4 => "L3.4",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown lemma id {s:?}")))
    }
}

/// What to check. Unset fields fall back to per-lemma defaults.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Scope {
    pub max_order: Option<u32>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub jobs: usize,
}

/// The scope as actually used, recorded in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScopeRecord {
    pub groups: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub seed: u64,
    pub mode: String,
}

/// Sequences (text form) witnessing a violation, plus numeric parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub lemma: LemmaId,
    pub group: Vec<u32>,
    pub sequences: BTreeMap<String, String>,
    #[serde(default)]
    pub params: BTreeMap<String, u64>,
    pub detail: String,
}

impl Counterexample {
    pub(crate) fn new(lemma: LemmaId, group: &Group, detail: impl Into<String>) -> Self {
        Counterexample {
            lemma,
            group: group.invariant_factors().to_vec(),
            sequences: BTreeMap::new(),
            params: BTreeMap::new(),
            detail: detail.into(),
        }
    }

    pub(crate) fn with_seq(mut self, name: &str, group: &Group, s: &Sequence) -> Self {
        self.sequences.insert(name.into(), s.to_text(group));
        self
    }

    pub(crate) fn with_param(mut self, name: &str, v: u64) -> Self {
        self.params.insert(name.into(), v);
        self
    }

    /// The sequence named `name`, parsed and checked against the group.
    pub fn sequence(&self, name: &str) -> Result<(Group, Sequence)> {
        let text = self
            .sequences
            .get(name)
            .ok_or_else(|| Error::Parse(format!("counterexample lacks sequence {name:?}")))?;
        let (g, s) = Sequence::parse(text)?;
        if g.invariant_factors() != self.group.as_slice() {
            return Err(Error::Parse(format!(
                "sequence {name:?} is over another group"
            )));
        }
        Ok((g, s))
    }

    pub fn param(&self, name: &str) -> Result<u64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse(format!("counterexample lacks parameter {name:?}")))
    }
}

/// Equality and serialization ignore `wall_time`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma_id: LemmaId,
    pub scope: ScopeRecord,
    /// Cases on which the lemma's conclusion was actually asserted.
    pub cases_checked: u64,
    /// Cases whose hypotheses held non-trivially, where that distinction
    /// exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_vacuous: Option<u64>,
    pub failures: Vec<Counterexample>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PartialEq for LemmaReport {
    fn eq(&self, o: &Self) -> bool {
        self.lemma_id == o.lemma_id
            && self.scope == o.scope
            && self.cases_checked == o.cases_checked
            && self.non_vacuous == o.non_vacuous
            && self.failures == o.failures
    }
}

impl Eq for LemmaReport {}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs one lemma over its scope.
pub fn verify_lemma(id: LemmaId, scope: &Scope) -> Result<LemmaReport> {
    let start = std::time::Instant::now();
    let mut report = match id {
        LemmaId::L2_1 => lemmas::kneser(scope),
        LemmaId::L2_2 => lemmas::lower_bound(scope),
        LemmaId::L2_3 => lemmas::stabilizer_lemma(scope),
        LemmaId::L2_4Remark => lemmas::f_floor(scope),
        LemmaId::L3_1 => lemmas::greedy(scope),
        LemmaId::L3_2 => lemmas::short_sequences(scope),
        LemmaId::C3_3 => lemmas::coset_corollary(scope),
        LemmaId::L3_4 => lemmas::three_sets(scope),
    }?;
    report.wall_time = start.elapsed();
    Ok(report)
}

/// True when the stored sequences really violate the lemma.
pub fn replay_counterexample(cx: &Counterexample) -> Result<bool> {
    lemmas::replay(cx)
}
