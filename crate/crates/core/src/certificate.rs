//! Self-contained, re-checkable witness records.
//!
//! A certificate names a group, a sequence in text form and a claimed
//! property. [`Certificate::verify`] re-derives the property from scratch with
//! the library's checkers and never trusts stored sumsets. The checksum is a
//! SHA-256 over the compact JSON of every other field, in declaration order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::lab::{replay_counterexample, Counterexample};
use crate::sequence::{RegularityChecker, Sequence};
use crate::set::ElementSet;
use crate::sumset::{is_zero_sum_free, sums};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    NonBasisWitness,
    ZeroSumFreeMax,
    FAttainer,
    LemmaCounterexample,
}

/// The claimed property, tagged by `property`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum Claim {
    /// The sequence is regular and `G ∖ Σ(S)` is exactly `missing`
    /// (nonempty), so `c₀(G) > |S|`.
    RegularNonBasis { length: usize, missing: Vec<u32> },
    /// The sequence is zero-sum free, so `D(G) > |S|`.
    ZeroSumFree { length: usize },
    /// The sequence is a zero-sum-free set of size `k` with `|Σ(S)| = sumset_size`.
    ZeroSumFreeSet { k: usize, sumset_size: usize },
    /// A genuine violation of a lemma, replayable from the stored sequences.
    LemmaViolation { counterexample: Counterexample },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payload {
    pub sequence: String,
    pub claim: Claim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub kind: CertificateKind,
    pub group: Vec<u32>,
    pub payload: Payload,
    pub checksum: String,
}

#[derive(Serialize)]
struct Unsigned<'a> {
    schema_version: u32,
    kind: CertificateKind,
    group: &'a [u32],
    payload: &'a Payload,
}

/// Result of re-verifying a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl Certificate {
    fn new(kind: CertificateKind, group: &Group, sequence: String, claim: Claim) -> Self {
        let mut c = Certificate {
            schema_version: SCHEMA_VERSION,
            kind,
            group: group.invariant_factors().to_vec(),
            payload: Payload { sequence, claim },
            checksum: String::new(),
        };
        c.checksum = c.compute_checksum();
        c
    }

    pub fn non_basis(group: &Group, seq: &Sequence) -> Self {
        let missing = sums(group, seq).nonempty().complement().to_indices();
        Self::new(
            CertificateKind::NonBasisWitness,
            group,
            seq.to_text(group),
            Claim::RegularNonBasis {
                length: seq.len(),
                missing,
            },
        )
    }

    pub fn zero_sum_free(group: &Group, seq: &Sequence) -> Self {
        Self::new(
            CertificateKind::ZeroSumFreeMax,
            group,
            seq.to_text(group),
            Claim::ZeroSumFree { length: seq.len() },
        )
    }

    pub fn f_attainer(group: &Group, set: &Sequence) -> Self {
        let sumset_size = sums(group, set).nonempty().len();
        Self::new(
            CertificateKind::FAttainer,
            group,
            set.to_text(group),
            Claim::ZeroSumFreeSet {
                k: set.len(),
                sumset_size,
            },
        )
    }

    pub fn lemma_counterexample(group: &Group, primary: &Sequence, cx: Counterexample) -> Self {
        Self::new(
            CertificateKind::LemmaCounterexample,
            group,
            primary.to_text(group),
            Claim::LemmaViolation { counterexample: cx },
        )
    }

    pub fn compute_checksum(&self) -> String {
        let unsigned = Unsigned {
            schema_version: self.schema_version,
            kind: self.kind,
            group: &self.group,
            payload: &self.payload,
        };
        let bytes = serde_json::to_vec(&unsigned).expect("certificate serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Parses a certificate; a foreign schema version is an error, not a
    /// failed verification.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let version = raw
            .get("schema_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parse("certificate has no schema_version".into()))?;
        if version != SCHEMA_VERSION as u64 {
            return Err(Error::SchemaVersion(version as u32));
        }
        Ok(serde_json::from_value(raw)?)
    }

    /// Re-derives the claimed property.
    pub fn verify(&self) -> Verdict {
        match self.verify_inner() {
            Ok(v) => v,
            Err(e) => Verdict::Invalid(e.to_string()),
        }
    }

    fn verify_inner(&self) -> Result<Verdict> {
        use Verdict::Invalid;
        if self.checksum != self.compute_checksum() {
            return Ok(Invalid("checksum mismatch".into()));
        }
        let (group, seq) = Sequence::parse(&self.payload.sequence)?;
        if group.invariant_factors() != self.group.as_slice() {
            return Ok(Invalid(
                "sequence group differs from certificate group".into(),
            ));
        }
        let kind_matches = matches!(
            (self.kind, &self.payload.claim),
            (
                CertificateKind::NonBasisWitness,
                Claim::RegularNonBasis { .. }
            ) | (CertificateKind::ZeroSumFreeMax, Claim::ZeroSumFree { .. })
                | (CertificateKind::FAttainer, Claim::ZeroSumFreeSet { .. })
                | (
                    CertificateKind::LemmaCounterexample,
                    Claim::LemmaViolation { .. }
                )
        );
        if !kind_matches {
            return Ok(Invalid("claim does not match certificate kind".into()));
        }
        Ok(match &self.payload.claim {
            Claim::RegularNonBasis { length, missing } => {
                let sigma = sums(&group, &seq).nonempty();
                let actual = sigma.complement();
                let claimed = ElementSet::from_elements(
                    group.order(),
                    missing
                        .iter()
                        .filter(|&&i| (i as usize) < group.order())
                        .map(|&i| crate::group::Element::new(i)),
                );
                if *length != seq.len() {
                    Invalid("length mismatch".into())
                } else if !RegularityChecker::new(&group)?.is_regular(&seq) {
                    Invalid("sequence is not regular".into())
                } else if actual.is_empty() {
                    Invalid("sequence is an additive basis".into())
                } else if actual.to_indices() != *missing || claimed != actual {
                    Invalid("missing elements differ from recomputation".into())
                } else {
                    Verdict::Valid
                }
            }
            Claim::ZeroSumFree { length } => {
                if *length != seq.len() {
                    Invalid("length mismatch".into())
                } else if !is_zero_sum_free(&group, &seq) {
                    Invalid("sequence has a nonempty zero-sum subsequence".into())
                } else {
                    Verdict::Valid
                }
            }
            Claim::ZeroSumFreeSet { k, sumset_size } => {
                let s = sums(&group, &seq);
                if !seq.is_set() || seq.len() != *k {
                    Invalid("not a set of the stated size".into())
                } else if s.zero_attained {
                    Invalid("set is not zero-sum free".into())
                } else if s.nonempty().len() != *sumset_size {
                    Invalid("sumset size differs from recomputation".into())
                } else {
                    Verdict::Valid
                }
            }
            Claim::LemmaViolation { counterexample } => {
                if counterexample.group != self.group {
                    Invalid("counterexample group differs".into())
                } else if replay_counterexample(counterexample)? {
                    Verdict::Valid
                } else {
                    Invalid("replay does not reproduce a violation".into())
                }
            }
        })
    }
}

/// Named sequences for counterexample payloads, kept sorted for stable
/// serialization.
pub type NamedSequences = BTreeMap<String, String>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Element;

    fn v4() -> Group {
        Group::new(&[2, 2]).unwrap()
    }

    #[test]
    fn non_basis_round_trip() {
        let g = v4();
        let s = Sequence::from_elements([Element::new(1), Element::new(2)]);
        let c = Certificate::non_basis(&g, &s);
        assert_eq!(
            c.payload.claim,
            Claim::RegularNonBasis {
                length: 2,
                missing: vec![0]
            }
        );
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(back.verify().is_valid());
    }

    #[test]
    fn tampering_is_detected() {
        let g = v4();
        let s = Sequence::from_elements([Element::new(1), Element::new(2)]);
        let mut c = Certificate::non_basis(&g, &s);
        c.payload.sequence = "2x2:(0,1)^1,(1,1)^1".into();
        assert!(!c.verify().is_valid());
        // even with a fresh checksum the recheck catches a wrong claim
        c.checksum = c.compute_checksum();
        assert!(c.verify().is_valid(), "(0,1),(1,1) is also a non-basis");
        c.payload.sequence = "2x2:(0,1)^1,(1,0)^1,(1,1)^1".into();
        c.checksum = c.compute_checksum();
        assert!(!c.verify().is_valid());
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let g = v4();
        let c = Certificate::zero_sum_free(&g, &Sequence::from_elements([Element::new(1)]));
        let text = c
            .to_json()
            .replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(matches!(
            Certificate::from_json(&text),
            Err(Error::SchemaVersion(9))
        ));
        assert!(Certificate::from_json("{\"schema_version\": 1,").is_err());
    }

    #[test]
    fn other_kinds_verify() {
        let c5 = Group::new(&[5]).unwrap();
        let zsf = Sequence::repeat(Element::new(1), 4);
        assert!(Certificate::zero_sum_free(&c5, &zsf).verify().is_valid());
        let bad = Sequence::repeat(Element::new(1), 5);
        assert!(!Certificate::zero_sum_free(&c5, &bad).verify().is_valid());
        let set = Sequence::from_elements([Element::new(1), Element::new(2)]);
        let f = Certificate::f_attainer(&c5, &set);
        assert!(f.verify().is_valid());
        assert_eq!(
            f.payload.claim,
            Claim::ZeroSumFreeSet {
                k: 2,
                sumset_size: 3
            }
        );
    }
}
