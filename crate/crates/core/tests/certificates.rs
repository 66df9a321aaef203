mod common;

use common::*;
use proptest::prelude::*;
use zsf::certificate::{Claim, SCHEMA_VERSION};
use zsf::invariants::{c0, davenport, f_g_k, Method, SearchConfig};
use zsf::{Certificate, Element, Error, Sequence};

fn witnesses() -> Vec<Certificate> {
    let cfg = SearchConfig::default();
    let mut out = Vec::new();
    for spec in ["6", "2x2", "3x3", "2x4", "2x2x2", "10"] {
        let grp = g(spec);
        out.push(c0(&grp, &cfg).unwrap().witness.unwrap());
        out.push(
            davenport(&grp, Method::Exhaustive, &cfg)
                .unwrap()
                .witness
                .unwrap(),
        );
        if let Some(w) = f_g_k(&grp, 2, &cfg).unwrap().witness {
            out.push(w);
        }
    }
    out
}

#[test]
fn produced_certificates_round_trip() {
    for cert in witnesses() {
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify().is_valid(), "{}", cert.payload.sequence);
        assert_eq!(back.schema_version, SCHEMA_VERSION);
    }
}

#[test]
fn checksum_detects_edits() {
    for mut cert in witnesses() {
        let before = cert.payload.sequence.clone();
        cert.payload.sequence.push_str(",(1)^1");
        assert_ne!(before, cert.payload.sequence);
        assert!(!cert.verify().is_valid());
    }
}

#[test]
fn unknown_schema_is_rejected() {
    let cert = witnesses().remove(0);
    let text = cert
        .to_json()
        .replace("\"schema_version\": 1", "\"schema_version\": 2");
    assert!(matches!(
        Certificate::from_json(&text),
        Err(Error::SchemaVersion(2))
    ));
    let cut = &cert.to_json()[..40];
    assert!(Certificate::from_json(cut).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Swap one term and re-sign; the verdict must then agree with a
    /// recheck of the claim by brute force.
    #[test]
    fn verdict_tracks_claim_after_resigning(which in 0usize..18, pos in any::<proptest::sample::Index>(), to in 1u32..64) {
        let certs = witnesses();
        let mut cert = certs[which % certs.len()].clone();
        let (grp, s) = Sequence::parse(&cert.payload.sequence).unwrap();
        let mut terms: Vec<Element> = s.terms().collect();
        let i = pos.index(terms.len());
        terms[i] = Element::new(to % grp.order() as u32);
        let edited = seq(&terms);
        cert.payload.sequence = edited.to_text(&grp);
        cert.checksum = cert.compute_checksum();
        let sigma = brute_sigma(&grp, &terms);
        let expected = match &cert.payload.claim {
            Claim::RegularNonBasis { length, missing } => {
                let all: Vec<u32> = (0..grp.order() as u32).filter(|x| !sigma.contains(x)).collect();
                *length == terms.len()
                    && brute_regular(&grp, &brute_subgroups(&grp), &terms)
                    && &all == missing
            }
            Claim::ZeroSumFree { length } => {
                *length == terms.len() && !sigma.contains(&0) && !terms.iter().any(|t| t.is_zero())
            }
            Claim::ZeroSumFreeSet { k, sumset_size } => {
                edited.is_set()
                    && *k == terms.len()
                    && !sigma.contains(&0)
                    && *sumset_size == sigma.len()
            }
            Claim::LemmaViolation { .. } => unreachable!(),
        };
        prop_assert_eq!(cert.verify().is_valid(), expected, "{}", cert.payload.sequence);
    }
}

#[test]
fn guide_sample_certificate_verifies() {
    let md = include_str!("../../../book/src/certificates.md");
    let start = md.find("```json\n").unwrap() + "```json\n".len();
    let end = start + md[start..].find("```").unwrap();
    let cert = Certificate::from_json(&md[start..end]).unwrap();
    assert!(cert.verify().is_valid());
    let fresh = c0(&g("2x2"), &SearchConfig::default())
        .unwrap()
        .witness
        .unwrap();
    assert_eq!(fresh, cert);
}
