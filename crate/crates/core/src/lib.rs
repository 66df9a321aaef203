//! Zero-sum computations over finite abelian groups.
//!
//! Groups are given by invariant factors `n₁ | n₂ | … | n_r` and their
//! elements by a dense index (see [`group`]). On top of that sit sequences and
//! regularity ([`sequence`]), subsequence sums and sumsets ([`sumset`]), the
//! invariants `D(G)`, `m(G)`, `f(G,k)`, `c₀(G)` ([`invariants`]), lemma
//! checks and constructions ([`lab`]), witness certificates
//! ([`certificate`]) and the command implementations behind the `zsf`
//! binary ([`reports`]).
//!
//! ```
//! use zsf::{Group, Sequence, invariants::{c0, SearchConfig}};
//!
//! let g: Group = "3x3".parse().unwrap();
//! let r = c0(&g, &SearchConfig::default()).unwrap();
//! assert_eq!(r.value.finite(), Some(5));
//! let (_, w) = Sequence::parse(&r.witness.unwrap().payload.sequence).unwrap();
//! assert_eq!(w.len(), 4);
//! ```

pub mod certificate;
pub mod error;
pub mod group;
pub mod invariants;
pub mod lab;
pub mod reports;
pub mod sequence;
pub mod set;
pub mod sumset;

pub use certificate::{Certificate, Verdict};
pub use error::{Error, Result};
pub use group::{Element, Group, Subgroup};
pub use sequence::Sequence;
pub use set::ElementSet;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/sums.md")]
    mod sums {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/lab.md")]
    mod lab {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
