//! Executable discreteness criteria for condensed sets at desk scale.
//!
//! Light profinite sets are modelled as finite towers of finite sets with
//! surjective transition maps ([`tower`]). Their discrete quotients form a
//! finite inf-semilattice ([`quotients`]), locally constant maps factor
//! through finite levels ([`locconst`]), and presheaves on towers can be
//! tested for discreteness by two independent oracles: the counit of the
//! locally-constant adjunction and the colimit condition over discrete
//! quotients ([`presheaf`]). The [`modules`] layer repeats the story for
//! presheaves of modules over finite rings, and [`smallcat`] is a small
//! finite-category engine for the adjunction and initial-functor facts that
//! the rest relies on.
//!
//! Every verdict is relative to a truncation depth: failures come with a
//! witness, passes certify only the enumerated fragment.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod finset;
pub mod locconst;
pub mod modules;
pub mod presheaf;
pub mod quotients;
pub mod smallcat;
pub mod tower;
pub mod unionfind;
pub mod verify;

pub use error::{Error, Result};
pub use finset::{FinMap, FinSet, Order, Partition};
pub use locconst::LocConstMap;
pub use presheaf::{DiscretenessReport, Section, TowerPresheaf, Verdict};
pub use quotients::DiscreteQuotient;
pub use tower::{Tower, TowerMap};
