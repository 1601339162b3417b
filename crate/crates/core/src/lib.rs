//! Additive combinatorics over finite, possibly non-abelian groups.
//!
//! Groups are Cayley tables ([`group::GroupTable`]) with the identity at
//! index 0; subsets are bit-sets ([`set::ElementSet`]). On top of that:
//!
//! * [`sumset`]: subset-sum closures `Σ(S)`, `Σ_r(S)`, sumsets and `λ_B(x)`.
//! * [`critnum`]: the critical number `cr(G)` by exhaustive search, by
//!   closed-form prediction, by witness lower bounds and by sampling.
//! * [`lemma_lab`]: exhaustive and sampled verifiers with replayable
//!   counterexamples.
//! * [`catalog`] and [`cache`]: the built-in group catalog and the JSON-lines
//!   result store used by the command-line front end.

pub mod arith;
pub mod cache;
pub mod catalog;
pub mod critnum;
pub mod group;
pub mod lemma_lab;
pub mod set;
pub mod sumset;

pub use group::{GroupError, GroupTable};
pub use set::ElementSet;
