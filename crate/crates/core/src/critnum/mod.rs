//! The critical number `cr(G)`: the least `t` such that every subset of
//! `G \ {0}` with at least `t` elements is an additive basis.
//!
//! Four routes produce a [`CrCertificate`]:
//!
//! * [`cr_exhaustive`] decides it exactly by enumeration;
//! * [`cr_formula`] predicts it from group structure when a closed form applies;
//! * [`witness_lower_bound`] builds an explicit non-basis of size `n/p + p - 3`;
//! * [`cr_sampled_upper`] gathers seeded random evidence for `cr <= t`.
//!
//! [`resolving_sequence`] builds the greedy orderings used to bound `|Σ(X)|`.

mod exhaustive;
mod formula;
mod resolving;
mod sampled;
pub mod search;
mod witness;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupError, GroupTable};
use crate::set::ElementSet;
use crate::sumset::{sigma, SumsetError};

pub use exhaustive::{cr_exhaustive, ExhaustiveOptions, DEFAULT_BUDGET};
pub use formula::{cr_formula, FormulaFacts};
pub use resolving::{resolving_sequence, ResolvingSequence};
pub use sampled::cr_sampled_upper;
pub use search::{find_non_basis, find_non_basis_in, SearchOutcome};
pub use witness::{coset_image_misses, witness_lower_bound, witness_lower_bound_all};

#[derive(Debug, Error)]
pub enum CritError {
    #[error(transparent)]
    Sumset(#[from] SumsetError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("subset budget of {budget} exhausted; bounds {lower}..={upper}")]
    BudgetExhausted {
        budget: u64,
        lower: usize,
        upper: usize,
        partial: Box<CrCertificate>,
    },
    #[error("construction invalid for this group/coset: {0}")]
    ConstructionInvalid(String),
    #[error("{0}")]
    Precondition(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Formula,
    WitnessLower,
    SampledUpper,
}

/// Which closed-form result a prediction comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremTag {
    /// Nilpotent, `p >= 149`, `n >= 120 p^2`.
    #[serde(rename = "T1.1i")]
    T1_1i,
    /// Index-`p` subgroup, other primes `> 6p`, `p >= 149`, `n >= 120 p^2`.
    #[serde(rename = "T1.1ii")]
    T1_1ii,
    /// Non-abelian of order `pq >= 10`.
    #[serde(rename = "T1.1iii")]
    T1_1iii,
    /// Nilpotent of odd order with `n/p` composite.
    #[serde(rename = "T1.2")]
    T1_2,
    /// Non-abelian of order 6 with an index-2 subgroup.
    #[serde(rename = "T1.3i")]
    T1_3i,
    /// Non-abelian of even order `n != 6` with an index-2 subgroup.
    #[serde(rename = "T1.3ii")]
    T1_3ii,
    /// Order 27.
    #[serde(rename = "L2.6")]
    L2_6,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::T1_1i => "T1.1i",
            TheoremTag::T1_1ii => "T1.1ii",
            TheoremTag::T1_1iii => "T1.1iii",
            TheoremTag::T1_2 => "T1.2",
            TheoremTag::T1_3i => "T1.3i",
            TheoremTag::T1_3ii => "T1.3ii",
            TheoremTag::L2_6 => "L2.6",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a critical-number computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrCertificate {
    pub group_name: String,
    pub order: usize,
    pub method: Method,
    pub value: Option<usize>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub theorem_tag: Option<TheoremTag>,
    /// A non-basis of size `lower_bound - 1`.
    pub witness: Option<ElementSet>,
    pub subsets_checked: u64,
    pub elapsed_ms: u64,
    /// Sampled runs only: how many drawn subsets were not bases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_bases_found: Option<u64>,
}

impl CrCertificate {
    pub(crate) fn new(g: &GroupTable, method: Method) -> Self {
        CrCertificate {
            group_name: g.name().to_string(),
            order: g.order(),
            method,
            value: None,
            lower_bound: 1,
            upper_bound: g.order(),
            theorem_tag: None,
            witness: None,
            subsets_checked: 0,
            elapsed_ms: 0,
            non_bases_found: None,
        }
    }

    /// Re-checks the certificate's invariants against `g`, recomputing the
    /// witness closure from scratch.
    pub fn check(&self, g: &GroupTable) -> Result<(), String> {
        if self.order != g.order() {
            return Err(format!("order {} does not match group order {}", self.order, g.order()));
        }
        if self.lower_bound > self.upper_bound {
            return Err(format!(
                "lower bound {} exceeds upper bound {}",
                self.lower_bound, self.upper_bound
            ));
        }
        if let Some(v) = self.value {
            if self.lower_bound != v || self.upper_bound != v {
                return Err(format!(
                    "value {v} but bounds {}..={}",
                    self.lower_bound, self.upper_bound
                ));
            }
        }
        if let Some(w) = self.witness {
            if w.contains(0) {
                return Err("witness contains the identity".into());
            }
            if w.len() + 1 != self.lower_bound {
                return Err(format!(
                    "witness has {} elements, lower bound is {}",
                    w.len(),
                    self.lower_bound
                ));
            }
            if w.upper_bound() > g.order() {
                return Err("witness element out of range".into());
            }
            let misses = match sigma(g, w, false) {
                Ok(c) => c.full != g.full_set(),
                Err(SumsetError::Capacity { .. }) => coset_image_misses(g, w),
                Err(e) => return Err(e.to_string()),
            };
            if !misses {
                return Err("witness is an additive basis".into());
            }
        }
        Ok(())
    }
}
