//! Desk-scale verification of the preliminary lemmas and inequalities.
//!
//! Each verifier walks a family of cases, either all of them or a seeded
//! sample, and sorts every case into pass, skip (hypothesis not met) or
//! failure. Failures carry the offending inputs as a [`Counterexample`] that
//! [`replay`] re-evaluates through the same check function.

mod basic;
mod critical;
mod odd;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::critnum::CritError;
use crate::group::{GroupError, GroupTable};
use crate::set::ElementSet;
use crate::sumset::SumsetError;

pub use basic::{
    verify_ineq_2_3, verify_l2_1, verify_l2_3, verify_lambda_complement, verify_lambda_negation,
};
pub use critical::{ORDER_27, T1_3_GROUPS, verify_cd_fold, verify_l2_2, verify_l2_6, verify_l2_6_group, verify_t1_3_small};
pub use odd::{verify_ineq_2_4, verify_l2_4, verify_l2_5, verify_resolving};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Sumset(#[from] SumsetError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Crit(#[from] CritError),
    #[error("{0}")]
    Precondition(String),
    #[error("malformed counterexample: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    #[serde(rename = "L2.1")]
    L2_1,
    #[serde(rename = "L2.2")]
    L2_2,
    #[serde(rename = "L2.3")]
    L2_3,
    #[serde(rename = "L2.4")]
    L2_4,
    #[serde(rename = "L2.5i")]
    L2_5i,
    #[serde(rename = "L2.5ii")]
    L2_5ii,
    #[serde(rename = "L2.5iii")]
    L2_5iii,
    #[serde(rename = "L2.5iv")]
    L2_5iv,
    #[serde(rename = "L2.5v")]
    L2_5v,
    #[serde(rename = "L2.6")]
    L2_6,
    /// `λ_B(x) = λ_B(-x)`
    #[serde(rename = "EQ2.1")]
    Eq2_1,
    /// `λ_B(x) = λ_{G \ B}(x)`
    #[serde(rename = "EQ2.2")]
    Eq2_2,
    #[serde(rename = "INEQ2.3")]
    Ineq2_3,
    #[serde(rename = "INEQ2.4")]
    Ineq2_4,
    /// Resolving sequences: the defining max property, the critical index
    /// and the chain inequality.
    #[serde(rename = "RSEQ")]
    Rseq,
    #[serde(rename = "CDFOLD")]
    CdFold,
    #[serde(rename = "T1.3small")]
    T1_3Small,
}

impl LemmaId {
    pub const ALL: [LemmaId; 17] = [
        LemmaId::L2_1,
        LemmaId::L2_2,
        LemmaId::L2_3,
        LemmaId::L2_4,
        LemmaId::L2_5i,
        LemmaId::L2_5ii,
        LemmaId::L2_5iii,
        LemmaId::L2_5iv,
        LemmaId::L2_5v,
        LemmaId::L2_6,
        LemmaId::Eq2_1,
        LemmaId::Eq2_2,
        LemmaId::Ineq2_3,
        LemmaId::Ineq2_4,
        LemmaId::Rseq,
        LemmaId::CdFold,
        LemmaId::T1_3Small,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::L2_1 => "L2.1",
            LemmaId::L2_2 => "L2.2",
            LemmaId::L2_3 => "L2.3",
            LemmaId::L2_4 => "L2.4",
            LemmaId::L2_5i => "L2.5i",
            LemmaId::L2_5ii => "L2.5ii",
            LemmaId::L2_5iii => "L2.5iii",
            LemmaId::L2_5iv => "L2.5iv",
            LemmaId::L2_5v => "L2.5v",
            LemmaId::L2_6 => "L2.6",
            LemmaId::Eq2_1 => "EQ2.1",
            LemmaId::Eq2_2 => "EQ2.2",
            LemmaId::Ineq2_3 => "INEQ2.3",
            LemmaId::Ineq2_4 => "INEQ2.4",
            LemmaId::Rseq => "RSEQ",
            LemmaId::CdFold => "CDFOLD",
            LemmaId::T1_3Small => "T1.3small",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<&str> = LemmaId::ALL.iter().map(|id| id.as_str()).collect();
                format!("unknown lemma id {s:?}; expected one of {}", known.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" => Ok(Mode::Sampled),
            _ => Err(format!("unknown mode {s:?}; expected exhaustive or sampled")),
        }
    }
}

/// The inputs of one violated check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Which check failed, e.g. `L2.4` or `RSEQ.chain`.
    pub check: String,
    /// Set for reports that span several groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub sets: BTreeMap<String, Vec<usize>>,
    pub values: BTreeMap<String, i64>,
}

impl Counterexample {
    pub(crate) fn new(check: &str) -> Self {
        Counterexample {
            check: check.to_string(),
            group: None,
            sets: BTreeMap::new(),
            values: BTreeMap::new(),
        }
    }

    pub(crate) fn set(mut self, key: &str, s: ElementSet) -> Self {
        self.sets.insert(key.to_string(), s.to_vec());
        self
    }

    pub(crate) fn list(mut self, key: &str, v: &[usize]) -> Self {
        self.sets.insert(key.to_string(), v.to_vec());
        self
    }

    pub(crate) fn value(mut self, key: &str, v: impl TryInto<i64>) -> Self {
        self.values.insert(key.to_string(), v.try_into().unwrap_or(i64::MAX));
        self
    }

    pub(crate) fn get_set(&self, key: &str, n: usize) -> Result<ElementSet, LabError> {
        let v = self
            .sets
            .get(key)
            .ok_or_else(|| LabError::Malformed(format!("missing set {key}")))?;
        if let Some(&bad) = v.iter().find(|&&x| x >= n) {
            return Err(LabError::Malformed(format!("element {bad} of {key} out of range")));
        }
        Ok(ElementSet::from_indices(v.iter().copied()))
    }

    pub(crate) fn get_list(&self, key: &str) -> Result<&[usize], LabError> {
        self.sets
            .get(key)
            .map(Vec::as_slice)
            .ok_or_else(|| LabError::Malformed(format!("missing list {key}")))
    }

    pub(crate) fn get_element(&self, key: &str, n: usize) -> Result<usize, LabError> {
        let v = *self
            .values
            .get(key)
            .ok_or_else(|| LabError::Malformed(format!("missing value {key}")))?;
        usize::try_from(v)
            .ok()
            .filter(|&x| x < n)
            .ok_or_else(|| LabError::Malformed(format!("value {key} = {v} is not an element")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma_id: LemmaId,
    pub group_name: String,
    pub mode: Mode,
    /// Cases that met the hypotheses and were checked.
    pub cases_checked: u64,
    /// Cases drawn or enumerated whose hypotheses did not hold.
    pub cases_skipped: u64,
    pub failures: Vec<Counterexample>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub jobs: usize,
    /// False when a budget stopped the run before every case was seen.
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// `None` picks exhaustive when the family is small enough.
    pub mode: Option<Mode>,
    pub seed: u64,
    pub trials: u64,
    /// Subset budget for the critical-number based checks.
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: None,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            budget: crate::critnum::DEFAULT_BUDGET,
        }
    }
}

/// Runs one verifier. Verifiers that need a group fail without one; the
/// others fall back to their standard groups.
pub fn verify(
    id: LemmaId,
    group: Option<&GroupTable>,
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>, LabError> {
    let need = || {
        group.ok_or_else(|| LabError::Precondition(format!("{id} needs a group")))
    };
    Ok(match id {
        LemmaId::L2_1 => vec![verify_l2_1(need()?, opts)?],
        LemmaId::L2_3 => vec![verify_l2_3(need()?, opts)?],
        LemmaId::Eq2_1 => vec![verify_lambda_negation(need()?, opts)?],
        LemmaId::Eq2_2 => vec![verify_lambda_complement(need()?, opts)?],
        LemmaId::Ineq2_3 => vec![verify_ineq_2_3(need()?, opts)?],
        LemmaId::L2_4 => vec![verify_l2_4(need()?, opts)?],
        LemmaId::Ineq2_4 => vec![verify_ineq_2_4(need()?, opts)?],
        LemmaId::Rseq => vec![verify_resolving(need()?, opts)?],
        LemmaId::L2_2 => match group {
            Some(g) => vec![verify_l2_2(g)?],
            None => vec![verify_l2_2(&standard("Z15"))?, verify_l2_2(&standard("Z21"))?],
        },
        LemmaId::L2_5i | LemmaId::L2_5ii | LemmaId::L2_5iii | LemmaId::L2_5iv | LemmaId::L2_5v => {
            let groups = match group {
                Some(g) => vec![g.clone()],
                None => vec![standard("Z9"), standard("Z3xZ3")],
            };
            let mut out = Vec::new();
            for g in &groups {
                out.extend(verify_l2_5(g)?.into_iter().filter(|r| r.lemma_id == id));
            }
            out
        }
        LemmaId::L2_6 => match group {
            Some(g) => vec![verify_l2_6_group(g, opts.budget)?],
            None => verify_l2_6(opts.budget)?,
        },
        LemmaId::CdFold => match group {
            Some(g) => {
                let q = g.order();
                if !crate::arith::is_prime(q) {
                    return Err(LabError::Precondition(format!(
                        "CDFOLD runs on Z_q with q prime; {} is not of that form",
                        g.name()
                    )));
                }
                vec![verify_cd_fold(&[q])?]
            }
            None => vec![verify_cd_fold(&[2, 3, 5, 7])?],
        },
        LemmaId::T1_3Small => vec![verify_t1_3_small(opts.budget)?],
    })
}

/// Re-evaluates a recorded failure on `g` (for multi-group reports, the
/// group named in the counterexample). Returns true when the violation
/// reproduces.
pub fn replay(g: &GroupTable, cx: &Counterexample) -> Result<bool, LabError> {
    let family = cx.check.split('.').take(2).collect::<Vec<_>>().join(".");
    let verdict = match family.as_str() {
        "L2.1" => basic::replay_l2_1(g, cx)?,
        "L2.3" => basic::replay_l2_3(g, cx)?,
        "EQ2.1" | "EQ2.2" => basic::replay_lambda(g, cx)?,
        "INEQ2.3" => basic::replay_ineq_2_3(g, cx)?,
        "L2.4" => odd::replay_l2_4(g, cx)?,
        "L2.5i" | "L2.5ii" | "L2.5iii" | "L2.5iv" | "L2.5v" => odd::replay_l2_5(g, cx)?,
        "INEQ2.4" => odd::replay_ineq_2_4(g, cx)?,
        "RSEQ.max" | "RSEQ.chain" | "RSEQ.critical" | "RSEQ.sizes" => odd::replay_resolving(g, cx)?,
        "L2.2" | "L2.6" => critical::replay_basis(g, cx)?,
        "T1.3" => critical::replay_t1_3(g, cx)?,
        "CDFOLD" => critical::replay_cd_fold(g, cx)?,
        _ => return Err(LabError::Malformed(format!("unknown check {}", cx.check))),
    };
    Ok(matches!(verdict, Verdict::Fail(_)))
}

pub(crate) enum Verdict {
    Pass,
    Skip,
    Fail(Box<Counterexample>),
}

impl Verdict {
    pub(crate) fn fail(cx: Counterexample) -> Self {
        Verdict::Fail(Box::new(cx))
    }

    pub(crate) fn require(ok: bool, cx: impl FnOnce() -> Counterexample) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::fail(cx())
        }
    }
}

#[derive(Default)]
pub(crate) struct Tally {
    pub checked: u64,
    pub skipped: u64,
    pub failures: Vec<Counterexample>,
}

impl Tally {
    pub(crate) fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.checked += 1,
            Verdict::Skip => self.skipped += 1,
            Verdict::Fail(cx) => {
                self.checked += 1;
                self.failures.push(*cx);
            }
        }
    }

    pub(crate) fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
        self
    }

    /// Evaluates `cases` in parallel and tallies them in input order.
    pub(crate) fn over<C, F>(cases: &[C], check: F) -> Result<Tally, LabError>
    where
        C: Sync,
        F: Fn(&C) -> Result<Verdict, LabError> + Sync,
    {
        let verdicts: Vec<Verdict> = cases.par_iter().map(&check).collect::<Result<_, _>>()?;
        let mut t = Tally::default();
        for v in verdicts {
            t.add(v);
        }
        Ok(t)
    }

    /// Runs `chunk` for each index in `0..count` in parallel, merging in
    /// index order.
    pub(crate) fn chunks<F>(count: u64, chunk: F) -> Result<Tally, LabError>
    where
        F: Fn(u64) -> Result<Tally, LabError> + Sync,
    {
        let parts: Vec<Tally> = (0..count).into_par_iter().map(&chunk).collect::<Result<_, _>>()?;
        Ok(parts.into_iter().fold(Tally::default(), Tally::merge))
    }

    pub(crate) fn report(self, id: LemmaId, group_name: &str, mode: Mode, start: Instant) -> VerificationReport {
        VerificationReport {
            lemma_id: id,
            group_name: group_name.to_string(),
            mode,
            cases_checked: self.checked,
            cases_skipped: self.skipped,
            failures: self.failures,
            elapsed_ms: start.elapsed().as_millis() as u64,
            seed: None,
            jobs: rayon::current_num_threads(),
            complete: true,
            detail: None,
        }
    }
}

pub(crate) fn standard(name: &str) -> GroupTable {
    let d: crate::group::Descriptor = name.parse().expect("standard group names parse");
    crate::group::make_group(&d).expect("standard groups are valid")
}

/// Picks the mode, refusing exhaustive runs past `limit`.
pub(crate) fn choose_mode(id: LemmaId, g: &GroupTable, requested: Option<Mode>, limit: usize) -> Result<Mode, LabError> {
    let n = g.order();
    match requested {
        Some(Mode::Exhaustive) if n > limit => Err(LabError::Precondition(format!(
            "{id}: exhaustive mode is limited to groups of order <= {limit}, {} has order {n}",
            g.name()
        ))),
        Some(m) => Ok(m),
        None if n <= limit => Ok(Mode::Exhaustive),
        None => Ok(Mode::Sampled),
    }
}

pub(crate) fn random_subset(rng: &mut ChaCha8Rng, pool: &[usize], k: usize) -> ElementSet {
    sample(rng, pool.len(), k).iter().map(|i| pool[i]).collect()
}

/// One representative `x` of each pair `{x, -x}` with `x != -x`.
pub(crate) fn inverse_pairs(g: &GroupTable) -> Vec<usize> {
    (1..g.order()).filter(|&x| x < g.inv(x)).collect()
}

/// A random `S` with `S ∩ -S = ∅` and `|S| = k`, built from `k` distinct
/// inverse pairs with random signs.
pub(crate) fn random_antisymmetric(rng: &mut ChaCha8Rng, g: &GroupTable, reps: &[usize], k: usize) -> ElementSet {
    sample(rng, reps.len(), k)
        .iter()
        .map(|i| if rng.gen::<bool>() { reps[i] } else { g.inv(reps[i]) })
        .collect()
}

pub(crate) fn is_antisymmetric(g: &GroupTable, s: ElementSet) -> bool {
    s.is_disjoint(g.negate(s))
}
