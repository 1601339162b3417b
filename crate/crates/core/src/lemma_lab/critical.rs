//! Verifiers built on the critical-number machinery, plus the fold used in
//! the nilpotent case.

use std::time::Instant;

use super::{standard, Counterexample, LabError, LemmaId, Mode, Tally, Verdict, VerificationReport};
use crate::arith::{binomial, is_prime, smallest_prime_divisor};
use crate::catalog::a4;
use crate::critnum::{cr_exhaustive, find_non_basis, witness_lower_bound_all, CritError, ExhaustiveOptions, FormulaFacts};
use crate::group::GroupTable;
use crate::set::ElementSet;
use crate::sumset::{fold_cd, sigma};

/// The five groups of order 27.
pub const ORDER_27: [&str; 5] = ["Z27", "Z9xZ3", "Z3xZ3xZ3", "H27", "Z9:Z3(k=4)"];

/// Groups of even order up to 16 with an index-2 subgroup checked against
/// the `n/2` formula (4 for order 6).
pub const T1_3_GROUPS: [&str; 14] = [
    "D3", "D4", "D5", "D6", "D7", "D8", "Dic2", "Dic3", "Dic4", "Z2xD3", "Z2xD4", "Z8:Z2(k=3)", "Z8:Z2(k=5)", "Z4:Z4(k=3)",
];

pub(super) fn replay_basis(g: &GroupTable, cx: &Counterexample) -> Result<Verdict, LabError> {
    let s = cx.get_set("S", g.order())?;
    if s.contains(0) {
        return Ok(Verdict::Skip);
    }
    let full = sigma(g, s, false)?.full;
    Ok(Verdict::require(full == g.full_set(), || cx.clone()))
}

/// Every `S ⊆ G \ {0}` with `|S| = p + q - 1` is a basis of an abelian group
/// of order `pq`.
pub fn verify_l2_2(g: &GroupTable) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    let n = g.order();
    let p = smallest_prime_divisor(n)?;
    let q = n / p;
    if !g.is_abelian() || !is_prime(q) {
        return Err(LabError::Precondition(format!(
            "L2.2 needs an abelian group of order pq, got {} of order {n}",
            g.name()
        )));
    }
    let size = p + q - 1;
    let outcome = find_non_basis(g, size)?;
    let mut t = Tally {
        checked: outcome.checked,
        ..Default::default()
    };
    if let Some(s) = outcome.witness {
        t.failures.push(Counterexample::new("L2.2").set("S", s));
    }
    let mut r = t.report(LemmaId::L2_2, g.name(), Mode::Exhaustive, start);
    r.detail = Some(format!("p = {p}, q = {q}, all subsets of size {size}"));
    Ok(r)
}

/// `cr(G) = 10` for one group of order 27: the explicit witness gives
/// `cr >= 10`, and exhausting the size-10 subsets gives `cr <= 10`.
pub fn verify_l2_6_group(g: &GroupTable, budget: u64) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    if g.order() != 27 {
        return Err(LabError::Precondition(format!("L2.6 needs order 27, {} has order {}", g.name(), g.order())));
    }
    let mut t = Tally::default();
    let w = witness_lower_bound_all(g)?;
    let ws = w.witness.unwrap_or(ElementSet::EMPTY);
    if w.lower_bound < 10 {
        t.failures.push(
            Counterexample::new("L2.6.witness")
                .set("T", ws)
                .value("lower_bound", w.lower_bound),
        );
    }
    let total = binomial(26, 10);
    let mut complete = true;
    if total > budget {
        complete = false;
    } else {
        let outcome = find_non_basis(g, 10)?;
        t.checked = outcome.checked;
        if let Some(s) = outcome.witness {
            t.failures.push(Counterexample::new("L2.6").set("S", s));
        }
    }
    let mut r = t.report(LemmaId::L2_6, g.name(), Mode::Exhaustive, start);
    r.complete = complete;
    r.detail = Some(if complete {
        format!("cr >= {} from non-basis {:?}; all {total} subsets of size 10 checked", w.lower_bound, ws.to_vec())
    } else {
        format!("cr >= {} from non-basis {:?}; {total} subsets exceed the budget {budget}", w.lower_bound, ws.to_vec())
    });
    Ok(r)
}

pub fn verify_l2_6(budget: u64) -> Result<Vec<VerificationReport>, LabError> {
    ORDER_27
        .iter()
        .map(|name| verify_l2_6_group(&standard(name), budget))
        .collect()
}

fn t1_3_value(n: usize) -> usize {
    if n == 6 {
        4
    } else {
        n / 2
    }
}

pub(super) fn replay_t1_3(g: &GroupTable, cx: &Counterexample) -> Result<Verdict, LabError> {
    let cert = cr_exhaustive(g, &ExhaustiveOptions::default())?;
    let expected = t1_3_value(g.order());
    Ok(Verdict::require(cert.value == Some(expected), || cx.clone()))
}

/// Exact `cr(G)` against the even-order formula on [`T1_3_GROUPS`], and the
/// order-12 group without an index-2 subgroup left out by the predicate.
pub fn verify_t1_3_small(budget: u64) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    let opts = ExhaustiveOptions {
        budget,
        ..Default::default()
    };
    let mut t = Tally::default();
    let mut notes = Vec::new();
    let mut complete = true;
    for name in T1_3_GROUPS {
        let g = standard(name);
        let facts = FormulaFacts::of(&g);
        let n = g.order();
        if facts.abelian || !facts.has_index2_subgroup {
            t.failures.push(Counterexample::new("T1.3.predicate").value("order", n));
            t.failures.last_mut().unwrap().group = Some(name.to_string());
            continue;
        }
        let expected = t1_3_value(n);
        match cr_exhaustive(&g, &opts) {
            Ok(cert) => {
                let value = cert.value.unwrap_or(0);
                let mut cx = Counterexample::new("T1.3")
                    .value("order", n)
                    .value("expected", expected)
                    .value("cr", value);
                cx.group = Some(name.to_string());
                t.add(Verdict::require(value == expected, || cx));
                notes.push(format!("{name}: {value}"));
            }
            Err(CritError::BudgetExhausted { lower, upper, .. }) => {
                complete = false;
                notes.push(format!("{name}: budget exhausted, {lower}..={upper}"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let a4 = a4();
    if FormulaFacts::of(&a4).has_index2_subgroup {
        let mut cx = Counterexample::new("T1.3.predicate").value("order", a4.order());
        cx.group = Some(a4.name().to_string());
        t.add(Verdict::fail(cx));
    } else {
        t.skipped += 1;
        notes.push(format!("{}: no index-2 subgroup, predicate correctly excludes", a4.name()));
    }

    let mut r = t.report(LemmaId::T1_3Small, "catalog", Mode::Exhaustive, start);
    r.complete = complete;
    r.detail = Some(notes.join("; "));
    Ok(r)
}

fn check_fold(g: &GroupTable, tuple: &[usize]) -> Verdict {
    if tuple.len() + 1 != g.order() || tuple.iter().any(|&a| a == 0 || a >= g.order()) {
        return Verdict::Skip;
    }
    let covered = fold_cd(g, tuple);
    Verdict::require(covered == g.full_set(), || {
        let mut cx = Counterexample::new("CDFOLD").list("tuple", tuple).value("covered", covered.len());
        cx.group = Some(g.name().to_string());
        cx
    })
}

pub(super) fn replay_cd_fold(g: &GroupTable, cx: &Counterexample) -> Result<Verdict, LabError> {
    Ok(check_fold(g, cx.get_list("tuple")?))
}

// calls `f` on every tuple of length `len` over 1..q, or only on the
// non-decreasing ones when `sorted`
fn for_each_tuple(q: usize, len: usize, sorted: bool, f: &mut impl FnMut(&[usize])) {
    let mut tuple = vec![1; len];
    loop {
        f(&tuple);
        let Some(i) = (0..len).rev().find(|&i| tuple[i] < q - 1) else {
            return;
        };
        tuple[i] += 1;
        let reset = if sorted { tuple[i] } else { 1 };
        for x in &mut tuple[i + 1..] {
            *x = reset;
        }
    }
}

/// `{0, a_1} + ... + {0, a_{q-1}} = Z_q` for every nonzero `a_i`.
///
/// All ordered tuples for `q <= 7`. The fold is order independent in an
/// abelian group, so larger `q` walk multisets instead.
pub fn verify_cd_fold(qs: &[usize]) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut names = Vec::new();
    let mut notes = Vec::new();
    for &q in qs {
        if !is_prime(q) || q > 13 {
            return Err(LabError::Precondition(format!("CDFOLD needs a prime q <= 13, got {q}")));
        }
        let g = standard(&format!("Z{q}"));
        let sorted = q > 7;
        let before = t.checked;
        for_each_tuple(q, q - 1, sorted, &mut |tuple| t.add(check_fold(&g, tuple)));
        notes.push(format!(
            "q = {q}: {} {}",
            t.checked - before,
            if sorted { "multisets" } else { "tuples" }
        ));
        names.push(g.name().to_string());
    }
    let mut r = t.report(LemmaId::CdFold, &names.join(","), Mode::Exhaustive, start);
    r.detail = Some(notes.join("; "));
    Ok(r)
}
