//! Odd-order growth bounds, the order-9 lemma and resolving sequences.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    choose_mode, inverse_pairs, is_antisymmetric, random_antisymmetric, random_subset, Counterexample, LabError,
    LemmaId, Mode, Tally, Verdict, VerificationReport, VerifyOptions,
};
use crate::critnum::resolving_sequence;
use crate::group::{generates, GroupTable};
use crate::set::ElementSet;
use crate::sumset::{lambda, sigma, sigma_r, sumset};

const L2_4_MIN: usize = 3;
const L2_4_MAX: usize = 6;
const EXHAUSTIVE_L2_4: usize = 27;
const INEQ_2_4_MAX: usize = 10;
const RSEQ_MAX: usize = 12;

/// `|Σ(S)| >= 2|S|` for `S ∩ -S = ∅`, `|S| >= 3`, `|G|` odd.
pub(super) fn check_l2_4(g: &GroupTable, s: ElementSet) -> Result<Verdict, LabError> {
    if g.order().is_multiple_of(2) || s.len() < L2_4_MIN || s.contains(0) || !is_antisymmetric(g, s) {
        return Ok(Verdict::Skip);
    }
    let size = sigma(g, s, false)?.full.len();
    Ok(Verdict::require(size >= 2 * s.len(), || {
        Counterexample::new("L2.4").set("S", s).value("|Σ(S)|", size)
    }))
}

pub(super) fn replay_l2_4(g: &GroupTable, cx: &Counterexample) -> Result<Verdict, LabError> {
    check_l2_4(g, cx.get_set("S", g.order())?)
}

/// All `S ∩ -S = ∅` with `3 <= |S| <= 6` (exhaustive: every choice of
/// inverse pairs and signs).
pub fn verify_l2_4(g: &GroupTable, opts: &VerifyOptions) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    if g.order().is_multiple_of(2) {
        return Err(LabError::Precondition(format!("L2.4 needs odd order, {} has order {}", g.name(), g.order())));
    }
    let reps = inverse_pairs(g);
    let m = reps.len();
    let mode = choose_mode(LemmaId::L2_4, g, opts.mode, EXHAUSTIVE_L2_4)?;
    if m < L2_4_MIN {
        let mut r = Tally::default().report(LemmaId::L2_4, g.name(), mode, start);
        r.detail = Some("fewer than 3 inverse pairs; no case meets the hypothesis".into());
        return Ok(r);
    }
    let top = L2_4_MAX.min(m);
    let mut r = match mode {
        Mode::Exhaustive => {
            let t = Tally::chunks(1 << m, |pairs| {
                let chosen: Vec<usize> = (0..m).filter(|i| pairs >> i & 1 == 1).map(|i| reps[i]).collect();
                let mut t = Tally::default();
                if !(L2_4_MIN..=top).contains(&chosen.len()) {
                    return Ok(t);
                }
                for signs in 0u64..(1 << chosen.len()) {
                    let s: ElementSet = chosen
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| if signs >> i & 1 == 1 { g.inv(x) } else { x })
                        .collect();
                    t.add(check_l2_4(g, s)?);
                }
                Ok(t)
            })?;
            t.report(LemmaId::L2_4, g.name(), Mode::Exhaustive, start)
        }
        Mode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let cases: Vec<ElementSet> = (0..opts.trials)
                .map(|_| {
                    let k = rng.gen_range(L2_4_MIN..=top);
                    random_antisymmetric(&mut rng, g, &reps, k)
                })
                .collect();
            let t = Tally::over(&cases, |&s| check_l2_4(g, s))?;
            let mut r = t.report(LemmaId::L2_4, g.name(), Mode::Sampled, start);
            r.seed = Some(opts.seed);
            r
        }
    };
    r.detail = Some(format!("|S| from {L2_4_MIN} to {top}"));
    Ok(r)
}

fn item_id(item: &str) -> LemmaId {
    match item {
        "L2.5i" => LemmaId::L2_5i,
        "L2.5ii" => LemmaId::L2_5ii,
        "L2.5iii" => LemmaId::L2_5iii,
        "L2.5iv" => LemmaId::L2_5iv,
        _ => LemmaId::L2_5v,
    }
}

/// The five order-9 claims. `b` is only read by item (v).
pub(super) fn check_l2_5(g: &GroupTable, id: LemmaId, a: ElementSet, b: ElementSet) -> Result<Verdict, LabError> {
    if g.order() != 9 {
        return Ok(Verdict::Skip);
    }
    let fail = |measured: usize| {
        let mut cx = Counterexample::new(id.as_str()).set("A", a).value("measured", measured);
        if id == LemmaId::L2_5v {
            cx = cx.set("B", b);
        }
        cx
    };
    let (holds, measured) = match id {
        LemmaId::L2_5i => {
            if a.len() != 3 {
                return Ok(Verdict::Skip);
            }
            let full = sigma(g, a, false)?.full;
            // zero-sum free: no nonempty selection sums to 0
            if full.contains(0) {
                return Ok(Verdict::Skip);
            }
            (full.len() >= 6, full.len())
        }
        LemmaId::L2_5ii | LemmaId::L2_5iii => {
            let (size, need) = if id == LemmaId::L2_5ii { (3, 5) } else { (4, 7) };
            if a.len() != size || a.contains(0) {
                return Ok(Verdict::Skip);
            }
            let len = sigma(g, a, false)?.full.len();
            (len >= need, len)
        }
        LemmaId::L2_5iv => {
            if a.len() != 4 {
                return Ok(Verdict::Skip);
            }
            let len = sigma_r(g, a, 2)?.len();
            (len >= 5, len)
        }
        _ => {
            if a.len() != 4 || b.len() < 2 {
                return Ok(Verdict::Skip);
            }
            let len = sumset(g, a, b).len();
            (len >= 5, len)
        }
    };
    Ok(if holds { Verdict::Pass } else { Verdict::fail(fail(measured)) })
}

pub(super) fn replay_l2_5(g: &GroupTable, cx: &Counterexample) -> Result<Verdict, LabError> {
    let id = item_id(&cx.check);
    let a = cx.get_set("A", g.order())?;
    let b = if id == LemmaId::L2_5v { cx.get_set("B", g.order())? } else { ElementSet::EMPTY };
    check_l2_5(g, id, a, b)
}

/// Items (i) to (v) over every `A` (and `B`) of a group of order 9, one
/// report per item. Item (iv) has no `0 ∉ A` hypothesis, so it runs over
/// all 4-subsets and the detail splits the count by whether `0 ∈ A`.
pub fn verify_l2_5(g: &GroupTable) -> Result<Vec<VerificationReport>, LabError> {
    if g.order() != 9 {
        return Err(LabError::Precondition(format!("L2.5 needs order 9, {} has order {}", g.name(), g.order())));
    }
    let subsets_of = |k: usize| -> Vec<ElementSet> {
        (0u64..(1 << 9))
            .map(|b| ElementSet::from_bits(b as u128))
            .filter(|s| s.len() == k)
            .collect()
    };
    let triples = subsets_of(3);
    let quads = subsets_of(4);
    let all_b: Vec<ElementSet> = (0u64..(1 << 9)).map(|b| ElementSet::from_bits(b as u128)).collect();

    let mut out = Vec::new();
    for id in [LemmaId::L2_5i, LemmaId::L2_5ii, LemmaId::L2_5iii, LemmaId::L2_5iv] {
        let start = Instant::now();
        let family = if matches!(id, LemmaId::L2_5i | LemmaId::L2_5ii) { &triples } else { &quads };
        let t = Tally::over(family, |&a| check_l2_5(g, id, a, ElementSet::EMPTY))?;
        let mut r = t.report(id, g.name(), Mode::Exhaustive, start);
        if id == LemmaId::L2_5iv {
            let with_zero = quads.iter().filter(|a| a.contains(0)).count();
            r.detail = Some(format!(
                "0 allowed in A: {} subsets with 0, {} without; both pass when failures is empty",
                with_zero,
                quads.len() - with_zero
            ));
        }
        out.push(r);
    }

    let start = Instant::now();
    let t = Tally::chunks(quads.len() as u64, |i| {
        let a = quads[i as usize];
        let mut t = Tally::default();
        for &b in &all_b {
            t.add(check_l2_5(g, LemmaId::L2_5v, a, b)?);
        }
        Ok(t)
    })?;
    out.push(t.report(LemmaId::L2_5v, g.name(), Mode::Exhaustive, start));
    Ok(out)
}

// hypotheses under which the bound below is derived
fn ineq_2_4_applies(g: &GroupTable, x: ElementSet, sigma_len: usize) -> bool {
    g.order() % 2 == 1
        && !x.is_empty()
        && !x.contains(0)
        && is_antisymmetric(g, x)
        && generates(g, x)
        && 2 * sigma_len < g.order()
}

/// For `s` from the critical index `t` to `k`:
/// `|Σ(X)| >= (k+s+3)(k-s+1)/4 - 1/2 + |B_{s-1}|`, compared after
/// multiplying by 4.
pub(super) fn check_ineq_2_4(g: &GroupTable, x: ElementSet) -> Result<Verdict, LabError> {
    if x.is_empty() || x.contains(0) {
        return Ok(Verdict::Skip);
    }
    let total = sigma(g, x, false)?.full.len();
    if !ineq_2_4_applies(g, x, total) {
        return Ok(Verdict::Skip);
    }
    let seq = resolving_sequence(g, x)?;
    let k = seq.len();
    for s in seq.critical_index..=k {
        let rhs = ((k + s + 3) * (k - s + 1)) as i64 - 2 + 4 * seq.b_size(s - 1) as i64;
        if 4 * (total as i64) < rhs {
            return Ok(Verdict::fail(
                Counterexample::new("INEQ2.4")
                    .set("X", x)
                    .list("ordering", &seq.ordering)
                    .value("s", s)
                    .value("t", seq.critical_index)
                    .value("|Σ(X)|", total)
                    .value("four_times_rhs", rhs),
            ));
        }
    }
    Ok(Verdict::Pass)
}

pub(super) fn replay_ineq_2_4(g: &GroupTable, cx: &Counterexample) -> Result<Verdict, LabError> {
    check_ineq_2_4(g, cx.get_set("X", g.order())?)
}

/// Seeded `X` with `X ∩ -X = ∅` in an odd-order group. Samples that do not
/// generate `G` or have `|Σ(X)| >= n/2` are counted as skipped.
pub fn verify_ineq_2_4(g: &GroupTable, opts: &VerifyOptions) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    if g.order().is_multiple_of(2) {
        return Err(LabError::Precondition(format!(
            "INEQ2.4 needs odd order, {} has order {}",
            g.name(),
            g.order()
        )));
    }
    if opts.mode == Some(Mode::Exhaustive) {
        return Err(LabError::Precondition("INEQ2.4 runs in sampled mode only".into()));
    }
    let reps = inverse_pairs(g);
    let top = INEQ_2_4_MAX.min(reps.len());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cases: Vec<ElementSet> = (0..opts.trials)
        .map(|_| {
            let k = rng.gen_range(1..=top);
            random_antisymmetric(&mut rng, g, &reps, k)
        })
        .collect();
    let t = Tally::over(&cases, |&x| check_ineq_2_4(g, x))?;
    let mut r = t.report(LemmaId::Ineq2_4, g.name(), Mode::Sampled, start);
    r.seed = Some(opts.seed);
    r.detail = Some(format!(
        "|X| from 1 to {top}; skipped samples fail X ∩ -X = ∅, <X> = G or |Σ(X)| < n/2"
    ));
    Ok(r)
}

/// Re-derives every claim about a resolving sequence from scratch: prefix
/// closures, the max property, the critical index and the chain inequality.
pub(super) fn check_resolving(g: &GroupTable, x: ElementSet) -> Result<Verdict, LabError> {
    if x.is_empty() || x.contains(0) {
        return Ok(Verdict::Skip);
    }
    let seq = resolving_sequence(g, x)?;
    let k = seq.len();
    let base = |check: &str| Counterexample::new(check).set("X", x).list("ordering", &seq.ordering);

    if seq.prefix(k) != x {
        return Ok(Verdict::fail(base("RSEQ.sizes")));
    }
    for i in 1..=k {
        let b_i = sigma(g, seq.prefix(i), false)?.full;
        if b_i.len() != seq.prefix_sizes[i - 1] {
            return Ok(Verdict::fail(base("RSEQ.sizes").value("i", i).value("|B_i|", b_i.len())));
        }
        let own = lambda(g, b_i, seq.ordering[i - 1]);
        let best = seq.ordering[..i].iter().map(|&y| lambda(g, b_i, y)).max().unwrap_or(0);
        if own != best || own != seq.lambdas[i - 1] {
            return Ok(Verdict::fail(
                base("RSEQ.max").value("i", i).value("lambda_i", own).value("max_lambda", best),
            ));
        }
    }

    let t = seq.critical_index;
    let proper_before = !generates(g, seq.prefix(t - 1));
    let generates_at = t == k || generates(g, seq.prefix(t));
    if t < 1 || !proper_before || !generates_at {
        return Ok(Verdict::fail(base("RSEQ.critical").value("t", t)));
    }

    let total = seq.prefix_sizes[k - 1];
    let mut tail = 0;
    for j in (1..=k).rev() {
        tail += seq.lambdas[j - 1];
        if total < tail + seq.b_size(j - 1) {
            return Ok(Verdict::fail(
                base("RSEQ.chain").value("j", j).value("|Σ(X)|", total).value("rhs", tail + seq.b_size(j - 1)),
            ));
        }
    }
    Ok(Verdict::Pass)
}

pub(super) fn replay_resolving(g: &GroupTable, cx: &Counterexample) -> Result<Verdict, LabError> {
    check_resolving(g, cx.get_set("X", g.order())?)
}

/// Seeded subsets `X` of `G \ {0}` with `1 <= |X| <= 12`.
pub fn verify_resolving(g: &GroupTable, opts: &VerifyOptions) -> Result<VerificationReport, LabError> {
    let start = Instant::now();
    if opts.mode == Some(Mode::Exhaustive) {
        return Err(LabError::Precondition("RSEQ runs in sampled mode only".into()));
    }
    let pool = g.nonzero_set().to_vec();
    if pool.is_empty() {
        return Err(LabError::Precondition("RSEQ needs a nontrivial group".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cases: Vec<ElementSet> = (0..opts.trials)
        .map(|_| {
            let k = rng.gen_range(1..=pool.len().min(RSEQ_MAX));
            random_subset(&mut rng, &pool, k)
        })
        .collect();
    let t = Tally::over(&cases, |&x| check_resolving(g, x))?;
    let mut r = t.report(LemmaId::Rseq, g.name(), Mode::Sampled, start);
    r.seed = Some(opts.seed);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemma_lab::standard;

    #[test]
    fn odd_growth_examples() {
        // Z7 with a = 1, b = 2, c = a + b: sums 1, 2, 3, 4, 5, 6
        let z7 = standard("Z7");
        let s = ElementSet::from_indices([1, 2, 3]);
        assert!(is_antisymmetric(&z7, s));
        assert_eq!(sigma(&z7, s, false).unwrap().full.to_vec(), vec![1, 2, 3, 4, 5, 6]);
        assert!(matches!(check_l2_4(&z7, s).unwrap(), Verdict::Pass));

        let z9 = standard("Z9");
        let r = verify_l2_4(&z9, &VerifyOptions::default()).unwrap();
        assert!(r.passed());
        // 4 inverse pairs: sizes 3 and 4 give C(4,3)·8 + C(4,4)·16
        assert_eq!(r.cases_checked, 4 * 8 + 16);
    }

    #[test]
    fn odd_growth_rejects_even_order() {
        assert!(verify_l2_4(&standard("Z8"), &VerifyOptions::default()).is_err());
    }

    #[test]
    fn order_nine_items() {
        for name in ["Z9", "Z3xZ3"] {
            let g = standard(name);
            let reports = verify_l2_5(&g).unwrap();
            assert_eq!(reports.len(), 5);
            for r in &reports {
                assert!(r.passed(), "{name} {}", r.lemma_id);
            }
            // (iv) has C(9,4) cases, (v) pairs each with the 502 B of size >= 2
            assert_eq!(reports[3].cases_checked, 126);
            assert_eq!(reports[4].cases_checked, 126 * 502);
        }
    }

    #[test]
    fn order_nine_examples() {
        let z9 = standard("Z9");
        let a = ElementSet::from_indices([1, 2, 4]);
        let full = sigma(&z9, a, false).unwrap().full;
        assert_eq!(full.to_vec(), vec![1, 2, 3, 4, 5, 6, 7]);
        assert!(matches!(check_l2_5(&z9, LemmaId::L2_5i, a, ElementSet::EMPTY).unwrap(), Verdict::Pass));
        let pm = ElementSet::from_indices([1, 8, 2, 7]);
        assert!(sigma(&z9, pm, false).unwrap().full.len() >= 7);
        assert!(matches!(check_l2_5(&z9, LemmaId::L2_5iii, pm, ElementSet::EMPTY).unwrap(), Verdict::Pass));
    }

    #[test]
    fn resolving_checks_hold() {
        for name in ["Z27", "H27", "D6", "Dic3"] {
            let g = standard(name);
            let opts = VerifyOptions {
                trials: 200,
                ..Default::default()
            };
            let r = verify_resolving(&g, &opts).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures.first());
            assert_eq!(r.cases_checked, 200);
        }
    }

    #[test]
    fn ineq_2_4_skips_are_counted() {
        let g = standard("Z27");
        let opts = VerifyOptions {
            trials: 2000,
            ..Default::default()
        };
        let r = verify_ineq_2_4(&g, &opts).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        assert_eq!(r.cases_checked + r.cases_skipped, 2000);
        assert!(r.cases_checked > 0 && r.cases_skipped > 0);
    }
}
