//! Subset-sum closures `Σ(S)`, their per-length slices `Σ_r(S)`, sumsets
//! and the translation defect `λ_B(x) = |(B + x) \ B|`.
//!
//! A sum of distinct elements may be taken in any order, which only matters
//! for non-abelian groups. Abelian groups use the prefix recurrence
//! `R_i = R_{i-1} ∪ (R_{i-1} + a_i) ∪ {a_i}`, which is exact there. In
//! general the same recurrence (in any fixed order) only under-approximates,
//! so non-abelian closures go through three tiers: the recurrence in input
//! order, then in a few other orders, and finally an exact search over
//! (used-subset, sum) states.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::GroupTable;
use crate::set::ElementSet;

pub const DEFAULT_MASK_WIDTH: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SumsetError {
    #[error("exact closure of {size} elements exceeds the mask-width limit {limit}")]
    Capacity { size: usize, limit: usize },
    #[error("r = {r} out of range 1..={size}")]
    RankOutOfRange { r: usize, size: usize },
    #[error("an additive basis candidate must not contain the identity")]
    ContainsIdentity,
}

#[derive(Clone, Copy, Debug)]
pub struct SigmaConfig {
    /// Largest `|S|` the exact non-abelian search accepts.
    pub mask_width: usize,
}

impl Default for SigmaConfig {
    fn default() -> Self {
        SigmaConfig {
            mask_width: DEFAULT_MASK_WIDTH,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetClosure {
    pub full: ElementSet,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub by_cardinality: Option<BTreeMap<usize, ElementSet>>,
    /// False when a fixed-order under-approximation already covered the
    /// group and the complete search was skipped.
    pub exact: bool,
}

/// `Σ(S)` with the default configuration.
pub fn sigma(
    g: &GroupTable,
    s: ElementSet,
    want_by_cardinality: bool,
) -> Result<SumsetClosure, SumsetError> {
    sigma_of(g, &s.to_vec(), want_by_cardinality, &SigmaConfig::default())
}

/// `Σ(S)` for `S` given as a list of elements in any order; duplicates are
/// ignored.
pub fn sigma_of(
    g: &GroupTable,
    elems: &[usize],
    want_by_cardinality: bool,
    cfg: &SigmaConfig,
) -> Result<SumsetClosure, SumsetError> {
    let mut seen = ElementSet::EMPTY;
    let elems: Vec<usize> = elems
        .iter()
        .copied()
        .filter(|&x| {
            let fresh = !seen.contains(x);
            seen.insert(x);
            fresh
        })
        .collect();

    if g.is_abelian() {
        if want_by_cardinality {
            let layers = abelian_layers(g, &elems);
            let by: BTreeMap<usize, ElementSet> =
                layers.iter().copied().enumerate().skip(1).collect();
            let full = by.values().fold(ElementSet::EMPTY, |a, &b| a.union(b));
            return Ok(SumsetClosure {
                full,
                by_cardinality: Some(by),
                exact: true,
            });
        }
        return Ok(SumsetClosure {
            full: fixed_order_sigma(g, &elems),
            by_cardinality: None,
            exact: true,
        });
    }

    if !want_by_cardinality {
        let all = g.full_set();
        let mut under = fixed_order_sigma(g, &elems);
        if under != all {
            under = under.union(permuted_underapproximation(g, &elems, all));
        }
        if under == all {
            return Ok(SumsetClosure {
                full: all,
                by_cardinality: None,
                exact: false,
            });
        }
    }
    if elems.len() > cfg.mask_width {
        return Err(SumsetError::Capacity {
            size: elems.len(),
            limit: cfg.mask_width,
        });
    }
    let (full, by) = ordered_state_search(g, &elems, want_by_cardinality);
    Ok(SumsetClosure {
        full,
        by_cardinality: by.map(|v| v.into_iter().enumerate().skip(1).collect()),
        exact: true,
    })
}

/// Prefix recurrence in the given order: sums `a_{i1} + ... + a_{il}` with
/// increasing positions. Exact for abelian groups, a subset of `Σ(S)` always.
pub fn fixed_order_sigma(g: &GroupTable, elems: &[usize]) -> ElementSet {
    let mut acc = ElementSet::EMPTY;
    for &a in elems {
        acc = acc.union(g.translate_right(acc, a)).with(a);
    }
    acc
}

// reversal plus four shuffles seeded from the subset itself
fn permuted_underapproximation(g: &GroupTable, elems: &[usize], target: ElementSet) -> ElementSet {
    let mut order: Vec<usize> = elems.iter().rev().copied().collect();
    let mut acc = fixed_order_sigma(g, &order);
    if acc == target {
        return acc;
    }
    let seed = ElementSet::from_indices(elems.iter().copied()).bits();
    let mut rng = ChaCha8Rng::seed_from_u64((seed as u64) ^ ((seed >> 64) as u64));
    for _ in 0..4 {
        order.shuffle(&mut rng);
        acc = acc.union(fixed_order_sigma(g, &order));
        if acc == target {
            break;
        }
    }
    acc
}

/// Exact closure by dynamic programming over used-element masks: the set of
/// sums of exactly the elements in `mask`, in every order, is the union over
/// `x` in `mask` of (sums of `mask \ x`) + `x`.
///
/// Returns `Σ(S)` and, when requested, `Σ_r(S)` indexed by `r` (slot 0 holds
/// the empty sum `{0}`). Without the per-length slices it stops as soon as
/// the whole group is covered.
pub fn ordered_state_search(
    g: &GroupTable,
    elems: &[usize],
    want_by_cardinality: bool,
) -> (ElementSet, Option<Vec<ElementSet>>) {
    let k = elems.len();
    let all = g.full_set();
    let mut sums = vec![ElementSet::EMPTY; 1usize << k];
    sums[0] = ElementSet::singleton(0);
    let mut full = ElementSet::EMPTY;
    let mut layers = want_by_cardinality.then(|| {
        let mut v = vec![ElementSet::EMPTY; k + 1];
        v[0] = ElementSet::singleton(0);
        v
    });
    for mask in 1usize..(1 << k) {
        let mut acc = ElementSet::EMPTY;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc = acc.union(g.translate_right(sums[mask & !(1 << i)], elems[i]));
        }
        sums[mask] = acc;
        full = full.union(acc);
        match layers.as_mut() {
            Some(l) => {
                let r = mask.count_ones() as usize;
                l[r] = l[r].union(acc);
            }
            None if full == all => break,
            None => {}
        }
    }
    (full, layers)
}

// Σ_r for abelian groups: layer r collects sums of exactly r elements.
fn abelian_layers(g: &GroupTable, elems: &[usize]) -> Vec<ElementSet> {
    let mut layers = vec![ElementSet::EMPTY; elems.len() + 1];
    layers[0] = ElementSet::singleton(0);
    for (i, &a) in elems.iter().enumerate() {
        for r in (1..=i + 1).rev() {
            layers[r] = layers[r].union(g.translate_right(layers[r - 1], a));
        }
    }
    layers
}

/// `Σ_r(S)`: sums of exactly `r` distinct elements, in any order.
pub fn sigma_r(g: &GroupTable, s: ElementSet, r: usize) -> Result<ElementSet, SumsetError> {
    if r < 1 || r > s.len() {
        return Err(SumsetError::RankOutOfRange { r, size: s.len() });
    }
    let closure = sigma(g, s, true)?;
    Ok(closure.by_cardinality.expect("requested slices")[&r])
}

/// `A + B = {a + b}`.
pub fn sumset(g: &GroupTable, a: ElementSet, b: ElementSet) -> ElementSet {
    b.iter()
        .fold(ElementSet::EMPTY, |acc, x| acc.union(g.translate_right(a, x)))
}

/// `{0, e_1} + {0, e_2} + ... `, folded left to right.
pub fn fold_cd(g: &GroupTable, elements: &[usize]) -> ElementSet {
    elements.iter().fold(ElementSet::singleton(0), |acc, &e| {
        acc.union(g.translate_right(acc, e))
    })
}

/// `λ_B(x) = |(B + x) \ B|`.
#[inline]
pub fn lambda(g: &GroupTable, b: ElementSet, x: usize) -> usize {
    g.translate_right(b, x).difference(b).len()
}

/// Whether `Σ(S) = G`. `S` must not contain the identity.
pub fn is_additive_basis(g: &GroupTable, s: ElementSet) -> Result<bool, SumsetError> {
    if s.contains(0) {
        return Err(SumsetError::ContainsIdentity);
    }
    Ok(sigma(g, s, false)?.full == g.full_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, Descriptor};

    fn g(s: &str) -> GroupTable {
        make_group(&s.parse::<Descriptor>().unwrap()).unwrap()
    }

    fn set(v: &[usize]) -> ElementSet {
        ElementSet::from_indices(v.iter().copied())
    }

    /// Independent oracle: enumerate every ordered selection of distinct
    /// elements (permutations of every subset) and record its sum.
    fn brute_sigma(grp: &GroupTable, elems: &[usize]) -> Vec<ElementSet> {
        let k = elems.len();
        let mut by_len = vec![ElementSet::EMPTY; k + 1];
        fn rec(
            grp: &GroupTable,
            elems: &[usize],
            used: &mut Vec<bool>,
            sum: usize,
            len: usize,
            by_len: &mut Vec<ElementSet>,
        ) {
            for i in 0..elems.len() {
                if used[i] {
                    continue;
                }
                used[i] = true;
                let s = grp.op(sum, elems[i]);
                by_len[len + 1].insert(s);
                rec(grp, elems, used, s, len + 1, by_len);
                used[i] = false;
            }
        }
        let mut used = vec![false; k];
        rec(grp, elems, &mut used, 0, 0, &mut by_len);
        by_len
    }

    #[test]
    fn cyclic5_pair() {
        let z5 = g("Z5");
        assert_eq!(sigma(&z5, set(&[1, 2]), false).unwrap().full.to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn s3_rotation_and_reflection() {
        let d3 = g("D3");
        // r = 1, s = 3
        let got = sigma(&d3, set(&[1, 3]), false).unwrap().full;
        let expected = set(&[1, 3, d3.op(1, 3), d3.op(3, 1)]);
        assert_eq!(got, expected);
        assert_eq!(got.len(), 4);
        assert_eq!(got, brute_sigma(&d3, &[1, 3]).iter().fold(ElementSet::EMPTY, |a, &b| a.union(b)));
    }

    #[test]
    fn cyclic9_symmetric_four() {
        let z9 = g("Z9");
        let full = sigma(&z9, set(&[1, 8, 2, 7]), false).unwrap().full;
        for x in [0, 1, 8, 2, 7, 3, 6] {
            assert!(full.contains(x));
        }
        assert!(full.len() >= 7);
    }

    #[test]
    fn sigma_r_examples() {
        let z9 = g("Z9");
        let a = set(&[1, 2, 3, 4]);
        assert_eq!(sigma_r(&z9, a, 2).unwrap().to_vec(), vec![3, 4, 5, 6, 7]);
        assert_eq!(sigma_r(&z9, a, 4).unwrap().to_vec(), vec![1]);
        assert_eq!(sigma_r(&z9, a, 1).unwrap(), a);
        assert!(matches!(sigma_r(&z9, a, 0), Err(SumsetError::RankOutOfRange { .. })));
        assert!(matches!(sigma_r(&z9, a, 5), Err(SumsetError::RankOutOfRange { .. })));
    }

    #[test]
    fn sumset_examples() {
        let z3 = g("Z3");
        assert_eq!(sumset(&z3, set(&[0, 1]), set(&[0, 1])), z3.full_set());
        let d4 = g("D4");
        assert_eq!(sumset(&d4, d4.full_set(), set(&[0])), d4.full_set());
        assert_eq!(sumset(&d4, set(&[1]), set(&[4])), set(&[d4.op(1, 4)]));
    }

    #[test]
    fn fold_examples() {
        let z5 = g("Z5");
        assert_eq!(fold_cd(&z5, &[1, 1, 1, 1]), z5.full_set());
        let z7 = g("Z7");
        assert_eq!(fold_cd(&z7, &[2, 3, 2, 5, 1, 6]), z7.full_set());
        assert_eq!(fold_cd(&z7, &[]), set(&[0]));
    }

    #[test]
    fn lambda_examples() {
        let d4 = g("D4");
        assert_eq!(lambda(&d4, set(&[0]), 5), 1);
        assert_eq!(lambda(&d4, set(&[1, 2, 6]), 0), 0);
    }

    #[test]
    fn basis_examples() {
        let z3 = g("Z3");
        assert!(is_additive_basis(&z3, set(&[1, 2])).unwrap());
        let d3 = g("D3");
        assert!(!is_additive_basis(&d3, set(&[1, 2])).unwrap());
        assert_eq!(
            is_additive_basis(&d3, set(&[0, 1])),
            Err(SumsetError::ContainsIdentity)
        );
    }

    #[test]
    fn capacity_error() {
        let d8 = g("D8");
        // the rotation subgroup minus 0 never covers the group, so the exact
        // search is needed and the tiny limit trips
        let cfg = SigmaConfig { mask_width: 4 };
        let err = sigma_of(&d8, &[1, 2, 3, 4, 5, 6, 7], false, &cfg).unwrap_err();
        assert_eq!(err, SumsetError::Capacity { size: 7, limit: 4 });
    }

    #[test]
    fn exact_matches_brute_force_nonabelian() {
        for name in ["D3", "D4", "Dic2", "Dic3", "Z7:Z3(k=2)"] {
            let grp = g(name);
            let n = grp.order();
            // a handful of deterministic subsets of sizes 1..=6
            for seed in 0..40usize {
                let k = 1 + seed % 6;
                let elems: Vec<usize> = (0..k).map(|i| 1 + (seed * 7 + i * 5) % (n - 1)).collect();
                let s = ElementSet::from_indices(elems.iter().copied());
                let v = s.to_vec();
                let brute = brute_sigma(&grp, &v);
                let got = sigma(&grp, s, true).unwrap();
                let by = got.by_cardinality.unwrap();
                for r in 1..=v.len() {
                    assert_eq!(by[&r], brute[r], "{name} {v:?} r={r}");
                }
                let union = brute.iter().skip(1).fold(ElementSet::EMPTY, |a, &b| a.union(b));
                assert_eq!(got.full, union);
                assert_eq!(sigma(&grp, s, false).unwrap().full, union);
            }
        }
    }

    #[test]
    fn exact_flag() {
        let d4 = g("D4");
        let dense = sigma(&d4, set(&[1, 2, 3, 4, 5, 6, 7]), false).unwrap();
        assert_eq!(dense.full, d4.full_set());
        assert!(!dense.exact);
        let sparse = sigma(&d4, set(&[1, 4]), false).unwrap();
        assert!(sparse.exact);
        assert!(sigma(&g("Z7"), set(&[1, 2]), false).unwrap().exact);
    }
}
