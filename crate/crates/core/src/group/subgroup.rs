//! Generated subgroups, subgroup enumeration, quotients and the upper
//! central series.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{GroupError, GroupTable};
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupInfo {
    pub carrier: ElementSet,
    pub is_normal: bool,
    pub index: usize,
}

impl SubgroupInfo {
    fn of(g: &GroupTable, carrier: ElementSet) -> Self {
        SubgroupInfo {
            carrier,
            is_normal: is_normal(g, carrier),
            index: g.order() / carrier.len(),
        }
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }
}

/// Smallest subgroup containing `gens`, as a bare carrier set.
pub fn closure_set(g: &GroupTable, gens: ElementSet) -> ElementSet {
    let gens: Vec<usize> = gens.iter().filter(|&x| x != 0).collect();
    let mut seen = ElementSet::singleton(0);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for &s in &gens {
            let y = g.op(x, s);
            if !seen.contains(y) {
                seen.insert(y);
                stack.push(y);
            }
        }
    }
    seen
}

pub fn subgroup_closure(g: &GroupTable, gens: ElementSet) -> SubgroupInfo {
    SubgroupInfo::of(g, closure_set(g, gens))
}

/// Whether `set` generates the whole group.
pub fn generates(g: &GroupTable, set: ElementSet) -> bool {
    closure_set(g, set) == g.full_set()
}

/// Conjugation check: `x + h - x` stays in `carrier` for every `x` in G and `h` in it.
pub fn is_normal(g: &GroupTable, carrier: ElementSet) -> bool {
    (0..g.order()).all(|x| {
        let nx = g.inv(x);
        carrier
            .iter()
            .all(|h| carrier.contains(g.op(g.op(x, h), nx)))
    })
}

/// Every subgroup of `g`, sorted by carrier bit-set.
///
/// Starts from the cyclic subgroups and repeatedly joins a known subgroup
/// with one more cyclic subgroup until no new carrier appears. Each subgroup
/// keeps a short generator list so closures stay cheap.
pub fn all_subgroups(g: &GroupTable) -> Vec<ElementSet> {
    let n = g.order();
    let mut cyclic_gens: Vec<usize> = Vec::new();
    let mut cyclic_seen: HashSet<ElementSet> = HashSet::new();
    for x in 0..n {
        let c = closure_set(g, ElementSet::singleton(x));
        if cyclic_seen.insert(c) {
            cyclic_gens.push(x);
        }
    }

    let mut found: HashSet<ElementSet> = cyclic_seen.clone();
    let mut frontier: Vec<(ElementSet, ElementSet)> = cyclic_gens
        .iter()
        .map(|&x| (closure_set(g, ElementSet::singleton(x)), ElementSet::singleton(x)))
        .collect();
    while let Some((carrier, gens)) = frontier.pop() {
        for &x in &cyclic_gens {
            if carrier.contains(x) {
                continue;
            }
            let new_gens = gens.with(x);
            let joined = closure_set(g, new_gens);
            if found.insert(joined) {
                frontier.push((joined, new_gens));
            }
        }
    }
    let mut out: Vec<ElementSet> = found.into_iter().collect();
    out.sort();
    out
}

/// All subgroups of index `k`, sorted by carrier bit-set. Empty when `k`
/// does not divide the order.
pub fn subgroups_of_index(g: &GroupTable, k: usize) -> Vec<SubgroupInfo> {
    let n = g.order();
    if k == 0 || !n.is_multiple_of(k) {
        return Vec::new();
    }
    all_subgroups(g)
        .into_iter()
        .filter(|c| c.len() * k == n)
        .map(|c| SubgroupInfo::of(g, c))
        .collect()
}

/// A quotient group together with the canonical projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: GroupTable,
    /// `projection[g]` is the index of the coset `g + K` in `group`.
    pub projection: Vec<usize>,
    /// Smallest element of each coset.
    pub representatives: Vec<usize>,
}

/// `G / K` for a normal subgroup `K`. Cosets are numbered by their smallest
/// element, so the identity coset is index 0.
pub fn quotient(g: &GroupTable, k: &SubgroupInfo) -> Result<Quotient, GroupError> {
    if !k.is_normal || !is_normal(g, k.carrier) {
        return Err(GroupError::NotNormal);
    }
    let n = g.order();
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in 0..n {
        if projection[x] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        representatives.push(x);
        for h in k.carrier.iter() {
            projection[g.op(x, h)] = c;
        }
    }
    let m = representatives.len();
    let labels = representatives
        .iter()
        .map(|&r| format!("{}+K", g.labels()[r]))
        .collect();
    let name = format!("{}/N{}", g.name(), k.carrier.len());
    let group = GroupTable::from_fn(name, labels, m, |a, b| {
        projection[g.op(representatives[a], representatives[b])]
    })?;
    for x in 0..n {
        for y in 0..n {
            if projection[g.op(x, y)] != group.op(projection[x], projection[y]) {
                return Err(GroupError::InvalidParameters(
                    "projection is not a homomorphism".into(),
                ));
            }
        }
    }
    Ok(Quotient {
        group,
        projection,
        representatives,
    })
}

pub fn center(g: &GroupTable) -> ElementSet {
    let n = g.order();
    (0..n)
        .filter(|&z| (0..n).all(|x| g.op(z, x) == g.op(x, z)))
        .collect()
}

/// `Z_0 = {0} <= Z_1 <= ...` where `Z_{i+1}` holds every `z` whose
/// commutators `[z, x]` all land in `Z_i`. Stops when the series stalls.
pub fn upper_central_series(g: &GroupTable) -> Vec<ElementSet> {
    let n = g.order();
    let mut series = vec![ElementSet::singleton(0)];
    loop {
        let prev = *series.last().unwrap();
        let next: ElementSet = (0..n)
            .filter(|&z| {
                (0..n).all(|x| {
                    let comm = g.op(g.op(z, x), g.inv(g.op(x, z)));
                    prev.contains(comm)
                })
            })
            .collect();
        if next == prev {
            return series;
        }
        series.push(next);
    }
}

pub fn is_nilpotent(g: &GroupTable) -> bool {
    upper_central_series(g).last().copied() == Some(g.full_set())
}
