use std::time::Instant;

use super::{cr_formula, CrCertificate, CritError, Method};
use crate::arith::{is_prime, smallest_prime_divisor};
use crate::group::{all_subgroups, generates, is_normal, quotient, subgroups_of_index, GroupTable, SubgroupInfo};
use crate::set::ElementSet;
use crate::sumset::{sigma, SumsetError};

/// Lower bound `cr(G) >= n/p + p - 2` from an explicit non-basis.
///
/// With `K` normal of prime index `p`, let `c` be the smallest element
/// outside `K` and `B` the `p - 2` smallest elements of `c + K`. Every sum of
/// distinct elements of `T = (K \ {0}) ∪ B` lies in `jc + K` for some
/// `0 <= j <= p - 2`, so `T` never reaches the coset `-c + K`.
pub fn witness_lower_bound(g: &GroupTable, k: &SubgroupInfo) -> Result<CrCertificate, CritError> {
    let start = Instant::now();
    let p = k.index;
    if !is_prime(p) {
        return Err(CritError::Precondition(format!("subgroup index {p} is not prime")));
    }
    if !k.is_normal {
        return Err(CritError::Precondition("subgroup is not normal".into()));
    }
    let q = quotient(g, k)?;
    let c = (0..g.order())
        .find(|&x| !k.carrier.contains(x))
        .ok_or_else(|| CritError::Precondition("subgroup is the whole group".into()))?;
    let coset = q.projection[c];
    let b: ElementSet = (0..g.order())
        .filter(|&x| q.projection[x] == coset)
        .take(p - 2)
        .collect();
    if b.len() != p - 2 {
        return Err(CritError::Precondition(format!(
            "coset has fewer than {} elements",
            p - 2
        )));
    }
    let t = k.carrier.without(0).union(b);
    let target_coset = q.projection[g.inv(c)];
    let target: ElementSet = (0..g.order())
        .filter(|&x| q.projection[x] == target_coset)
        .collect();

    let misses = match sigma(g, t, false) {
        Ok(closure) => closure.full.is_disjoint(target),
        // too wide for the exact search: argue through the quotient instead
        Err(SumsetError::Capacity { .. }) => {
            !image_sums(&q.group, &q.projection, t).contains(target_coset)
        }
        Err(e) => return Err(e.into()),
    };
    if !misses {
        return Err(CritError::ConstructionInvalid(format!(
            "Σ(T) meets the coset of {} for T = {:?}",
            g.inv(c),
            t.to_vec()
        )));
    }

    let mut cert = CrCertificate::new(g, Method::WitnessLower);
    cert.lower_bound = t.len() + 1;
    cert.witness = Some(t);
    cert.theorem_tag = cr_formula(g).and_then(|f| f.theorem_tag);
    cert.subsets_checked = 1;
    cert.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(cert)
}

/// Runs [`witness_lower_bound`] over every normal subgroup of index `p`
/// (the smallest prime divisor) and keeps the largest bound; ties go to the
/// first subgroup in carrier order.
pub fn witness_lower_bound_all(g: &GroupTable) -> Result<CrCertificate, CritError> {
    let start = Instant::now();
    let p = smallest_prime_divisor(g.order())?;
    let mut best: Option<CrCertificate> = None;
    let mut tried = 0;
    for k in subgroups_of_index(g, p).into_iter().filter(|k| k.is_normal) {
        let cert = witness_lower_bound(g, &k)?;
        tried += 1;
        if best.as_ref().is_none_or(|b| cert.lower_bound > b.lower_bound) {
            best = Some(cert);
        }
    }
    let mut best = best.ok_or_else(|| {
        CritError::Precondition(format!("no normal subgroup of index {p} in {}", g.name()))
    })?;
    best.subsets_checked = tried;
    best.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(best)
}

// Images in G/K of all sums of distinct elements of `t`, including the
// empty sum. G/K is abelian here (prime order), so the prefix recurrence over
// the image multiset is exact.
fn image_sums(quot: &GroupTable, projection: &[usize], t: ElementSet) -> ElementSet {
    t.iter().fold(ElementSet::singleton(0), |acc, x| {
        acc.union(quot.translate_right(acc, projection[x]))
    })
}

/// Sound check that `Σ(w) != G` without the exact closure: either `w`
/// generates a proper subgroup, or for some normal subgroup of prime index
/// the images of `w` cannot reach every coset.
pub fn coset_image_misses(g: &GroupTable, w: ElementSet) -> bool {
    if !generates(g, w) {
        return true;
    }
    let n = g.order();
    all_subgroups(g)
        .into_iter()
        .filter(|c| c.len() < n && is_prime(n / c.len()) && is_normal(g, *c))
        .any(|c| {
            let info = SubgroupInfo {
                carrier: c,
                is_normal: true,
                index: n / c.len(),
            };
            match quotient(g, &info) {
                Ok(q) => {
                    // the empty sum only adds the identity coset, which never
                    // decides the answer
                    image_sums(&q.group, &q.projection, w) != q.group.full_set()
                }
                Err(_) => false,
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, subgroup_closure, Descriptor};

    fn g(s: &str) -> GroupTable {
        make_group(&s.parse::<Descriptor>().unwrap()).unwrap()
    }

    #[test]
    fn cyclic9() {
        let z9 = g("Z9");
        let k = subgroup_closure(&z9, ElementSet::singleton(3));
        let cert = witness_lower_bound(&z9, &k).unwrap();
        assert_eq!(cert.lower_bound, 4);
        let w = cert.witness.unwrap();
        assert_eq!(w.to_vec(), vec![1, 3, 6]);
        let full = sigma(&z9, w, false).unwrap().full;
        // misses the coset 2 + K = {2, 5, 8}
        assert!(full.is_disjoint(ElementSet::from_indices([2, 5, 8])));
        cert.check(&z9).unwrap();
    }

    #[test]
    fn dihedral5() {
        let d5 = g("D5");
        let k = subgroup_closure(&d5, ElementSet::singleton(1));
        let cert = witness_lower_bound(&d5, &k).unwrap();
        assert_eq!(cert.lower_bound, 5);
        assert_eq!(cert.witness.unwrap(), k.carrier.without(0));
        cert.check(&d5).unwrap();
    }

    #[test]
    fn heisenberg_every_maximal_subgroup() {
        let h = g("H27");
        let subs = subgroups_of_index(&h, 3);
        assert_eq!(subs.len(), 4);
        for k in &subs {
            let cert = witness_lower_bound(&h, k).unwrap();
            assert_eq!(cert.lower_bound, 10);
            cert.check(&h).unwrap();
        }
        assert_eq!(witness_lower_bound_all(&h).unwrap().lower_bound, 10);
    }

    #[test]
    fn rejects_bad_subgroups() {
        let d3 = g("D3");
        let refl = subgroup_closure(&d3, ElementSet::singleton(3));
        assert!(matches!(witness_lower_bound(&d3, &refl), Err(CritError::Precondition(_))));
        let z8 = g("Z8");
        let k = subgroup_closure(&z8, ElementSet::singleton(4));
        assert!(matches!(witness_lower_bound(&z8, &k), Err(CritError::Precondition(_))));
    }

    #[test]
    fn quotient_argument_agrees_with_exact() {
        for name in ["Z45", "D16", "Dic4", "H27", "Z9:Z3(k=4)"] {
            let grp = g(name);
            let cert = witness_lower_bound_all(&grp).unwrap();
            let w = cert.witness.unwrap();
            assert!(coset_image_misses(&grp, w), "{name}");
            cert.check(&grp).unwrap();
        }
    }

    #[test]
    fn image_argument_is_not_vacuous() {
        // a basis must never be reported as missing a coset
        let z9 = g("Z9");
        assert!(!coset_image_misses(&z9, ElementSet::from_indices([1, 2, 3, 4])));
    }
}
