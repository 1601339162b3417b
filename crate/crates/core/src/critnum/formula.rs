use std::time::Instant;

use super::{CrCertificate, Method, TheoremTag};
use crate::arith::{is_composite, is_prime, prime_divisors, smallest_prime_divisor};
use crate::group::{is_nilpotent, subgroups_of_index, GroupTable};

/// Structural facts the closed forms depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaFacts {
    pub order: usize,
    pub abelian: bool,
    pub nilpotent: bool,
    pub smallest_prime: Option<usize>,
    pub has_index2_subgroup: bool,
}

impl FormulaFacts {
    pub fn of(g: &GroupTable) -> Self {
        let n = g.order();
        FormulaFacts {
            order: n,
            abelian: g.is_abelian(),
            nilpotent: is_nilpotent(g),
            smallest_prime: smallest_prime_divisor(n).ok(),
            has_index2_subgroup: n.is_multiple_of(2) && !subgroups_of_index(g, 2).is_empty(),
        }
    }
}

// the large-prime regime: p >= 149 and n >= 120 p^2
fn large_regime(n: usize, p: usize) -> bool {
    p >= 149 && n >= 120 * p * p
}

/// Closed-form prediction of `cr(G)`, or `None` when no applicable result
/// covers `G` (abelian groups of even order, odd orders with `n/p` prime, ...).
///
/// Predicates are tried in a fixed order; the first match wins.
pub fn cr_formula(g: &GroupTable) -> Option<CrCertificate> {
    let start = Instant::now();
    let facts = FormulaFacts::of(g);
    let n = facts.order;
    let p = facts.smallest_prime?;
    let non_abelian = !facts.abelian;
    let index_p = |g: &GroupTable| !subgroups_of_index(g, p).is_empty();

    let (value, tag) = if n == 6 && non_abelian && facts.has_index2_subgroup {
        (4, TheoremTag::T1_3i)
    } else if non_abelian && n.is_multiple_of(2) && facts.has_index2_subgroup {
        (n / 2, TheoremTag::T1_3ii)
    } else if facts.nilpotent && n % 2 == 1 && is_composite(n / p) {
        (n / p + p - 2, TheoremTag::T1_2)
    } else if non_abelian && n >= 10 && is_prime(n / p) {
        (n / p + p - 2, TheoremTag::T1_1iii)
    } else if facts.nilpotent && large_regime(n, p) {
        (n / p + p - 2, TheoremTag::T1_1i)
    } else if large_regime(n, p)
        // every other prime divisor must exceed 6p
        && prime_divisors(n).iter().all(|&q| q == p || q > 6 * p)
        && index_p(g)
    {
        (n / p + p - 2, TheoremTag::T1_1ii)
    } else {
        return None;
    };

    let mut cert = CrCertificate::new(g, Method::Formula);
    cert.value = Some(value);
    cert.lower_bound = value;
    cert.upper_bound = value;
    cert.theorem_tag = Some(tag);
    cert.elapsed_ms = start.elapsed().as_millis() as u64;
    Some(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{load_cayley, make_group, Descriptor};

    fn g(s: &str) -> GroupTable {
        make_group(&s.parse::<Descriptor>().unwrap()).unwrap()
    }

    fn predict(s: &str) -> Option<(usize, TheoremTag)> {
        cr_formula(&g(s)).map(|c| (c.value.unwrap(), c.theorem_tag.unwrap()))
    }

    #[test]
    fn heisenberg_27() {
        assert_eq!(predict("H27"), Some((10, TheoremTag::T1_2)));
    }

    #[test]
    fn dihedral_7() {
        assert_eq!(predict("D7"), Some((7, TheoremTag::T1_3ii)));
    }

    #[test]
    fn nonabelian_21() {
        assert_eq!(predict("Z7:Z3(k=2)"), Some((8, TheoremTag::T1_1iii)));
    }

    #[test]
    fn s3_and_friends() {
        assert_eq!(predict("D3"), Some((4, TheoremTag::T1_3i)));
        assert_eq!(predict("D5"), Some((5, TheoremTag::T1_3ii)));
        assert_eq!(predict("Dic2"), Some((4, TheoremTag::T1_3ii)));
        assert_eq!(predict("Z45"), Some((16, TheoremTag::T1_2)));
        for five in ["Z27", "Z9xZ3", "Z3xZ3xZ3", "Z9:Z3(k=4)"] {
            assert_eq!(predict(five), Some((10, TheoremTag::T1_2)), "{five}");
        }
    }

    #[test]
    fn not_applicable() {
        // abelian of even order, odd order with n/p prime, A4 without index 2
        assert_eq!(predict("Z8"), None);
        assert_eq!(predict("Z2xZ4"), None);
        assert_eq!(predict("Z15"), None);
        assert_eq!(predict("Z9"), None);
        let a4 = load_cayley(include_str!("../../fixtures/a4.cayley")).unwrap();
        assert!(cr_formula(&a4).is_none());
    }

    #[test]
    fn large_regime_unreachable_here() {
        for n in 1..=128 {
            for p in prime_divisors(n) {
                assert!(!large_regime(n, p));
            }
        }
    }
}
