use std::time::Instant;

use super::search::find_non_basis_in;
use super::{cr_formula, witness_lower_bound_all, CrCertificate, CritError, Method, TheoremTag};
use crate::arith::binomial;
use crate::group::GroupTable;
use crate::set::ElementSet;
use crate::sumset::SigmaConfig;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct ExhaustiveOptions {
    /// Cap on the number of subsets examined, counted as `C(n-1, t)` for
    /// every size `t` the search has to settle. A size whose count would
    /// overrun the cap is not started.
    pub budget: u64,
    pub cfg: SigmaConfig,
}

impl Default for ExhaustiveOptions {
    fn default() -> Self {
        ExhaustiveOptions {
            budget: DEFAULT_BUDGET,
            cfg: SigmaConfig::default(),
        }
    }
}

/// Decides `cr(G)` exactly.
///
/// Non-bases are closed under taking subsets, so one size `t` settles a
/// bound: a `t`-subset that is not a basis gives `cr > t`, and `t`-subsets
/// that are all bases give `cr <= t`. The search starts from the explicit
/// witness (when `G` has a normal subgroup of smallest-prime index) and from
/// the closed-form prediction, so a correct prediction costs one pass.
pub fn cr_exhaustive(g: &GroupTable, opts: &ExhaustiveOptions) -> Result<CrCertificate, CritError> {
    let start = Instant::now();
    let n = g.order();
    let pool = g.nonzero_set();

    let mut lower = 1;
    let mut witness = ElementSet::EMPTY;
    match witness_lower_bound_all(g) {
        Ok(w) => {
            lower = w.lower_bound;
            witness = w.witness.expect("witness certificates carry a witness");
        }
        Err(CritError::Precondition(_)) => {}
        Err(e) => return Err(e),
    }
    // no subset of size n exists, so every one is vacuously a basis
    let mut upper = n;
    let predicted = cr_formula(g).and_then(|c| c.value);
    let mut t = predicted.unwrap_or(lower).clamp(lower, upper - 1);
    let mut spent = 0u64;

    while lower < upper {
        let cost = binomial(n - 1, t);
        if spent.saturating_add(cost) > opts.budget {
            let mut partial = CrCertificate::new(g, Method::Exhaustive);
            partial.lower_bound = lower;
            partial.upper_bound = upper;
            partial.witness = Some(witness);
            partial.subsets_checked = spent;
            partial.elapsed_ms = start.elapsed().as_millis() as u64;
            return Err(CritError::BudgetExhausted {
                budget: opts.budget,
                lower,
                upper,
                partial: Box::new(partial),
            });
        }
        let outcome = find_non_basis_in(g, pool, t, &opts.cfg)?;
        spent += outcome.checked;
        match outcome.witness {
            Some(w) => {
                lower = t + 1;
                witness = w;
                t = lower;
            }
            None => {
                upper = t;
                t = upper.saturating_sub(1).max(lower);
            }
        }
        if lower < upper {
            t = t.clamp(lower, upper - 1);
        }
    }

    let mut cert = CrCertificate::new(g, Method::Exhaustive);
    cert.value = Some(lower);
    cert.lower_bound = lower;
    cert.upper_bound = upper;
    cert.witness = Some(witness);
    cert.theorem_tag = if n == 27 {
        Some(TheoremTag::L2_6)
    } else if predicted == Some(lower) {
        cr_formula(g).and_then(|c| c.theorem_tag)
    } else {
        None
    };
    cert.subsets_checked = spent;
    cert.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{load_cayley, make_group, Descriptor};
    use crate::sumset::sigma;

    fn g(s: &str) -> GroupTable {
        make_group(&s.parse::<Descriptor>().unwrap()).unwrap()
    }

    // 1 + the largest non-basis size, by walking every subset of G \ {0}
    fn brute_cr(g: &GroupTable) -> usize {
        let m = g.order() - 1;
        let mut largest = 0;
        for bits in 0u64..(1 << m) {
            let s = ElementSet::from_bits((bits as u128) << 1);
            if s.len() >= largest && sigma(g, s, false).unwrap().full != g.full_set() {
                largest = s.len();
            }
        }
        largest + 1
    }

    #[test]
    fn small_groups_match_brute_force() {
        for name in ["Z2", "Z3", "Z4", "Z5", "Z6", "D3", "Z7", "Z8", "Z2xZ4", "D4", "Dic2", "Z9", "Z3xZ3", "Z10", "D5", "Z12", "D6", "Dic3", "Z15"] {
            let grp = g(name);
            let cert = cr_exhaustive(&grp, &ExhaustiveOptions::default()).unwrap();
            assert_eq!(cert.value, Some(brute_cr(&grp)), "{name}");
            cert.check(&grp).unwrap();
        }
    }

    #[test]
    fn known_values() {
        let opts = ExhaustiveOptions::default();
        assert_eq!(cr_exhaustive(&g("D3"), &opts).unwrap().value, Some(4));
        assert_eq!(cr_exhaustive(&g("D4"), &opts).unwrap().value, Some(4));
        let a4 = load_cayley(include_str!("../../fixtures/a4.cayley")).unwrap();
        let cert = cr_exhaustive(&a4, &opts).unwrap();
        assert_eq!(cert.value, Some(brute_cr(&a4)));
        assert_eq!(cert.theorem_tag, None);
        cert.check(&a4).unwrap();
    }

    #[test]
    fn budget_gives_partial_bounds() {
        let grp = g("D6");
        let opts = ExhaustiveOptions {
            budget: 10,
            ..Default::default()
        };
        match cr_exhaustive(&grp, &opts) {
            Err(CritError::BudgetExhausted { lower, upper, partial, .. }) => {
                assert_eq!(lower, 6);
                assert_eq!(upper, 12);
                assert_eq!(partial.value, None);
                partial.check(&grp).unwrap();
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn non_bases_are_downward_closed() {
        for name in ["Z6", "D3", "Z8", "D4", "Dic2", "Z3xZ3"] {
            let grp = g(name);
            let m = grp.order() - 1;
            let non_basis: Vec<bool> = (0u64..(1 << m))
                .map(|b| sigma(&grp, ElementSet::from_bits((b as u128) << 1), false).unwrap().full != grp.full_set())
                .collect();
            for b in 0..(1usize << m) {
                if non_basis[b] {
                    for i in 0..m {
                        assert!(non_basis[b & !(1 << i)], "{name}: {b:b} minus bit {i}");
                    }
                }
            }
        }
    }
}
