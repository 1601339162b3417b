use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CrCertificate, CritError, Method};
use crate::group::GroupTable;
use crate::set::ElementSet;
use crate::sumset::sigma;

/// Seeded random evidence for `cr(G) <= t`.
///
/// Checks each subset in `injected` followed by `trials` uniform random
/// `t`-subsets of `G \ {0}`. If none is a non-basis the certificate carries
/// `upper_bound = t` as evidence only. A non-basis found proves
/// `cr(G) > t` and becomes the witness.
pub fn cr_sampled_upper(
    g: &GroupTable,
    t: usize,
    trials: u64,
    seed: u64,
    injected: &[ElementSet],
) -> Result<CrCertificate, CritError> {
    let start = Instant::now();
    let n = g.order();
    if t == 0 || t > n - 1 {
        return Err(CritError::Precondition(format!(
            "sample size {t} must lie in 1..={}",
            n - 1
        )));
    }
    if let Some(bad) = injected.iter().find(|s| s.len() != t || s.contains(0) || s.upper_bound() > n) {
        return Err(CritError::Precondition(format!(
            "injected subset {:?} is not a {t}-subset of G \\ {{0}}",
            bad.to_vec()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subsets: Vec<ElementSet> = injected.to_vec();
    subsets.reserve(trials as usize);
    for _ in 0..trials {
        subsets.push(sample(&mut rng, n - 1, t).iter().map(|i| i + 1).collect());
    }

    let all = g.full_set();
    let verdicts: Vec<bool> = subsets
        .par_iter()
        .map(|&s| sigma(g, s, false).map(|c| c.full != all))
        .collect::<Result<_, _>>()?;
    let non_bases = verdicts.iter().filter(|&&v| v).count() as u64;

    let mut cert = CrCertificate::new(g, Method::SampledUpper);
    cert.subsets_checked = subsets.len() as u64;
    cert.non_bases_found = Some(non_bases);
    if let Some(pos) = verdicts.iter().position(|&v| v) {
        cert.witness = Some(subsets[pos]);
        cert.lower_bound = t + 1;
    } else {
        cert.upper_bound = t;
    }
    cert.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(cert)
}
