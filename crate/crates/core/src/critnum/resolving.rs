use serde::{Deserialize, Serialize};

use super::CritError;
use crate::group::{generates, GroupTable};
use crate::set::ElementSet;
use crate::sumset::{lambda, sigma};

/// An ordering `x_1..x_k` of a set `X` where each `x_i` maximizes
/// `λ_{B_i}(x_j)` over `j <= i`, with `B_i = Σ({x_1..x_i})`.
///
/// Vectors are 0-based: `ordering[i]` is `x_{i+1}`, `lambdas[i]` is
/// `λ_{i+1}` and `prefix_sizes[i]` is `|B_{i+1}|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvingSequence {
    pub ordering: Vec<usize>,
    pub lambdas: Vec<usize>,
    /// Largest `t` in `1..=k` such that `x_1..x_{t-1}` generate a proper
    /// subgroup.
    pub critical_index: usize,
    pub prefix_sizes: Vec<usize>,
}

impl ResolvingSequence {
    pub fn len(&self) -> usize {
        self.ordering.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordering.is_empty()
    }

    /// `|B_i|` with `B_0 = Σ(∅) = ∅`.
    pub fn b_size(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.prefix_sizes[i - 1]
        }
    }

    /// `X_i`, the first `i` elements.
    pub fn prefix(&self, i: usize) -> ElementSet {
        ElementSet::from_indices(self.ordering[..i].iter().copied())
    }
}

/// Builds a resolving sequence by peeling from the top: starting from
/// `X_k = X`, take `x_i` in `X_i` maximizing `λ_{Σ(X_i)}(x_i)` (smallest
/// index on ties) and continue with `X_{i-1} = X_i \ {x_i}`.
pub fn resolving_sequence(g: &GroupTable, x: ElementSet) -> Result<ResolvingSequence, CritError> {
    if x.is_empty() {
        return Err(CritError::Precondition("resolving sequence of an empty set".into()));
    }
    if x.contains(0) {
        return Err(CritError::Precondition("resolving sequence input contains 0".into()));
    }
    let k = x.len();
    let mut ordering = vec![0; k];
    let mut lambdas = vec![0; k];
    let mut prefix_sizes = vec![0; k];
    let mut remaining = x;
    for i in (0..k).rev() {
        let b = sigma(g, remaining, false)?.full;
        // strict comparison keeps the smallest index among equal maxima
        let mut best = usize::MAX;
        let mut lam = 0;
        for y in remaining.iter() {
            let l = lambda(g, b, y);
            if best == usize::MAX || l > lam {
                best = y;
                lam = l;
            }
        }
        ordering[i] = best;
        lambdas[i] = lam;
        prefix_sizes[i] = b.len();
        remaining.remove(best);
    }

    let critical_index = (1..=k)
        .rev()
        .find(|&t| !generates(g, ElementSet::from_indices(ordering[..t - 1].iter().copied())))
        .expect("the empty prefix generates the trivial subgroup");
    Ok(ResolvingSequence {
        ordering,
        lambdas,
        critical_index,
        prefix_sizes,
    })
}
