//! Exhaustive search for a non-basis among all `t`-subsets of a pool.
//!
//! Subsets are visited in lexicographic order by depth-first search. Each
//! node carries a sound under-approximation of `Σ(prefix)`, which for
//! non-abelian groups adds the new element on either side of every known
//! sum. Once that approximation is the whole group, every completion of the
//! prefix is a basis and the subtree is counted without being visited. Only
//! leaves whose approximation falls short get the exact closure.
//!
//! The top two levels are split into tasks run on the rayon pool. A task
//! that finds a non-basis publishes its index; later tasks stop early,
//! earlier ones always finish, so the reported witness is the
//! lexicographically first non-basis and the count is reproducible.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::arith::binomial;
use crate::group::GroupTable;
use crate::set::ElementSet;
use crate::sumset::{sigma_of, SigmaConfig, SumsetError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Lexicographically first non-basis of the requested size, if any.
    pub witness: Option<ElementSet>,
    /// Subsets decided so far in lexicographic order (all of them when no
    /// witness exists, otherwise those up to and including the witness).
    pub checked: u64,
}

/// Searches the `size`-subsets of `G \ {0}` for one whose closure is not `G`.
pub fn find_non_basis(g: &GroupTable, size: usize) -> Result<SearchOutcome, SumsetError> {
    find_non_basis_in(g, g.nonzero_set(), size, &SigmaConfig::default())
}

pub fn find_non_basis_in(
    g: &GroupTable,
    pool: ElementSet,
    size: usize,
    cfg: &SigmaConfig,
) -> Result<SearchOutcome, SumsetError> {
    let cands = pool.to_vec();
    if size > cands.len() {
        return Ok(SearchOutcome {
            witness: None,
            checked: 0,
        });
    }
    let all = g.full_set();
    let search = Search {
        g,
        cands: &cands,
        size,
        all,
        cfg,
        binom: BinomTable::new(cands.len()),
    };
    if size == 0 {
        // Σ(∅) is empty
        return Ok(SearchOutcome {
            witness: Some(ElementSet::EMPTY),
            checked: 1,
        });
    }

    let depth = size.min(2);
    let mut prefixes: Vec<Vec<usize>> = Vec::new();
    let m = cands.len();
    if depth == 1 {
        prefixes.extend((0..=m - size).map(|i| vec![i]));
    } else {
        for i in 0..=m - size {
            for j in i + 1..=m - size + 1 {
                prefixes.push(vec![i, j]);
            }
        }
    }

    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<Result<TaskResult, SumsetError>> = prefixes
        .par_iter()
        .enumerate()
        .map(|(task, prefix)| {
            if best.load(Ordering::Relaxed) < task {
                return Ok(TaskResult::cancelled());
            }
            let mut worker = Worker {
                search: &search,
                chosen: Vec::with_capacity(size),
                checked: 0,
                task,
                best: &best,
                cancelled: false,
            };
            let mut acc = ElementSet::EMPTY;
            for &i in prefix {
                let a = cands[i];
                acc = search.step(acc, a);
                worker.chosen.push(a);
            }
            let found = worker.descend(prefix[prefix.len() - 1] + 1, acc)?;
            if found.is_some() {
                best.fetch_min(task, Ordering::Relaxed);
            }
            Ok(TaskResult {
                witness: found,
                checked: worker.checked,
                cancelled: worker.cancelled,
            })
        })
        .collect();

    let mut checked = 0u64;
    for r in results {
        let r = r?;
        debug_assert!(!r.cancelled || r.witness.is_none());
        checked = checked.saturating_add(r.checked);
        if r.witness.is_some() {
            return Ok(SearchOutcome {
                witness: r.witness,
                checked,
            });
        }
    }
    Ok(SearchOutcome {
        witness: None,
        checked,
    })
}

struct TaskResult {
    witness: Option<ElementSet>,
    checked: u64,
    cancelled: bool,
}

impl TaskResult {
    fn cancelled() -> Self {
        TaskResult {
            witness: None,
            checked: 0,
            cancelled: true,
        }
    }
}

struct BinomTable {
    rows: Vec<Vec<u64>>,
}

impl BinomTable {
    fn new(m: usize) -> Self {
        BinomTable {
            rows: (0..=m)
                .map(|a| (0..=m).map(|b| binomial(a, b)).collect())
                .collect(),
        }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> u64 {
        self.rows[a][b]
    }
}

struct Search<'a> {
    g: &'a GroupTable,
    cands: &'a [usize],
    size: usize,
    all: ElementSet,
    cfg: &'a SigmaConfig,
    binom: BinomTable,
}

impl Search<'_> {
    #[inline]
    fn step(&self, acc: ElementSet, a: usize) -> ElementSet {
        let right = self.g.translate_right(acc, a);
        if self.g.is_abelian() {
            acc.union(right).with(a)
        } else {
            acc.union(right)
                .union(self.g.translate_left(a, acc))
                .with(a)
        }
    }
}

struct Worker<'a> {
    search: &'a Search<'a>,
    chosen: Vec<usize>,
    checked: u64,
    task: usize,
    best: &'a AtomicUsize,
    cancelled: bool,
}

impl Worker<'_> {
    fn descend(&mut self, start: usize, acc: ElementSet) -> Result<Option<ElementSet>, SumsetError> {
        let s = self.search;
        let need = s.size - self.chosen.len();
        let remaining = s.cands.len() - start;
        if acc == s.all {
            self.checked += s.binom.get(remaining, need);
            return Ok(None);
        }
        if need == 0 {
            self.checked += 1;
            return self.leaf(acc);
        }
        for i in start..=s.cands.len() - need {
            if need >= 2 && self.best.load(Ordering::Relaxed) < self.task {
                self.cancelled = true;
                return Ok(None);
            }
            let a = s.cands[i];
            let next = s.step(acc, a);
            self.chosen.push(a);
            let found = self.descend(i + 1, next)?;
            self.chosen.pop();
            if found.is_some() || self.cancelled {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, approx: ElementSet) -> Result<Option<ElementSet>, SumsetError> {
        let s = self.search;
        let set = ElementSet::from_indices(self.chosen.iter().copied());
        if s.g.is_abelian() {
            // the prefix recurrence is exact for abelian groups
            return Ok((approx != s.all).then_some(set));
        }
        let exact = sigma_of(s.g, &self.chosen, false, s.cfg)?;
        Ok((exact.full != s.all).then_some(set))
    }
}
