//! Finite groups given by full Cayley tables.
//!
//! Groups are written additively: `op(a, b)` is `a + b`, index 0 is the
//! identity and `inv(g)` is `-g`. Nothing here assumes commutativity.

mod cayley;
mod constructors;
mod subgroup;

use thiserror::Error;

use crate::set::{ElementSet, MAX_ORDER};

pub use cayley::{load_cayley, save_cayley};
pub use constructors::{make_group, Descriptor};
pub use subgroup::{
    all_subgroups, center, closure_set, generates, is_nilpotent, is_normal, quotient, subgroup_closure,
    subgroups_of_index, upper_central_series, Quotient, SubgroupInfo,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group parameters: {0}")]
    InvalidParameters(String),
    #[error("group order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("cayley parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("identity/inverse axiom violated: {0}")]
    IdentityInverse(String),
    #[error("associativity violated at ({a}, {b}, {c}): ({a}+{b})+{c} = {lhs} but {a}+({b}+{c}) = {rhs}")]
    NonAssociative {
        a: usize,
        b: usize,
        c: usize,
        lhs: usize,
        rhs: usize,
    },
    #[error("not a Latin square: {axis} {index} repeats element {value}")]
    NotLatin {
        axis: &'static str,
        index: usize,
        value: usize,
    },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("unknown group descriptor: {0}")]
    UnknownDescriptor(String),
}

/// A validated finite group of order `n <= 128`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    labels: Vec<String>,
    n: usize,
    // op[a * n + b] = a + b
    op: Vec<u8>,
    // cols[b * n + a] = a + b, so right translation by b reads one contiguous row
    cols: Vec<u8>,
    inv: Vec<u8>,
    abelian: bool,
    /// Original index of each element when a loaded table had to be re-indexed.
    reindexed_from: Option<Vec<usize>>,
}

impl GroupTable {
    /// Builds a group from a raw table, moving the identity to index 0 and
    /// validating every group axiom.
    pub fn from_table(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidParameters("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidParameters(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::InvalidParameters(format!(
                    "row {r} contains out-of-range entry {v}"
                )));
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(GroupError::InvalidParameters(format!(
                    "{} labels for a table of order {n}",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };

        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| GroupError::IdentityInverse("no two-sided identity element".into()))?;

        // swap the identity into slot 0
        let (table, labels, reindexed_from) = if identity == 0 {
            (table, labels, None)
        } else {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(0, identity);
            // perm is an involution: new index i holds old element perm[i]
            let t = (0..n)
                .map(|i| (0..n).map(|j| perm[table[perm[i]][perm[j]]]).collect())
                .collect();
            let l = (0..n).map(|i| labels[perm[i]].clone()).collect();
            (t, l, Some(perm))
        };

        let mut g = Self::assemble(name.into(), labels, n, |a, b| table[a][b])?;
        g.reindexed_from = reindexed_from;
        Ok(g)
    }

    /// Builds and validates a group whose identity is already at index 0.
    pub(crate) fn from_fn(
        name: String,
        labels: Vec<String>,
        n: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        Self::assemble(name, labels, n, f)
    }

    fn assemble(
        name: String,
        labels: Vec<String>,
        n: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        let mut op = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                op[a * n + b] = f(a, b) as u8;
            }
        }
        let at = |a: usize, b: usize| op[a * n + b] as usize;

        if let Some(g) = (0..n).find(|&g| at(0, g) != g || at(g, 0) != g) {
            return Err(GroupError::IdentityInverse(format!(
                "index 0 is not an identity (fails at element {g})"
            )));
        }
        let mut inv = vec![0u8; n];
        for (g, slot) in inv.iter_mut().enumerate() {
            match (0..n).find(|&x| at(g, x) == 0 && at(x, g) == 0) {
                Some(x) => *slot = x as u8,
                None => {
                    return Err(GroupError::IdentityInverse(format!(
                        "element {g} has no two-sided inverse"
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    let lhs = at(ab, c);
                    let rhs = at(a, at(b, c));
                    if lhs != rhs {
                        return Err(GroupError::NonAssociative { a, b, c, lhs, rhs });
                    }
                }
            }
        }
        // implied by the checks above for finite tables; kept for a precise diagnosis
        for r in 0..n {
            let mut seen_row = ElementSet::EMPTY;
            let mut seen_col = ElementSet::EMPTY;
            for c in 0..n {
                let v = at(r, c);
                if seen_row.contains(v) {
                    return Err(GroupError::NotLatin {
                        axis: "row",
                        index: r,
                        value: v,
                    });
                }
                seen_row.insert(v);
                let w = at(c, r);
                if seen_col.contains(w) {
                    return Err(GroupError::NotLatin {
                        axis: "column",
                        index: r,
                        value: w,
                    });
                }
                seen_col.insert(w);
            }
        }

        let mut cols = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                cols[b * n + a] = op[a * n + b];
            }
        }
        let abelian = (0..n).all(|a| (a + 1..n).all(|b| op[a * n + b] == op[b * n + a]));
        Ok(GroupTable {
            name,
            labels,
            n,
            op,
            cols,
            inv,
            abelian,
            reindexed_from: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn reindexed_from(&self) -> Option<&[usize]> {
        self.reindexed_from.as_deref()
    }

    /// `a + b`.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.n + b] as usize
    }

    /// `-g`.
    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g] as usize
    }

    /// `a - b`, i.e. `a + (-b)`.
    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.op(a, self.inv(b))
    }

    /// Element order of `g`.
    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.op(x, g);
            k += 1;
        }
        k
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    /// All non-identity elements.
    pub fn nonzero_set(&self) -> ElementSet {
        self.full_set().without(0)
    }

    /// Right translate `B + x = {b + x : b in B}`.
    #[inline]
    pub fn translate_right(&self, set: ElementSet, x: usize) -> ElementSet {
        let col = &self.cols[x * self.n..(x + 1) * self.n];
        let mut out = 0u128;
        for b in set.iter() {
            out |= 1u128 << col[b];
        }
        ElementSet::from_bits(out)
    }

    /// Left translate `x + B = {x + b : b in B}`.
    #[inline]
    pub fn translate_left(&self, x: usize, set: ElementSet) -> ElementSet {
        let row = &self.op[x * self.n..(x + 1) * self.n];
        let mut out = 0u128;
        for b in set.iter() {
            out |= 1u128 << row[b];
        }
        ElementSet::from_bits(out)
    }

    /// `-B`.
    pub fn negate(&self, set: ElementSet) -> ElementSet {
        set.iter().map(|g| self.inv(g)).collect()
    }

    /// Rows of the table as nested vectors.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.op(a, b)).collect())
            .collect()
    }

    /// Stable digest of the table contents, used to key cached results.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        h.update(&self.op);
        let d = h.finalize();
        d.iter().take(12).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
    }

    #[test]
    fn cyclic_from_table() {
        let g = GroupTable::from_table("Z5", cyclic_table(5), None).unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.is_abelian());
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(g.op(i, j), (i + j) % 5);
            }
            assert_eq!(g.op(i, g.inv(i)), 0);
        }
        assert_eq!(g.element_order(1), 5);
        assert_eq!(g.element_order(0), 1);
    }

    #[test]
    fn identity_moved_to_zero() {
        // Z3 with elements relabelled so that the identity sits at index 1
        let relabel = [1usize, 2, 0];
        let t: Vec<Vec<usize>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let a = relabel.iter().position(|&r| r == i).unwrap();
                        let b = relabel.iter().position(|&r| r == j).unwrap();
                        relabel[(a + b) % 3]
                    })
                    .collect()
            })
            .collect();
        let g = GroupTable::from_table("Z3'", t, None).unwrap();
        assert_eq!(g.reindexed_from(), Some(&[1usize, 0, 2][..]));
        assert_eq!(g.op(1, g.inv(1)), 0);
        assert_eq!(g.labels()[0], "1");
    }

    #[test]
    fn two_by_two_without_inverse() {
        let err = GroupTable::from_table("bad", vec![vec![0, 1], vec![1, 1]], None).unwrap_err();
        assert!(matches!(err, GroupError::IdentityInverse(_)));
        assert!(err.to_string().contains("identity/inverse axiom violated"));
    }

    #[test]
    fn no_identity() {
        let err = GroupTable::from_table("bad", vec![vec![1, 1], vec![1, 1]], None).unwrap_err();
        assert!(matches!(err, GroupError::IdentityInverse(_)));
        // Z2 written with its identity at index 1 is accepted after re-indexing
        let z2 = GroupTable::from_table("Z2", vec![vec![1, 0], vec![0, 1]], None).unwrap();
        assert_eq!(z2.op(1, 1), 0);
    }

    #[test]
    fn out_of_range_entry() {
        let err = GroupTable::from_table("bad", vec![vec![0, 2], vec![1, 0]], None).unwrap_err();
        assert!(matches!(err, GroupError::InvalidParameters(_)));
    }

    #[test]
    fn translations() {
        let g = GroupTable::from_table("Z7", cyclic_table(7), None).unwrap();
        let b = ElementSet::from_indices([0, 1, 2]);
        assert_eq!(g.translate_right(b, 3).to_vec(), vec![3, 4, 5]);
        assert_eq!(g.translate_left(6, b).to_vec(), vec![0, 1, 6]);
        assert_eq!(g.negate(b).to_vec(), vec![0, 5, 6]);
    }
}
