//! Built-in groups, addressable by name.

use serde::{Deserialize, Serialize};

use crate::critnum::FormulaFacts;
use crate::group::{load_cayley, make_group, Descriptor, GroupError, GroupTable};

/// Cayley table of the alternating group on four points, the order-12
/// group without a subgroup of index 2.
pub const A4_TABLE: &str = include_str!("../fixtures/a4.cayley");
const A4_SOURCE: &str = "fixture:a4.cayley";

const DESCRIPTORS: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z15", "Z21", "Z25", "Z27", "Z45",
    "Z2xZ4", "Z3xZ3", "Z5xZ5", "Z9xZ3", "Z3xZ3xZ3", "Z3xZ15",
    "D3", "D4", "D5", "D6", "D7", "D8", "D16",
    "Dic2", "Dic3", "Dic4",
    "Z2xD3", "Z2xD4", "Z8:Z2(k=3)", "Z8:Z2(k=5)", "Z4:Z4(k=3)",
    "H27", "Z9:Z3(k=4)", "Z7:Z3(k=2)",
];

pub fn a4() -> GroupTable {
    load_cayley(A4_TABLE).expect("the bundled A4 table is valid")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// A group descriptor, or `fixture:<file>` for bundled tables.
    pub source: String,
    pub order: usize,
    pub abelian: bool,
    pub nilpotent: bool,
    pub has_index2_subgroup: bool,
    pub smallest_prime: Option<usize>,
}

impl CatalogEntry {
    fn of(g: &GroupTable, source: String) -> Self {
        let facts = FormulaFacts::of(g);
        CatalogEntry {
            name: g.name().to_string(),
            source,
            order: facts.order,
            abelian: facts.abelian,
            nilpotent: facts.nilpotent,
            has_index2_subgroup: facts.has_index2_subgroup,
            smallest_prime: facts.smallest_prime,
        }
    }

    pub fn build(&self) -> Result<GroupTable, GroupError> {
        if self.source == A4_SOURCE {
            Ok(a4())
        } else {
            make_group(&self.source.parse::<Descriptor>()?)
        }
    }

    /// Rebuilds the group and recomputes every flag; lists the ones that
    /// disagree.
    pub fn recheck(&self) -> Result<Vec<String>, GroupError> {
        let fresh = CatalogEntry::of(&self.build()?, self.source.clone());
        let mut bad = Vec::new();
        if fresh.order != self.order {
            bad.push("order".to_string());
        }
        if fresh.abelian != self.abelian {
            bad.push("abelian".to_string());
        }
        if fresh.nilpotent != self.nilpotent {
            bad.push("nilpotent".to_string());
        }
        if fresh.has_index2_subgroup != self.has_index2_subgroup {
            bad.push("has_index2_subgroup".to_string());
        }
        if fresh.smallest_prime != self.smallest_prime {
            bad.push("smallest_prime".to_string());
        }
        Ok(bad)
    }
}

/// Every built-in group with its flags computed from the table.
pub fn catalog_init() -> Vec<CatalogEntry> {
    let mut entries: Vec<CatalogEntry> = DESCRIPTORS
        .iter()
        .map(|d| {
            let desc: Descriptor = d.parse().expect("catalog descriptors parse");
            let g = make_group(&desc).expect("catalog groups are valid");
            CatalogEntry::of(&g, desc.to_string())
        })
        .collect();
    entries.push(CatalogEntry::of(&a4(), A4_SOURCE.to_string()));
    entries.sort_by(|a, b| (a.order, &a.name).cmp(&(b.order, &b.name)));
    entries
}

/// The built-in groups themselves, in catalog order.
pub fn catalog_groups() -> Vec<GroupTable> {
    catalog_init()
        .iter()
        .map(|e| e.build().expect("catalog groups are valid"))
        .collect()
}

/// Resolves a catalog name or any group descriptor.
pub fn resolve_group(name: &str) -> Result<GroupTable, GroupError> {
    if name.eq_ignore_ascii_case("A4") {
        return Ok(a4());
    }
    make_group(&name.parse::<Descriptor>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(name: &str) -> CatalogEntry {
        catalog_init().into_iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn flags() {
        let h = entry("H27");
        assert!(!h.abelian && h.nilpotent);
        assert_eq!(h.smallest_prime, Some(3));
        assert!(entry("D5").has_index2_subgroup);
        let z = entry("Z45");
        assert!(z.nilpotent && z.abelian);
        assert_eq!(z.smallest_prime, Some(3));
        let a = entry("A4");
        assert!(!a.has_index2_subgroup && !a.nilpotent);
        assert_eq!(a.order, 12);
    }

    #[test]
    fn names_resolve_to_same_table() {
        for e in catalog_init() {
            let g = resolve_group(&e.name).unwrap();
            assert_eq!(g.fingerprint(), e.build().unwrap().fingerprint(), "{}", e.name);
            assert!(e.recheck().unwrap().is_empty(), "{}", e.name);
        }
    }

    #[test]
    fn tampered_flag_is_reported() {
        let mut e = entry("D4");
        e.nilpotent = false;
        assert_eq!(e.recheck().unwrap(), vec!["nilpotent".to_string()]);
    }

    #[test]
    fn unknown_name() {
        assert!(resolve_group("Q8x").is_err());
    }
}
