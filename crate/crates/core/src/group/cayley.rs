//! Plain-text Cayley table format.
//!
//! ```text
//! # optional comments
//! # name: A4
//! 12
//! labels: e a b ...
//! 0 1 2 ...
//! ...
//! ```
//!
//! Row `g` lists `g + h` for every `h`. Tables whose identity is not at
//! index 0 are re-indexed on load; `save_cayley` records that permutation
//! in a `# reindexed:` comment.

use super::{GroupError, GroupTable};

pub fn load_cayley(text: &str) -> Result<GroupTable, GroupError> {
    let mut name = None;
    let mut order = None;
    let mut labels = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("name:") {
                name = Some(n.trim().to_string());
            }
            continue;
        }
        let Some(n) = order else {
            let n: usize = line.parse().map_err(|_| GroupError::Parse {
                line: lineno,
                msg: format!("expected the group order, found {line:?}"),
            })?;
            if n == 0 {
                return Err(GroupError::Parse {
                    line: lineno,
                    msg: "group order must be positive".into(),
                });
            }
            order = Some(n);
            continue;
        };
        if let Some(rest) = line.strip_prefix("labels:") {
            if labels.is_some() || !rows.is_empty() {
                return Err(GroupError::Parse {
                    line: lineno,
                    msg: "labels line must directly follow the order".into(),
                });
            }
            labels = Some(rest.split_whitespace().map(str::to_string).collect::<Vec<_>>());
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| GroupError::Parse {
                    line: lineno,
                    msg: format!("bad table entry {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(GroupError::Parse {
                line: lineno,
                msg: format!("row has {} entries, expected {n}", row.len()),
            });
        }
        if rows.len() == n {
            return Err(GroupError::Parse {
                line: lineno,
                msg: "more rows than the declared order".into(),
            });
        }
        rows.push(row);
    }

    let n = order.ok_or(GroupError::Parse {
        line: 0,
        msg: "missing group order".into(),
    })?;
    if rows.len() != n {
        return Err(GroupError::Parse {
            line: 0,
            msg: format!("found {} rows, expected {n}", rows.len()),
        });
    }
    GroupTable::from_table(name.unwrap_or_else(|| format!("G{n}")), rows, labels)
}

pub fn save_cayley(g: &GroupTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("# name: {}\n", g.name()));
    if let Some(perm) = g.reindexed_from() {
        let p: Vec<String> = perm.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("# reindexed: original index of each element: {}\n", p.join(" ")));
    }
    out.push_str(&format!("{}\n", g.order()));
    out.push_str(&format!("labels: {}\n", g.labels().join(" ")));
    for row in g.rows() {
        let r: Vec<String> = row.iter().map(|i| i.to_string()).collect();
        out.push_str(&r.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, Descriptor};

    #[test]
    fn round_trip_cyclic3() {
        let g = make_group(&Descriptor::Cyclic(3)).unwrap();
        let text = save_cayley(&g);
        let back = load_cayley(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn round_trip_nonabelian() {
        for d in ["D4", "Dic3", "H27", "Z9:Z3(k=4)"] {
            let g = make_group(&d.parse().unwrap()).unwrap();
            assert_eq!(load_cayley(&save_cayley(&g)).unwrap(), g);
        }
    }

    #[test]
    fn identity_inverse_violation() {
        let err = load_cayley("2\n0 1\n1 1\n").unwrap_err();
        assert!(err.to_string().contains("identity/inverse axiom violated"), "{err}");
    }

    #[test]
    fn broken_associativity_reports_triple() {
        let d4 = make_group(&Descriptor::Dihedral(4)).unwrap();
        let mut rows = d4.rows();
        // swap two entries of one row inside the non-identity block: rows stay
        // permutations, inverses survive, associativity breaks
        rows[1].swap(4, 5);
        let text = {
            let mut t = String::from("8\n");
            for r in &rows {
                t.push_str(&r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                t.push('\n');
            }
            t
        };
        let err = load_cayley(&text).unwrap_err();
        match err {
            GroupError::NonAssociative { a, b, c, lhs, rhs } => {
                // replay the witness against the mutated table
                let at = |x: usize, y: usize| rows[x][y];
                assert_eq!(at(at(a, b), c), lhs);
                assert_eq!(at(a, at(b, c)), rhs);
                assert_ne!(lhs, rhs);
            }
            other => panic!("expected associativity failure, got {other}"),
        }
    }

    #[test]
    fn single_cell_edit_reports_triple() {
        let d4 = make_group(&Descriptor::Dihedral(4)).unwrap();
        let mut rows = d4.rows();
        rows[2][5] = rows[2][6];
        let err = GroupTable::from_table("D4?", rows, None).unwrap_err();
        assert!(matches!(err, GroupError::NonAssociative { .. }), "{err}");
    }

    #[test]
    fn reindexing_is_recorded() {
        // Z2 with identity at index 1
        let g = load_cayley("# name: flipped\n2\nlabels: a e\n1 0\n0 1\n").unwrap();
        assert_eq!(g.labels(), &["e".to_string(), "a".to_string()]);
        let text = save_cayley(&g);
        assert!(text.contains("# reindexed:"));
        let again = load_cayley(&text).unwrap();
        assert_eq!(again.rows(), g.rows());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(load_cayley(""), Err(GroupError::Parse { .. })));
        assert!(matches!(load_cayley("2\n0 1\n"), Err(GroupError::Parse { .. })));
        assert!(matches!(load_cayley("2\n0 1\n1 x\n"), Err(GroupError::Parse { .. })));
        assert!(matches!(load_cayley("2\n0 1 1\n1 0\n"), Err(GroupError::Parse { .. })));
    }

    #[test]
    fn a4_fixture_loads() {
        let g = load_cayley(include_str!("../../fixtures/a4.cayley")).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.name(), "A4");
        assert!(!g.is_abelian());
    }
}
