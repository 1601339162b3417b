//! Constructors for the group families the catalog is built from.

use std::fmt;
use std::str::FromStr;

use super::{GroupError, GroupTable};
use crate::arith::{gcd, is_prime, pow_mod};
use crate::set::MAX_ORDER;

/// A recipe for building a group.
///
/// The `Display` form is the canonical group name (`Z9`, `D7`, `Dic2`,
/// `Z9:Z3(k=4)`, `H27`, `Z2xD3`); `FromStr` accepts both that form and the
/// call form (`cyclic(9)`, `semidirect_cyclic(9,3,4)`, `direct_product(Z3,Z3)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Cyclic(usize),
    DirectProduct(Box<Descriptor>, Box<Descriptor>),
    /// Dihedral group of order `2m`.
    Dihedral(usize),
    /// Dicyclic group of order `4m`; `Dicyclic(2)` is the quaternion group.
    Dicyclic(usize),
    /// `Z_a ⋊ Z_b` with the generator of `Z_b` acting as `x -> k x`.
    SemidirectCyclic { a: usize, b: usize, k: usize },
    /// Upper unitriangular 3x3 matrices over `Z_p`, order `p^3`.
    Heisenberg(usize),
}

impl Descriptor {
    pub fn product(a: Descriptor, b: Descriptor) -> Descriptor {
        Descriptor::DirectProduct(Box::new(a), Box::new(b))
    }

    pub fn order(&self) -> usize {
        match self {
            Descriptor::Cyclic(n) => *n,
            Descriptor::DirectProduct(a, b) => a.order().saturating_mul(b.order()),
            Descriptor::Dihedral(m) => 2 * m,
            Descriptor::Dicyclic(m) => 4 * m,
            Descriptor::SemidirectCyclic { a, b, .. } => a * b,
            Descriptor::Heisenberg(p) => p * p * p,
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Cyclic(n) => write!(f, "Z{n}"),
            Descriptor::DirectProduct(a, b) => {
                if matches!(**a, Descriptor::DirectProduct(..)) {
                    write!(f, "({a})x{b}")
                } else {
                    write!(f, "{a}x{b}")
                }
            }
            Descriptor::Dihedral(m) => write!(f, "D{m}"),
            Descriptor::Dicyclic(m) => write!(f, "Dic{m}"),
            Descriptor::SemidirectCyclic { a, b, k } => write!(f, "Z{a}:Z{b}(k={k})"),
            Descriptor::Heisenberg(p) => write!(f, "H{}", p * p * p),
        }
    }
}

impl FromStr for Descriptor {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            src: compact.as_bytes(),
            pos: 0,
        };
        let d = p
            .product()
            .ok_or_else(|| GroupError::UnknownDescriptor(s.to_string()))?;
        if p.pos != p.src.len() {
            return Err(GroupError::UnknownDescriptor(s.to_string()));
        }
        Ok(d)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn eat(&mut self, tok: &str) -> bool {
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn product(&mut self) -> Option<Descriptor> {
        let left = self.factor()?;
        if self.eat("x") {
            let right = self.product()?;
            Some(Descriptor::product(left, right))
        } else {
            Some(left)
        }
    }

    fn factor(&mut self) -> Option<Descriptor> {
        if self.eat("(") {
            let d = self.product()?;
            return self.eat(")").then_some(d);
        }
        if self.eat("cyclic(") {
            let n = self.number()?;
            return self.eat(")").then_some(Descriptor::Cyclic(n));
        }
        if self.eat("dihedral(") {
            let n = self.number()?;
            return self.eat(")").then_some(Descriptor::Dihedral(n));
        }
        if self.eat("dicyclic(") {
            let n = self.number()?;
            return self.eat(")").then_some(Descriptor::Dicyclic(n));
        }
        if self.eat("heisenberg(") {
            let n = self.number()?;
            return self.eat(")").then_some(Descriptor::Heisenberg(n));
        }
        if self.eat("semidirect_cyclic(") {
            let a = self.number()?;
            self.eat(",").then_some(())?;
            let b = self.number()?;
            self.eat(",").then_some(())?;
            let k = self.number()?;
            return self
                .eat(")")
                .then_some(Descriptor::SemidirectCyclic { a, b, k });
        }
        if self.eat("direct_product(") {
            let a = self.product()?;
            self.eat(",").then_some(())?;
            let b = self.product()?;
            return self.eat(")").then_some(Descriptor::product(a, b));
        }
        if self.eat("Dic") {
            return Some(Descriptor::Dicyclic(self.number()?));
        }
        if self.eat("D") {
            return Some(Descriptor::Dihedral(self.number()?));
        }
        if self.eat("H") {
            let order = self.number()?;
            let p = (1..=order).find(|p| p * p * p >= order)?;
            return (p * p * p == order).then_some(Descriptor::Heisenberg(p));
        }
        if self.eat("Z") {
            let a = self.number()?;
            if self.eat(":Z") {
                let b = self.number()?;
                self.eat("(k=").then_some(())?;
                let k = self.number()?;
                return self
                    .eat(")")
                    .then_some(Descriptor::SemidirectCyclic { a, b, k });
            }
            return Some(Descriptor::Cyclic(a));
        }
        None
    }
}

fn power_label(base: &str, i: usize) -> String {
    match i {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}{i}"),
    }
}

fn word_label(parts: &[String]) -> String {
    let s: String = parts.concat();
    if s.is_empty() {
        "e".into()
    } else {
        s
    }
}

/// Builds and validates the group described by `desc`.
pub fn make_group(desc: &Descriptor) -> Result<GroupTable, GroupError> {
    let order = desc.order();
    if order > MAX_ORDER {
        return Err(GroupError::TooLarge(order));
    }
    let name = desc.to_string();
    match *desc {
        Descriptor::Cyclic(n) => {
            if n < 1 {
                return Err(GroupError::InvalidParameters("cyclic(n) needs n >= 1".into()));
            }
            let labels = (0..n).map(|i| i.to_string()).collect();
            GroupTable::from_fn(name, labels, n, |a, b| (a + b) % n)
        }
        Descriptor::DirectProduct(ref a, ref b) => {
            let ga = make_group(a)?;
            let gb = make_group(b)?;
            let m = gb.order();
            let n = ga.order() * m;
            let labels = (0..n)
                .map(|i| format!("({},{})", ga.labels()[i / m], gb.labels()[i % m]))
                .collect();
            GroupTable::from_fn(name, labels, n, |x, y| {
                ga.op(x / m, y / m) * m + gb.op(x % m, y % m)
            })
        }
        Descriptor::Dihedral(m) => {
            if m < 1 {
                return Err(GroupError::InvalidParameters("dihedral(m) needs m >= 1".into()));
            }
            // index i + m*j  <->  r^i s^j
            let labels = (0..2 * m)
                .map(|x| word_label(&[power_label("r", x % m), power_label("s", x / m)]))
                .collect();
            GroupTable::from_fn(name, labels, 2 * m, |x, y| {
                let (i, j) = (x % m, x / m);
                let (k, l) = (y % m, y / m);
                let rot = if j == 0 { (i + k) % m } else { (i + m - k) % m };
                rot + m * ((j + l) % 2)
            })
        }
        Descriptor::Dicyclic(m) => {
            if m < 1 {
                return Err(GroupError::InvalidParameters("dicyclic(m) needs m >= 1".into()));
            }
            // index i + 2m*j  <->  a^i x^j,  a^{2m} = 1, x^2 = a^m, x a x^-1 = a^-1
            let h = 2 * m;
            let labels = (0..2 * h)
                .map(|x| word_label(&[power_label("a", x % h), power_label("x", x / h)]))
                .collect();
            GroupTable::from_fn(name, labels, 2 * h, |x, y| {
                let (i, j) = (x % h, x / h);
                let (k, l) = (y % h, y / h);
                match (j, l) {
                    (0, _) => (i + k) % h + h * l,
                    (_, 0) => (i + h - k) % h + h,
                    _ => (i + h - k + m) % h,
                }
            })
        }
        Descriptor::SemidirectCyclic { a, b, k } => {
            if a < 1 || b < 1 {
                return Err(GroupError::InvalidParameters(
                    "semidirect_cyclic(a, b, k) needs a, b >= 1".into(),
                ));
            }
            if gcd(k % a, a) != 1 && a > 1 {
                return Err(GroupError::InvalidParameters(format!(
                    "gcd({k}, {a}) != 1 in semidirect_cyclic({a}, {b}, {k})"
                )));
            }
            if pow_mod(k, b, a) != 1 % a {
                return Err(GroupError::InvalidParameters(format!(
                    "{k}^{b} is not 1 mod {a} in semidirect_cyclic({a}, {b}, {k})"
                )));
            }
            let powers: Vec<usize> = (0..b).map(|y| pow_mod(k, y, a)).collect();
            let labels = (0..a * b)
                .map(|x| format!("({},{})", x % a, x / a))
                .collect();
            // (x, y) + (x', y') = (x + k^y x', y + y')
            GroupTable::from_fn(name, labels, a * b, |u, v| {
                let (x, y) = (u % a, u / a);
                let (x2, y2) = (v % a, v / a);
                (x + powers[y] * x2) % a + a * ((y + y2) % b)
            })
        }
        Descriptor::Heisenberg(p) => {
            if p < 3 || !is_prime(p) {
                return Err(GroupError::InvalidParameters(format!(
                    "heisenberg(p) needs an odd prime, got {p}"
                )));
            }
            // index a p^2 + b p + c  <->  [[1, a, c], [0, 1, b], [0, 0, 1]]
            let labels = (0..p * p * p)
                .map(|x| format!("[{},{},{}]", x / (p * p), (x / p) % p, x % p))
                .collect();
            GroupTable::from_fn(name, labels, p * p * p, |u, v| {
                let (a, b, c) = (u / (p * p), (u / p) % p, u % p);
                let (a2, b2, c2) = (v / (p * p), (v / p) % p, v % p);
                let na = (a + a2) % p;
                let nb = (b + b2) % p;
                let nc = (c + c2 + a * b2) % p;
                na * p * p + nb * p + nc
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupTable {
        make_group(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn cyclic_defining_formula() {
        let z5 = g("cyclic(5)");
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(z5.op(i, j), (i + j) % 5);
            }
        }
        assert_eq!(z5.name(), "Z5");
    }

    #[test]
    fn dihedral3_is_nonabelian_order_6() {
        let d3 = g("dihedral(3)");
        assert_eq!(d3.order(), 6);
        assert!(!d3.is_abelian());
        assert_eq!(d3.name(), "D3");
        // three reflections of order 2, two rotations of order 3: the shape of S_3
        let orders: Vec<usize> = (0..6).map(|x| d3.element_order(x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 3);
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 2);
    }

    #[test]
    fn semidirect_9_3_4() {
        let grp = g("semidirect_cyclic(9,3,4)");
        assert_eq!(grp.order(), 27);
        assert!(!grp.is_abelian());
        assert_eq!(grp.name(), "Z9:Z3(k=4)");
        // one commuting failure witnessed directly
        assert_ne!(grp.op(1, 9), grp.op(9, 1));
    }

    #[test]
    fn quaternion_has_single_involution() {
        let q = g("Dic2");
        assert_eq!(q.order(), 8);
        assert!(!q.is_abelian());
        let involutions = (1..8).filter(|&x| q.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn heisenberg_exponent_p() {
        let h = g("heisenberg(3)");
        assert_eq!(h.name(), "H27");
        assert!(!h.is_abelian());
        assert!((1..27).all(|x| h.element_order(x) == 3));
    }

    #[test]
    fn products() {
        let d = Descriptor::product(Descriptor::Cyclic(2), Descriptor::Dihedral(3));
        assert_eq!(d.to_string(), "Z2xD3");
        let grp = make_group(&d).unwrap();
        assert_eq!(grp.order(), 12);
        assert!(!grp.is_abelian());
        let klein = g("Z2xZ2");
        assert!(klein.is_abelian());
    }

    #[test]
    fn invalid_parameters() {
        let bad = [
            Descriptor::SemidirectCyclic { a: 9, b: 3, k: 2 },
            Descriptor::SemidirectCyclic { a: 9, b: 3, k: 3 },
            Descriptor::Dihedral(0),
            Descriptor::Cyclic(0),
            Descriptor::Heisenberg(2),
            Descriptor::Heisenberg(4),
        ];
        for d in bad {
            assert!(
                matches!(make_group(&d), Err(GroupError::InvalidParameters(_))),
                "{d:?}"
            );
        }
        assert!(matches!(
            make_group(&Descriptor::Cyclic(200)),
            Err(GroupError::TooLarge(200))
        ));
    }

    #[test]
    fn name_round_trip() {
        for s in [
            "Z27",
            "Z9xZ3",
            "Z3xZ3xZ3",
            "(Z3xZ3)xZ3",
            "H27",
            "Z9:Z3(k=4)",
            "Dic3",
            "D8",
            "Z2xD4",
            "Z7:Z3(k=2)",
        ] {
            let d: Descriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        let d: Descriptor = "direct_product(cyclic(3), direct_product(cyclic(3),cyclic(3)))"
            .parse()
            .unwrap();
        assert_eq!(d.to_string(), "Z3xZ3xZ3");
        assert!("Q8".parse::<Descriptor>().is_err());
        assert!("H26".parse::<Descriptor>().is_err());
        assert!("Z3x".parse::<Descriptor>().is_err());
    }
}
