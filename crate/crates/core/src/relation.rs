//! Relations, constraints and the distinguished constraints.

use std::fmt;

use crate::bitset::BitSet;
use crate::domain::{rank, unrank_into, Domain, Elem};
use crate::error::{Error, Result};

/// Relations whose tuple space exceeds this many tuples are refused.
pub const MAX_TUPLE_SPACE: usize = 1 << 28;

/// An m-ary relation over a domain, as a set of tuple ranks.
///
/// Relations of the same domain and arity are ordered by their
/// member sets read as binary numbers (tuple rank `r` has weight `2^r`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    domain: Domain,
    arity: usize,
    members: BitSet,
}

impl Relation {
    pub fn empty(domain: Domain, arity: usize) -> Result<Self> {
        let space = tuple_space(domain, arity)?;
        Ok(Relation {
            domain,
            arity,
            members: BitSet::new(space),
        })
    }

    /// `D^m`.
    pub fn full(domain: Domain, arity: usize) -> Result<Self> {
        let space = tuple_space(domain, arity)?;
        Ok(Relation {
            domain,
            arity,
            members: BitSet::full(space),
        })
    }

    /// All m-tuples with every coordinate equal.
    pub fn diagonal(domain: Domain, arity: usize) -> Result<Self> {
        let mut r = Relation::empty(domain, arity)?;
        for e in domain.elements() {
            r.insert(&vec![e; arity])?;
        }
        Ok(r)
    }

    pub fn from_tuples<I, T>(domain: Domain, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[Elem]>,
    {
        let mut r = Relation::empty(domain, arity)?;
        for t in tuples {
            r.insert(t.as_ref())?;
        }
        Ok(r)
    }

    pub fn from_ranks<I: IntoIterator<Item = usize>>(domain: Domain, arity: usize, ranks: I) -> Result<Self> {
        let mut r = Relation::empty(domain, arity)?;
        for k in ranks {
            if k >= r.members.capacity() {
                return Err(Error::Range(format!(
                    "tuple rank {k} not below {}",
                    r.members.capacity()
                )));
            }
            r.members.insert(k);
        }
        Ok(r)
    }

    /// Builds a relation from a bit mask over tuple ranks; requires `|D|^m <= 64`.
    pub fn from_mask(domain: Domain, arity: usize, mask: u64) -> Result<Self> {
        let space = tuple_space(domain, arity)?;
        if space > 64 {
            return Err(Error::Range(format!("tuple space {space} exceeds a mask")));
        }
        if space < 64 && mask >> space != 0 {
            return Err(Error::Range(format!("mask {mask:#x} exceeds {space} tuples")));
        }
        Ok(Relation {
            domain,
            arity,
            members: BitSet::from_mask(space, mask),
        })
    }

    pub fn to_mask(&self) -> Option<u64> {
        self.members.to_mask()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    /// Number of tuples in `D^m`.
    pub fn space(&self) -> usize {
        self.members.capacity()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn insert(&mut self, tuple: &[Elem]) -> Result<bool> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                context: "relation tuple",
                expected: self.arity,
                found: tuple.len(),
            });
        }
        let k = rank(self.domain, tuple)?;
        Ok(self.members.insert(k))
    }

    pub(crate) fn insert_rank(&mut self, k: usize) -> bool {
        self.members.insert(k)
    }

    pub(crate) fn remove_rank(&mut self, k: usize) -> bool {
        self.members.remove(k)
    }

    pub fn contains(&self, tuple: &[Elem]) -> bool {
        tuple.len() == self.arity && rank(self.domain, tuple).is_ok_and(|k| self.members.contains(k))
    }

    #[inline]
    pub fn contains_rank(&self, k: usize) -> bool {
        self.members.contains(k)
    }

    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    /// Member tuples in rank order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        let size = self.domain.size();
        let arity = self.arity;
        self.members.iter().map(move |k| {
            let mut t = vec![0; arity];
            unrank_into(k, size, &mut t);
            t
        })
    }

    fn check_compatible(&self, other: &Relation, context: &'static str) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(context));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                context,
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &Relation) -> Result<bool> {
        self.check_compatible(other, "relation inclusion")?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_compatible(other, "relation union")?;
        let mut out = self.clone();
        out.members.union_with(&other.members);
        Ok(out)
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.check_compatible(other, "relation intersection")?;
        let mut out = self.clone();
        out.members.intersect_with(&other.members);
        Ok(out)
    }
}

fn tuple_space(domain: Domain, arity: usize) -> Result<usize> {
    if arity == 0 {
        return Err(Error::Range("relations have arity at least 1".into()));
    }
    match domain.power(arity) {
        Some(n) if n <= MAX_TUPLE_SPACE => Ok(n),
        _ => Err(Error::Range(format!(
            "tuple space {}^{arity} is too large",
            domain.size()
        ))),
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `{(0,1),(1,1)}` style listing in rank order.
impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.tuples().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (j, e) in t.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// An m-ary A-to-B constraint `(R, S)`.
///
/// Ordered by antecedent first, then consequent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    antecedent: Relation,
    consequent: Relation,
}

impl Constraint {
    pub fn new(antecedent: Relation, consequent: Relation) -> Result<Self> {
        if antecedent.arity != consequent.arity {
            return Err(Error::ArityMismatch {
                context: "constraint",
                expected: antecedent.arity,
                found: consequent.arity,
            });
        }
        Ok(Constraint { antecedent, consequent })
    }

    /// Builds an m-ary constraint from antecedent and consequent masks.
    pub fn from_masks(a: Domain, b: Domain, arity: usize, ant: u64, con: u64) -> Result<Self> {
        Constraint::new(Relation::from_mask(a, arity, ant)?, Relation::from_mask(b, arity, con)?)
    }

    pub fn antecedent(&self) -> &Relation {
        &self.antecedent
    }

    pub fn consequent(&self) -> &Relation {
        &self.consequent
    }

    pub fn arity(&self) -> usize {
        self.antecedent.arity
    }

    /// The domain `A`.
    pub fn source(&self) -> Domain {
        self.antecedent.domain
    }

    /// The domain `B`.
    pub fn target(&self) -> Domain {
        self.consequent.domain
    }

    pub fn into_parts(self) -> (Relation, Relation) {
        (self.antecedent, self.consequent)
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.antecedent, self.consequent)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.antecedent, self.consequent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalKind {
    /// `(diag(A,m), diag(B,m))`.
    Equality,
    /// `(∅, ∅)` at the requested arity.
    Empty,
    /// `(A^m, B^m)`.
    Trivial,
}

pub fn canonical_constraint(kind: CanonicalKind, a: Domain, b: Domain, m: usize) -> Result<Constraint> {
    let (ant, con) = match kind {
        CanonicalKind::Equality => (Relation::diagonal(a, m)?, Relation::diagonal(b, m)?),
        CanonicalKind::Empty => (Relation::empty(a, m)?, Relation::empty(b, m)?),
        CanonicalKind::Trivial => (Relation::full(a, m)?, Relation::full(b, m)?),
    };
    Constraint::new(ant, con)
}

/// Whether `c` is a relaxation of `c0`: `R ⊆ R0` and `S ⊇ S0`.
pub fn relaxation_of(c: &Constraint, c0: &Constraint) -> Result<bool> {
    if c.arity() != c0.arity() {
        return Err(Error::ArityMismatch {
            context: "relaxation",
            expected: c0.arity(),
            found: c.arity(),
        });
    }
    Ok(c.antecedent.is_subset(&c0.antecedent)? && c0.consequent.is_subset(&c.consequent)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Domain = Domain::BOOL;

    fn leq() -> Relation {
        Relation::from_tuples(B, 2, [[0, 0], [0, 1], [1, 1]]).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let eq = canonical_constraint(CanonicalKind::Equality, B, B, 2).unwrap();
        let diag = Relation::from_tuples(B, 2, [[0, 0], [1, 1]]).unwrap();
        assert_eq!(eq.antecedent(), &diag);
        assert_eq!(eq.consequent(), &diag);

        let empty = canonical_constraint(CanonicalKind::Empty, B, B, 3).unwrap();
        assert_eq!(empty.arity(), 3);
        assert!(empty.antecedent().is_empty() && empty.consequent().is_empty());

        let triv = canonical_constraint(CanonicalKind::Trivial, B, B, 1).unwrap();
        assert_eq!(triv.antecedent().len(), 2);
        assert_eq!(triv.consequent().len(), 2);
    }

    #[test]
    fn relaxation_examples() {
        let e = canonical_constraint(CanonicalKind::Empty, B, B, 2).unwrap();
        assert!(relaxation_of(&e, &e).unwrap());

        let single = Relation::from_tuples(B, 2, [[0, 1]]).unwrap();
        let c = Constraint::new(single, leq()).unwrap();
        let c0 = Constraint::new(leq(), leq()).unwrap();
        assert!(relaxation_of(&c, &c0).unwrap());

        let shrunk = Constraint::new(leq(), Relation::from_tuples(B, 2, [[0, 0]]).unwrap()).unwrap();
        assert!(!relaxation_of(&shrunk, &c0).unwrap());

        let unary = canonical_constraint(CanonicalKind::Trivial, B, B, 1).unwrap();
        assert!(relaxation_of(&unary, &c0).is_err());
    }

    #[test]
    fn mismatched_constraint_arity() {
        let r1 = Relation::full(B, 1).unwrap();
        assert!(Constraint::new(r1, leq()).is_err());
    }

    #[test]
    fn relaxation_is_partial_order_on_binary_boolean() {
        let all: Vec<Constraint> = (0..16u64)
            .flat_map(|r| (0..16u64).map(move |s| Constraint::from_masks(B, B, 2, r, s).unwrap()))
            .collect();
        assert_eq!(all.len(), 256);
        let rel = |x: &Constraint, y: &Constraint| relaxation_of(x, y).unwrap();
        for x in &all {
            assert!(rel(x, x));
            for y in &all {
                if rel(x, y) && rel(y, x) {
                    assert_eq!(x, y);
                }
            }
        }
        // transitivity over masks directly: 256^3 relaxation tests
        for x in &all {
            for y in all.iter().filter(|y| rel(x, y)) {
                for z in all.iter().filter(|z| rel(y, z)) {
                    assert!(rel(x, z));
                }
            }
        }
    }

    #[test]
    fn display_lists_tuples() {
        assert_eq!(leq().to_string(), "{(0,0),(0,1),(1,1)}");
    }
}
