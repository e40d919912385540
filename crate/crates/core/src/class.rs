//! Arity-indexed collections of functions and of constraints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::function::FunctionTable;
use crate::relation::Constraint;

/// Operations shared by function classes and constraint sets, used by the
/// generic closure-law audit.
pub trait ObjectSet: Clone + PartialEq + Debug + Send + Sync {
    type Item: Ord + Clone + Debug + Send + Sync;

    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn is_subset(&self, other: &Self) -> bool;
    fn union(&self, other: &Self) -> Self;
    /// Members of `self` missing from `other`, in canonical order.
    fn difference(&self, other: &Self) -> Vec<Self::Item>;
}

/// A class of B-valued functions on A, grouped by arity.
///
/// Empty arity buckets are never stored, so equality is plain member
/// equality. The optional `arity_cap` records which arities were
/// materialized; it takes no part in equality.
#[derive(Clone, Debug)]
pub struct FunctionClass {
    dom: Domain,
    cod: Domain,
    arity_cap: Option<usize>,
    by_arity: BTreeMap<usize, BTreeSet<FunctionTable>>,
}

impl PartialEq for FunctionClass {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.by_arity == other.by_arity
    }
}

impl Eq for FunctionClass {}

impl FunctionClass {
    pub fn new(dom: Domain, cod: Domain) -> Self {
        FunctionClass {
            dom,
            cod,
            arity_cap: None,
            by_arity: BTreeMap::new(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.arity_cap = Some(cap);
        self.by_arity.retain(|&n, _| n <= cap);
        self
    }

    pub fn from_tables<I>(dom: Domain, cod: Domain, tables: I) -> Result<Self>
    where
        I: IntoIterator<Item = FunctionTable>,
    {
        let mut class = FunctionClass::new(dom, cod);
        for f in tables {
            class.insert(f)?;
        }
        Ok(class)
    }

    pub fn dom(&self) -> Domain {
        self.dom
    }

    pub fn cod(&self) -> Domain {
        self.cod
    }

    pub fn arity_cap(&self) -> Option<usize> {
        self.arity_cap
    }

    pub fn insert(&mut self, f: FunctionTable) -> Result<bool> {
        if f.dom() != self.dom || f.cod() != self.cod {
            return Err(Error::DomainMismatch("function class member"));
        }
        if let Some(cap) = self.arity_cap {
            if f.arity() > cap {
                return Err(Error::Range(format!("arity {} above the class cap {cap}", f.arity())));
            }
        }
        Ok(self.by_arity.entry(f.arity()).or_default().insert(f))
    }

    pub fn contains(&self, f: &FunctionTable) -> bool {
        self.by_arity.get(&f.arity()).is_some_and(|s| s.contains(f))
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_arity.keys().copied()
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.by_arity.keys().next_back().copied()
    }

    /// Members of arity `n`, in table-rank order.
    pub fn at_arity(&self, n: usize) -> impl Iterator<Item = &FunctionTable> + '_ {
        self.by_arity.get(&n).into_iter().flatten()
    }

    /// The n-ary part as its own class.
    pub fn restrict(&self, n: usize) -> FunctionClass {
        let mut out = FunctionClass::new(self.dom, self.cod);
        if let Some(s) = self.by_arity.get(&n) {
            out.by_arity.insert(n, s.clone());
        }
        out
    }

    /// Members in (arity, table-rank) order.
    pub fn iter(&self) -> impl Iterator<Item = &FunctionTable> + '_ {
        self.by_arity.values().flatten()
    }

    /// Requires every member to share one arity; returns it (`None` when empty).
    pub fn single_arity(&self) -> Result<Option<usize>> {
        match self.by_arity.len() {
            0 => Ok(None),
            1 => Ok(self.by_arity.keys().next().copied()),
            _ => Err(Error::Invalid(
                "class mixes arities where a single arity is required".into(),
            )),
        }
    }

    pub fn len(&self) -> usize {
        self.by_arity.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_arity.is_empty()
    }

    pub(crate) fn extend_unchecked<I: IntoIterator<Item = FunctionTable>>(&mut self, it: I) {
        for f in it {
            self.by_arity.entry(f.arity()).or_default().insert(f);
        }
    }
}

impl ObjectSet for FunctionClass {
    type Item = FunctionTable;

    fn len(&self) -> usize {
        FunctionClass::len(self)
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|f| other.contains(f))
    }

    fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.extend_unchecked(other.iter().cloned());
        out
    }

    fn difference(&self, other: &Self) -> Vec<FunctionTable> {
        self.iter().filter(|f| !other.contains(f)).cloned().collect()
    }
}

/// A set of A-to-B constraints, grouped by arity.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    a: Domain,
    b: Domain,
    arity_cap: Option<usize>,
    by_arity: BTreeMap<usize, BTreeSet<Constraint>>,
}

impl PartialEq for ConstraintSet {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.by_arity == other.by_arity
    }
}

impl Eq for ConstraintSet {}

impl ConstraintSet {
    pub fn new(a: Domain, b: Domain) -> Self {
        ConstraintSet {
            a,
            b,
            arity_cap: None,
            by_arity: BTreeMap::new(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.arity_cap = Some(cap);
        self.by_arity.retain(|&m, _| m <= cap);
        self
    }

    pub fn from_constraints<I>(a: Domain, b: Domain, constraints: I) -> Result<Self>
    where
        I: IntoIterator<Item = Constraint>,
    {
        let mut set = ConstraintSet::new(a, b);
        for c in constraints {
            set.insert(c)?;
        }
        Ok(set)
    }

    /// The source domain `A`.
    pub fn source(&self) -> Domain {
        self.a
    }

    /// The target domain `B`.
    pub fn target(&self) -> Domain {
        self.b
    }

    pub fn arity_cap(&self) -> Option<usize> {
        self.arity_cap
    }

    pub fn insert(&mut self, c: Constraint) -> Result<bool> {
        if c.source() != self.a || c.target() != self.b {
            return Err(Error::DomainMismatch("constraint set member"));
        }
        if let Some(cap) = self.arity_cap {
            if c.arity() > cap {
                return Err(Error::Range(format!("arity {} above the set cap {cap}", c.arity())));
            }
        }
        Ok(self.by_arity.entry(c.arity()).or_default().insert(c))
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.by_arity.get(&c.arity()).is_some_and(|s| s.contains(c))
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_arity.keys().copied()
    }

    pub fn at_arity(&self, m: usize) -> impl Iterator<Item = &Constraint> + '_ {
        self.by_arity.get(&m).into_iter().flatten()
    }

    pub fn restrict(&self, m: usize) -> ConstraintSet {
        let mut out = ConstraintSet::new(self.a, self.b);
        if let Some(s) = self.by_arity.get(&m) {
            out.by_arity.insert(m, s.clone());
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> + '_ {
        self.by_arity.values().flatten()
    }

    pub fn single_arity(&self) -> Result<Option<usize>> {
        match self.by_arity.len() {
            0 => Ok(None),
            1 => Ok(self.by_arity.keys().next().copied()),
            _ => Err(Error::Invalid(
                "set mixes arities where a single arity is required".into(),
            )),
        }
    }

    pub fn len(&self) -> usize {
        self.by_arity.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_arity.is_empty()
    }

    pub(crate) fn extend_unchecked<I: IntoIterator<Item = Constraint>>(&mut self, it: I) {
        for c in it {
            self.by_arity.entry(c.arity()).or_default().insert(c);
        }
    }
}

impl ObjectSet for ConstraintSet {
    type Item = Constraint;

    fn len(&self) -> usize {
        ConstraintSet::len(self)
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|c| other.contains(c))
    }

    fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.extend_unchecked(other.iter().cloned());
        out
    }

    fn difference(&self, other: &Self) -> Vec<Constraint> {
        self.iter().filter(|c| !other.contains(c)).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::projection;
    use crate::relation::{canonical_constraint, CanonicalKind};

    const B: Domain = Domain::BOOL;

    #[test]
    fn class_membership_and_order() {
        let mut k = FunctionClass::new(B, B);
        k.insert(projection(B, 2, 2).unwrap()).unwrap();
        k.insert(projection(B, 2, 1).unwrap()).unwrap();
        k.insert(projection(B, 1, 1).unwrap()).unwrap();
        assert!(!k.insert(projection(B, 1, 1).unwrap()).unwrap());
        let tables: Vec<_> = k.iter().map(|f| f.table().to_vec()).collect();
        assert_eq!(tables, vec![vec![0, 1], vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
        assert!(k.single_arity().is_err());
        assert_eq!(k.restrict(2).len(), 2);
    }

    #[test]
    fn cap_and_domain_checks() {
        let mut k = FunctionClass::new(B, B).with_cap(1);
        assert!(k.insert(projection(B, 2, 1).unwrap()).is_err());
        let three = Domain::new(3).unwrap();
        assert!(k.insert(projection(three, 1, 1).unwrap()).is_err());

        let mut t = ConstraintSet::new(B, B);
        let c3 = canonical_constraint(CanonicalKind::Empty, three, B, 1).unwrap();
        assert!(t.insert(c3).is_err());
    }

    #[test]
    fn equality_ignores_cap() {
        let a = FunctionClass::new(B, B);
        let b = FunctionClass::new(B, B).with_cap(3);
        assert_eq!(a, b);
    }
}
