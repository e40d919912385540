//! Finite domains, tuples and their lexicographic ranks.

use std::fmt;

use crate::error::{Error, Result};

/// Elements of a domain are the indices `0..size`.
pub type Elem = u32;

/// A finite non-empty set `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    size: u32,
}

impl Domain {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Range("domain size must be at least 1".into()));
        }
        let size = u32::try_from(size).map_err(|_| Error::Range(format!("domain size {size}")))?;
        Ok(Domain { size })
    }

    /// The two-element domain `{0, 1}`.
    pub const BOOL: Domain = Domain { size: 2 };

    #[inline]
    pub fn size(&self) -> usize {
        self.size as usize
    }

    /// `size^m`, or `None` on overflow.
    pub fn power(&self, m: usize) -> Option<usize> {
        checked_pow(self.size(), m)
    }

    /// `size^m`; panics on overflow. Only for sizes already known to fit.
    #[inline]
    pub(crate) fn pow(&self, m: usize) -> usize {
        self.power(m).expect("tuple space overflows usize")
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.size)
    }
}

/// A domain together with the name it carries in instance files.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    pub name: String,
    pub domain: Domain,
}

impl DomainSpec {
    pub fn new(name: impl Into<String>, size: usize) -> Result<Self> {
        Ok(DomainSpec {
            name: name.into(),
            domain: Domain::new(size)?,
        })
    }

    pub fn size(&self) -> usize {
        self.domain.size()
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

/// `base^exp` as u128, saturating at `u128::MAX`.
pub(crate) fn pow_u128(base: u128, exp: u128) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

/// Lexicographic rank of `entries`, the first coordinate most significant.
pub fn rank(domain: Domain, entries: &[Elem]) -> Result<usize> {
    let size = domain.size();
    let mut r: usize = 0;
    for &e in entries {
        if e as usize >= size {
            return Err(Error::Range(format!("element {e} not in domain of size {size}")));
        }
        r = r
            .checked_mul(size)
            .and_then(|r| r.checked_add(e as usize))
            .ok_or_else(|| Error::Range("tuple rank overflows".into()))?;
    }
    Ok(r)
}

/// Inverse of [`rank`].
pub fn unrank(rank: usize, domain: Domain, arity: usize) -> Result<Vec<Elem>> {
    let total = domain
        .power(arity)
        .ok_or_else(|| Error::Range("tuple space overflows".into()))?;
    if rank >= total {
        return Err(Error::Range(format!(
            "rank {rank} not below {total} = {}^{arity}",
            domain.size()
        )));
    }
    let mut out = vec![0; arity];
    unrank_into(rank, domain.size(), &mut out);
    Ok(out)
}

#[inline]
pub(crate) fn unrank_into(mut rank: usize, size: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (rank % size) as Elem;
        rank /= size;
    }
}

/// An m-tuple over a domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    domain: Domain,
    entries: Vec<Elem>,
}

impl Tuple {
    pub fn new(domain: Domain, entries: Vec<Elem>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Range("tuples have arity at least 1".into()));
        }
        rank(domain, &entries)?;
        Ok(Tuple { domain, entries })
    }

    pub fn from_rank(domain: Domain, arity: usize, r: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Range("tuples have arity at least 1".into()));
        }
        Ok(Tuple {
            domain,
            entries: unrank(r, domain, arity)?,
        })
    }

    pub fn rank(&self) -> usize {
        rank(self.domain, &self.entries).expect("validated at construction")
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let d = Domain::BOOL;
        assert_eq!(rank(d, &[0, 1]).unwrap(), 1);
        assert_eq!(rank(d, &[1, 0]).unwrap(), 2);
        assert_eq!(unrank(3, d, 2).unwrap(), vec![1, 1]);
    }

    #[test]
    fn out_of_range() {
        let d = Domain::BOOL;
        assert!(matches!(rank(d, &[0, 2]), Err(Error::Range(_))));
        assert!(matches!(unrank(4, d, 2), Err(Error::Range(_))));
        assert!(Domain::new(0).is_err());
        assert!(Tuple::new(d, vec![]).is_err());
    }

    #[test]
    fn roundtrip_exhaustive() {
        for size in 1..=3 {
            let d = Domain::new(size).unwrap();
            for m in 1..=4 {
                for r in 0..d.pow(m) {
                    let t = Tuple::from_rank(d, m, r).unwrap();
                    assert_eq!(t.rank(), r);
                    assert_eq!(Tuple::new(d, t.entries().to_vec()).unwrap(), t);
                }
            }
        }
    }
}
