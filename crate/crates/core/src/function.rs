//! Explicit value tables of functions `A^n -> B`.

use std::fmt;

use crate::config::Config;
use crate::domain::{pow_u128, rank, Domain, Elem};
use crate::error::{Error, Result};

/// An n-ary B-valued function on A, stored as its value table.
///
/// `table[r]` is the value at the argument tuple of lexicographic rank `r`
/// (first coordinate most significant). Tables compare by value; the
/// derived order on `(dom, cod, arity, table)` is the table-rank order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionTable {
    dom: Domain,
    cod: Domain,
    arity: usize,
    table: Vec<Elem>,
}

impl FunctionTable {
    pub fn new(dom: Domain, cod: Domain, arity: usize, table: Vec<Elem>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Range("functions have arity at least 1".into()));
        }
        let expected = dom
            .power(arity)
            .ok_or_else(|| Error::Range(format!("{}^{arity} overflows", dom.size())))?;
        if table.len() != expected {
            return Err(Error::Invalid(format!(
                "expected {expected} entries for arity {arity} over a domain of size {}, got {}",
                dom.size(),
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v as usize >= cod.size()) {
            return Err(Error::Range(format!(
                "value {bad} not in codomain of size {}",
                cod.size()
            )));
        }
        Ok(FunctionTable { dom, cod, arity, table })
    }

    /// The function with table index `index` in table-rank order, i.e. the
    /// table spelling `index` in base `|B|`, first entry most significant.
    pub fn from_index(dom: Domain, cod: Domain, arity: usize, mut index: u128) -> Result<Self> {
        let len = dom
            .power(arity)
            .ok_or_else(|| Error::Range("function table too large".into()))?;
        let base = cod.size() as u128;
        let mut table = vec![0; len];
        for slot in table.iter_mut().rev() {
            *slot = (index % base) as Elem;
            index /= base;
        }
        if index != 0 {
            return Err(Error::Range("function index beyond |B|^(|A|^n)".into()));
        }
        FunctionTable::new(dom, cod, arity, table)
    }

    /// Builds a table by evaluating `f` at every argument tuple.
    pub fn from_fn<F>(dom: Domain, cod: Domain, arity: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[Elem]) -> Elem,
    {
        let len = dom
            .power(arity)
            .ok_or_else(|| Error::Range("function table too large".into()))?;
        let mut args = vec![0; arity];
        let mut table = Vec::with_capacity(len);
        for r in 0..len {
            crate::domain::unrank_into(r, dom.size(), &mut args);
            table.push(f(&args));
        }
        FunctionTable::new(dom, cod, arity, table)
    }

    pub fn dom(&self) -> Domain {
        self.dom
    }

    pub fn cod(&self) -> Domain {
        self.cod
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Position of this table in table-rank order.
    pub fn index(&self) -> u128 {
        let base = self.cod.size() as u128;
        self.table
            .iter()
            .fold(0u128, |acc, &v| acc.saturating_mul(base).saturating_add(v as u128))
    }

    pub fn eval(&self, args: &[Elem]) -> Result<Elem> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                context: "function application",
                expected: self.arity,
                found: args.len(),
            });
        }
        Ok(self.table[rank(self.dom, args)?])
    }

    #[inline]
    pub fn eval_rank(&self, r: usize) -> Elem {
        self.table[r]
    }
}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}{:?}", self.arity, self.table)
    }
}

impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.table)
    }
}

/// The n-ary projection onto coordinate `i` (1-based), an operation on `dom`.
pub fn projection(dom: Domain, n: usize, i: usize) -> Result<FunctionTable> {
    if i == 0 || i > n {
        return Err(Error::Range(format!("projection coordinate {i} not in 1..={n}")));
    }
    FunctionTable::from_fn(dom, dom, n, |args| args[i - 1])
}

/// `|B|^(|A|^n)`, saturating.
pub fn function_count(dom: Domain, cod: Domain, n: usize) -> u128 {
    let points = match dom.power(n) {
        Some(p) => p as u128,
        None => return u128::MAX,
    };
    pow_u128(cod.size() as u128, points)
}

pub(crate) fn check_function_budget(dom: Domain, cod: Domain, n: usize, cfg: &Config) -> Result<usize> {
    let count = function_count(dom, cod, n);
    if count > cfg.max_functions as u128 {
        return Err(Error::Budget {
            what: format!(
                "all {n}-ary functions from a {}-set to a {}-set",
                dom.size(),
                cod.size()
            ),
            count,
            limit: cfg.max_functions as u128,
        });
    }
    Ok(count as usize)
}

/// Lazily yields every n-ary function `A -> B` in table-rank order.
pub fn enumerate_functions(dom: Domain, cod: Domain, n: usize, cfg: &Config) -> Result<FunctionIter> {
    if n == 0 {
        return Err(Error::Range("functions have arity at least 1".into()));
    }
    let count = check_function_budget(dom, cod, n, cfg)?;
    Ok(FunctionIter {
        dom,
        cod,
        arity: n,
        next: Some(vec![0; dom.pow(n)]),
        remaining: count,
    })
}

/// Iterator returned by [`enumerate_functions`].
pub struct FunctionIter {
    dom: Domain,
    cod: Domain,
    arity: usize,
    next: Option<Vec<Elem>>,
    remaining: usize,
}

impl Iterator for FunctionIter {
    type Item = FunctionTable;

    fn next(&mut self) -> Option<FunctionTable> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let top = self.cod.size() as Elem;
        // odometer step, last entry least significant
        let mut carried = true;
        for slot in succ.iter_mut().rev() {
            *slot += 1;
            if *slot < top {
                carried = false;
                break;
            }
            *slot = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        self.remaining -= 1;
        Some(FunctionTable {
            dom: self.dom,
            cod: self.cod,
            arity: self.arity,
            table: current,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for FunctionIter {}
