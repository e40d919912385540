//! Closure operators on function classes: variable substitution (`VS`,
//! `VS_n`) and the m-local closure `Lo_m` with its finite-domain limit `Lo`.

use std::collections::HashSet;

use crate::class::FunctionClass;
use crate::config::Config;
use crate::domain::{pow_u128, unrank_into, Elem};
use crate::error::{Error, Result};
use crate::function::{check_function_budget, FunctionTable};
use crate::par;
use crate::satisfaction::{advance, binomial, combinations};

/// A map from the `n` argument positions of a function to `t` target
/// variables: source argument `i` reads target variable `assignment[i]`.
/// Positions are 0-based here; the literal syntax is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubstitutionMap {
    target_arity: usize,
    assignment: Vec<usize>,
}

impl SubstitutionMap {
    pub fn new(target_arity: usize, assignment: Vec<usize>) -> Result<Self> {
        if target_arity == 0 || assignment.is_empty() {
            return Err(Error::Range("substitution arities must be at least 1".into()));
        }
        if let Some(bad) = assignment.iter().find(|&&j| j >= target_arity) {
            return Err(Error::Range(format!(
                "substitution entry {bad} not below target arity {target_arity}"
            )));
        }
        Ok(SubstitutionMap {
            target_arity,
            assignment,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        SubstitutionMap::new(n, (0..n).collect())
    }

    pub fn source_arity(&self) -> usize {
        self.assignment.len()
    }

    pub fn target_arity(&self) -> usize {
        self.target_arity
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Every map from `n` positions to `t` variables, in lexicographic order.
    pub fn all(n: usize, t: usize) -> impl Iterator<Item = SubstitutionMap> {
        let mut next = (n > 0 && t > 0).then(|| vec![0usize; n]);
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut succ = cur.clone();
            if advance(&mut succ, t) {
                next = Some(succ);
            }
            Some(SubstitutionMap {
                target_arity: t,
                assignment: cur,
            })
        })
    }
}

/// `g(x_1..x_t) = f(x_{s(1)}, .., x_{s(n)})`.
pub fn substitute(f: &FunctionTable, s: &SubstitutionMap) -> Result<FunctionTable> {
    if s.source_arity() != f.arity() {
        return Err(Error::ArityMismatch {
            context: "variable substitution",
            expected: f.arity(),
            found: s.source_arity(),
        });
    }
    let a = f.dom().size();
    let t = s.target_arity;
    let points = f
        .dom()
        .power(t)
        .ok_or_else(|| Error::Range("substituted table too large".into()))?;
    let mut x = vec![0 as Elem; t];
    let table = (0..points)
        .map(|r| {
            unrank_into(r, a, &mut x);
            let src = s.assignment.iter().fold(0usize, |acc, &j| acc * a + x[j] as usize);
            f.eval_rank(src)
        })
        .collect();
    FunctionTable::new(f.dom(), f.cod(), t, table)
}

/// `VS_n(K_n)`: every n-ary function obtained from a member by a map `n -> n`.
pub fn vs_n_closure(k: &FunctionClass) -> Result<FunctionClass> {
    let mut out = FunctionClass::new(k.dom(), k.cod());
    let Some(n) = k.single_arity()? else {
        return Ok(out);
    };
    for f in k.iter() {
        for s in SubstitutionMap::all(n, n) {
            out.insert(substitute(f, &s)?)?;
        }
    }
    Ok(out)
}

/// `VS(K) = K O_A`, materialized at target arities `1..=cap`.
pub fn vs_closure(k: &FunctionClass, cap: usize, cfg: &Config) -> Result<FunctionClass> {
    if cap == 0 {
        return Err(Error::Range("arity cap must be at least 1".into()));
    }
    let mut out = FunctionClass::new(k.dom(), k.cod()).with_cap(cap);
    for n in k.arities() {
        for t in 1..=cap {
            let maps = pow_u128(t as u128, n as u128);
            if maps > cfg.max_functions as u128 {
                return Err(Error::Budget {
                    what: format!("substitution maps {n} -> {t}"),
                    count: maps,
                    limit: cfg.max_functions as u128,
                });
            }
            for f in k.at_arity(n) {
                for s in SubstitutionMap::all(n, t) {
                    out.insert(substitute(f, &s)?)?;
                }
            }
        }
    }
    Ok(out)
}

/// Value pattern of `f` on the points `d`, as a base-|B| number.
#[inline]
fn pattern(f: &FunctionTable, d: &[usize], b: u128) -> u128 {
    d.iter().fold(0u128, |acc, &p| acc * b + f.eval_rank(p) as u128)
}

/// `Lo_m(K)`: per arity `n` present in `K`, every n-ary function whose
/// restriction to each set of at most `m` points agrees with some member.
///
/// Only subsets of size exactly `min(m, |A|^n)` are inspected: agreement
/// on a larger set restricts to agreement on its subsets.
pub fn lo_m_closure(k: &FunctionClass, m: usize, cfg: &Config) -> Result<FunctionClass> {
    if m == 0 {
        return Err(Error::Range("local closure parameter must be at least 1".into()));
    }
    let (a, b) = (k.dom(), k.cod());
    let mut out = FunctionClass::new(a, b);
    for n in k.arities() {
        let count = check_function_budget(a, b, n, cfg)?;
        let space = a.pow(n);
        let d = m.min(space);
        let windows = binomial(space as u128, d as u128);
        if windows.saturating_mul(count as u128) > (cfg.max_functions as u128) << 8 {
            return Err(Error::Budget {
                what: format!("{d}-point restrictions of {n}-ary functions"),
                count: windows.saturating_mul(count as u128),
                limit: (cfg.max_functions as u128) << 8,
            });
        }
        let base = b.size() as u128;
        let members: Vec<&FunctionTable> = k.at_arity(n).collect();
        // witness index: value patterns of K_n on each window
        let mut index: Vec<(Vec<usize>, HashSet<u128>)> = Vec::new();
        combinations(space, d, &mut |w| {
            let pats = members.iter().map(|f| pattern(f, w, base)).collect();
            index.push((w.to_vec(), pats));
        });
        let found = par::filter_map_range(cfg.execution, count, |i| {
            let g = FunctionTable::from_index(a, b, n, i as u128).expect("index below count");
            index
                .iter()
                .all(|(w, pats)| pats.contains(&pattern(&g, w, base)))
                .then_some(g)
        });
        out.extend_unchecked(found);
    }
    Ok(out)
}

/// `Lo(K)`, which is the identity on finite domains; computed as `Lo_m`
/// at `m = max |A|^n` and checked against `K`.
pub fn lo_closure(k: &FunctionClass, cfg: &Config) -> Result<FunctionClass> {
    let Some(top) = k.max_arity() else {
        return Ok(k.clone());
    };
    let m = k
        .dom()
        .power(top)
        .ok_or_else(|| Error::Range("tuple space overflows".into()))?;
    let out = lo_m_closure(k, m, cfg)?;
    assert_eq!(&out, k, "full-domain local closure must be the identity");
    Ok(out)
}
