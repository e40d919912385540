//! Brute-force reference implementations written directly from the
//! definitions, sharing no code with the library beyond its data types.
#![allow(dead_code)]

use galois_core::{Constraint, Elem, FunctionTable, Relation};

pub fn tuples(size: usize, arity: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size as Elem).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn members(r: &Relation) -> Vec<Vec<Elem>> {
    tuples(r.domain().size(), r.arity())
        .into_iter()
        .filter(|t| r.contains(t))
        .collect()
}

pub fn eval(f: &FunctionTable, args: &[Elem]) -> Elem {
    let size = f.dom().size();
    let idx = args.iter().fold(0usize, |acc, &x| acc * size + x as usize);
    f.table()[idx]
}

/// `fR ⊆ S` by enumerating every n-tuple of rows of `R`.
pub fn satisfies(f: &FunctionTable, c: &Constraint) -> bool {
    let rows = members(c.antecedent());
    let m = c.arity();
    let mut choice = vec![0usize; f.arity()];
    if rows.is_empty() {
        return true;
    }
    loop {
        let image: Vec<Elem> = (0..m)
            .map(|i| {
                let args: Vec<Elem> = choice.iter().map(|&k| rows[k][i]).collect();
                eval(f, &args)
            })
            .collect();
        if !c.consequent().contains(&image) {
            return false;
        }
        let mut pos = choice.len();
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < rows.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Every function `A^n -> B` built from explicit value lists.
pub fn all_functions(a: usize, b: usize, n: usize) -> Vec<FunctionTable> {
    let dom = galois_core::Domain::new(a).unwrap();
    let cod = galois_core::Domain::new(b).unwrap();
    tuples(b, a.pow(n as u32))
        .into_iter()
        .map(|table| FunctionTable::new(dom, cod, n, table).unwrap())
        .collect()
}

/// Pointwise-monotone Boolean tables: `x <= y` coordinatewise implies
/// `f(x) <= f(y)`.
pub fn is_monotone(f: &FunctionTable) -> bool {
    let pts = tuples(2, f.arity());
    pts.iter().all(|x| {
        pts.iter()
            .filter(|y| x.iter().zip(y.iter()).all(|(p, q)| p <= q))
            .all(|y| eval(f, x) <= eval(f, y))
    })
}

/// Every constraint over the given domain sizes at arity `m`.
pub fn all_constraints(a: usize, b: usize, m: usize) -> Vec<Constraint> {
    let (da, db) = (
        galois_core::Domain::new(a).unwrap(),
        galois_core::Domain::new(b).unwrap(),
    );
    let (pa, pb) = (a.pow(m as u32), b.pow(m as u32));
    let mut out = Vec::new();
    for ant in 0..1u64 << pa {
        for con in 0..1u64 << pb {
            out.push(Constraint::from_masks(da, db, m, ant, con).unwrap());
        }
    }
    out
}

pub fn is_relaxation(c: &Constraint, of: &Constraint) -> bool {
    members(c.antecedent()).iter().all(|t| of.antecedent().contains(t))
        && members(of.consequent()).iter().all(|t| c.consequent().contains(t))
}
