//! Fixed-seed instance generators and the structured Boolean battery.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::class::{ConstraintSet, FunctionClass};
use crate::domain::{Domain, Elem};
use crate::error::Result;
use crate::function::FunctionTable;
use crate::minors::{Scheme, Slot};
use crate::relation::{Constraint, Relation};

/// Deterministic generator used by every sampler.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_function<R: Rng>(rng: &mut R, dom: Domain, cod: Domain, n: usize) -> Result<FunctionTable> {
    let len = dom.power(n).unwrap_or(0);
    let table = (0..len).map(|_| rng.gen_range(0..cod.size()) as Elem).collect();
    FunctionTable::new(dom, cod, n, table)
}

/// `size` independent draws of n-ary functions (duplicates collapse).
pub fn random_class<R: Rng>(rng: &mut R, dom: Domain, cod: Domain, n: usize, size: usize) -> Result<FunctionClass> {
    let mut k = FunctionClass::new(dom, cod);
    for _ in 0..size {
        k.insert(random_function(rng, dom, cod, n)?)?;
    }
    Ok(k)
}

pub fn random_relation<R: Rng>(rng: &mut R, domain: Domain, m: usize, density: f64) -> Result<Relation> {
    let mut r = Relation::empty(domain, m)?;
    for k in 0..r.space() {
        if rng.gen_bool(density) {
            r.insert_rank(k);
        }
    }
    Ok(r)
}

pub fn random_constraint<R: Rng>(rng: &mut R, a: Domain, b: Domain, m: usize) -> Result<Constraint> {
    let da = rng.gen_range(0.2..0.8);
    let db = rng.gen_range(0.2..0.9);
    Constraint::new(random_relation(rng, a, m, da)?, random_relation(rng, b, m, db)?)
}

pub fn random_constraint_set<R: Rng>(
    rng: &mut R,
    a: Domain,
    b: Domain,
    m: usize,
    size: usize,
) -> Result<ConstraintSet> {
    let mut t = ConstraintSet::new(a, b);
    for _ in 0..size {
        t.insert(random_constraint(rng, a, b, m)?)?;
    }
    Ok(t)
}

/// A uniformly random subset of `Q_m` (each constraint kept with
/// probability `p`).
pub fn random_subset_of_q<R: Rng>(rng: &mut R, a: Domain, b: Domain, m: usize, p: f64) -> Result<ConstraintSet> {
    let (pa, pb) = (a.pow(m), b.pow(m));
    let mut t = ConstraintSet::new(a, b);
    for ant in 0..1u64 << pa {
        for con in 0..1u64 << pb {
            if rng.gen_bool(p) {
                t.insert(Constraint::from_masks(a, b, m, ant, con)?)?;
            }
        }
    }
    Ok(t)
}

/// A scheme into `target` coordinates over the given source arities with
/// exactly `v` indeterminates available (some may go unused).
pub fn random_scheme<R: Rng>(rng: &mut R, target: usize, sources: &[usize], v: usize) -> Result<Scheme> {
    let family = sources
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| {
                    let k = rng.gen_range(0..target + v);
                    if k < target {
                        Slot::Coord(k)
                    } else {
                        Slot::Indet(k - target)
                    }
                })
                .collect()
        })
        .collect();
    Scheme::new(target, v, family)
}

/// Order of shuffled indices, for sampling without replacement.
pub fn shuffled<R: Rng>(rng: &mut R, len: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..len).collect();
    v.shuffle(rng);
    v
}

fn bin(tuples: &[[Elem; 2]]) -> Relation {
    Relation::from_tuples(Domain::BOOL, 2, tuples.iter()).expect("Boolean pairs")
}

/// Binary Boolean constraint sets covering order, equality, graphs of
/// unary maps, constant preservation and degenerate cases.
pub fn structured_binary_battery() -> Vec<(&'static str, ConstraintSet)> {
    let leq = bin(&[[0, 0], [0, 1], [1, 1]]);
    let geq = bin(&[[0, 0], [1, 0], [1, 1]]);
    let eq = bin(&[[0, 0], [1, 1]]);
    let neq = bin(&[[0, 1], [1, 0]]);
    let zero = bin(&[[0, 0]]);
    let one = bin(&[[1, 1]]);
    let to_zero = bin(&[[0, 0], [1, 0]]);
    let to_one = bin(&[[0, 1], [1, 1]]);
    let nand = bin(&[[0, 0], [0, 1], [1, 0]]);
    let or = bin(&[[0, 1], [1, 0], [1, 1]]);
    let full = Relation::full(Domain::BOOL, 2).expect("arity 2");
    let empty = Relation::empty(Domain::BOOL, 2).expect("arity 2");
    let c = |r: &Relation, s: &Relation| Constraint::new(r.clone(), s.clone()).expect("same arity");
    let sets: Vec<(&'static str, Vec<Constraint>)> = vec![
        ("order", vec![c(&leq, &leq)]),
        ("reverse order", vec![c(&geq, &geq)]),
        ("equality", vec![c(&eq, &eq)]),
        ("negation graph", vec![c(&neq, &neq)]),
        ("order and negation", vec![c(&leq, &leq), c(&neq, &neq)]),
        ("zero preserving", vec![c(&zero, &zero)]),
        ("one preserving", vec![c(&one, &one)]),
        ("constant preserving", vec![c(&zero, &zero), c(&one, &one)]),
        ("zero graph", vec![c(&to_zero, &to_zero)]),
        ("one graph", vec![c(&to_one, &to_one)]),
        ("identity to negation", vec![c(&eq, &neq)]),
        ("negation to identity", vec![c(&neq, &eq)]),
        ("nand relation", vec![c(&nand, &nand)]),
        ("or relation", vec![c(&or, &or)]),
        ("order to equality", vec![c(&leq, &eq)]),
        ("full to order", vec![c(&full, &leq)]),
        ("order to reverse", vec![c(&leq, &geq)]),
        ("full to empty", vec![c(&full, &empty)]),
        ("trivial", vec![c(&full, &full)]),
        ("single pair", vec![c(&bin(&[[0, 1]]), &bin(&[[0, 1]]))]),
        ("diagonal to zero", vec![c(&eq, &zero)]),
        ("order and zero", vec![c(&leq, &leq), c(&zero, &zero)]),
        ("nand and or", vec![c(&nand, &nand), c(&or, &or)]),
        ("empty set", vec![]),
    ];
    sets.into_iter()
        .map(|(name, cs)| {
            let t = ConstraintSet::from_constraints(Domain::BOOL, Domain::BOOL, cs).expect("Boolean constraints");
            (name, t)
        })
        .collect()
}
