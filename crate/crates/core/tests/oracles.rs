mod common;

use common::*;
use galois_core::constraint_closures::{lo_n_closure, relaxation_closure};
use galois_core::function_closures::{lo_m_closure, vs_n_closure};
use galois_core::minors::{tight_minor, Scheme, Slot};
use galois_core::sampling::{random_class, random_constraint_set, random_scheme, rng};
use galois_core::satisfaction::{csf_m, fsc_n};
use galois_core::*;
use rand::Rng;

const B: Domain = Domain::BOOL;

fn leq_set() -> ConstraintSet {
    let leq = Relation::from_tuples(B, 2, [[0, 0], [0, 1], [1, 1]]).unwrap();
    ConstraintSet::from_constraints(B, B, [Constraint::new(leq.clone(), leq).unwrap()]).unwrap()
}

#[test]
fn monotone_functions_counted_independently() {
    let cfg = Config::default();
    let t = leq_set();
    let expected = [3usize, 6, 20, 168];
    for n in 1..=4 {
        let brute: Vec<FunctionTable> = all_functions(2, 2, n).into_iter().filter(is_monotone).collect();
        assert_eq!(brute.len(), expected[n - 1]);
        let got = fsc_n(&t, n, &cfg).unwrap();
        assert_eq!(got.iter().cloned().collect::<Vec<_>>(), brute);
    }
}

#[test]
fn satisfaction_matches_brute_force_on_random_pairs() {
    let mut r = rng(11);
    let three = Domain::new(3).unwrap();
    for _ in 0..300 {
        let (a, b) = if r.gen_bool(0.5) { (B, B) } else { (three, B) };
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=2);
        let f = galois_core::sampling::random_function(&mut r, a, b, n).unwrap();
        let c = galois_core::sampling::random_constraint(&mut r, a, b, m).unwrap();
        assert_eq!(galois_core::satisfaction::satisfies(&f, &c).unwrap(), satisfies(&f, &c));
    }
}

#[test]
fn fsc_matches_filter_over_all_tables() {
    let cfg = Config::default();
    let mut r = rng(12);
    for _ in 0..10 {
        let t = random_constraint_set(&mut r, B, B, 2, 2).unwrap();
        for n in 1..=3 {
            let brute: Vec<FunctionTable> = all_functions(2, 2, n)
                .into_iter()
                .filter(|f| t.iter().all(|c| satisfies(f, c)))
                .collect();
            assert_eq!(fsc_n(&t, n, &cfg).unwrap().iter().cloned().collect::<Vec<_>>(), brute);
        }
    }
}

#[test]
fn csf_matches_filter_over_all_constraints() {
    let cfg = Config::default();
    let mut r = rng(13);
    for _ in 0..10 {
        let n = r.gen_range(1..=3);
        let k = random_class(&mut r, B, B, n, 3).unwrap();
        for m in 1..=2 {
            let brute: Vec<Constraint> = all_constraints(2, 2, m)
                .into_iter()
                .filter(|c| k.iter().all(|f| satisfies(f, c)))
                .collect();
            assert_eq!(csf_m(&k, m, &cfg).unwrap().iter().cloned().collect::<Vec<_>>(), brute);
        }
    }
}

/// Tight relation straight from the definition.
fn brute_tight(rels: &[&Relation], scheme: &Scheme, size: usize) -> Vec<Vec<Elem>> {
    let v = scheme.indeterminates();
    tuples(size, scheme.target())
        .into_iter()
        .filter(|a| {
            tuples(size, v).iter().any(|sigma| {
                rels.iter().zip(scheme.family()).all(|(r, h)| {
                    let t: Vec<Elem> = h
                        .iter()
                        .map(|s| match *s {
                            Slot::Coord(i) => a[i],
                            Slot::Indet(u) => sigma[u],
                        })
                        .collect();
                    r.contains(&t)
                })
            })
        })
        .collect()
}

#[test]
fn tight_minor_matches_definition() {
    let cfg = Config::default();
    let mut r = rng(14);
    for _ in 0..200 {
        let target = r.gen_range(1..=2);
        let k = r.gen_range(1..=2);
        let sources: Vec<usize> = (0..k).map(|_| r.gen_range(1..=3)).collect();
        let v = r.gen_range(0..=2);
        let scheme = random_scheme(&mut r, target, &sources, v).unwrap();
        let family: Vec<Constraint> = sources
            .iter()
            .map(|&n| galois_core::sampling::random_constraint(&mut r, B, B, n).unwrap())
            .collect();
        let got = tight_minor(&family, &scheme, &cfg).unwrap();
        let ants: Vec<&Relation> = family.iter().map(|c| c.antecedent()).collect();
        let cons: Vec<&Relation> = family.iter().map(|c| c.consequent()).collect();
        assert_eq!(members(got.antecedent()), brute_tight(&ants, &scheme, 2));
        assert_eq!(members(got.consequent()), brute_tight(&cons, &scheme, 2));
    }
}

#[test]
fn vs_n_matches_projection_substitution() {
    let mut r = rng(15);
    for _ in 0..20 {
        let n = r.gen_range(1..=3);
        let k = random_class(&mut r, B, B, n, 2).unwrap();
        let mut brute = std::collections::BTreeSet::new();
        for f in k.iter() {
            for map in tuples(n, n) {
                let table: Vec<Elem> = tuples(2, n)
                    .iter()
                    .map(|x| {
                        let args: Vec<Elem> = map.iter().map(|&j| x[j as usize]).collect();
                        eval(f, &args)
                    })
                    .collect();
                brute.insert(FunctionTable::new(B, B, n, table).unwrap());
            }
        }
        assert_eq!(
            vs_n_closure(&k)
                .unwrap()
                .iter()
                .cloned()
                .collect::<std::collections::BTreeSet<_>>(),
            brute
        );
    }
}

#[test]
fn lo_m_matches_definition() {
    let cfg = Config::default();
    let mut r = rng(16);
    for _ in 0..20 {
        let n = r.gen_range(1..=2);
        let m = r.gen_range(1..=3);
        let size = r.gen_range(1..=5);
        let k = random_class(&mut r, B, B, n, size).unwrap();
        let points = 2usize.pow(n as u32);
        // every subset of at most m points
        let subsets: Vec<Vec<usize>> = (0u32..1 << points)
            .filter(|s| s.count_ones() as usize <= m)
            .map(|s| (0..points).filter(|&p| s >> p & 1 == 1).collect())
            .collect();
        let brute: Vec<FunctionTable> = all_functions(2, 2, n)
            .into_iter()
            .filter(|g| {
                subsets
                    .iter()
                    .all(|d| k.iter().any(|f| d.iter().all(|&p| f.table()[p] == g.table()[p])))
            })
            .collect();
        assert_eq!(
            lo_m_closure(&k, m, &cfg).unwrap().iter().cloned().collect::<Vec<_>>(),
            brute
        );
    }
}

#[test]
fn lo_n_matches_definition() {
    let cfg = Config::default();
    let mut r = rng(17);
    for _ in 0..30 {
        let m = r.gen_range(1..=2);
        let n = r.gen_range(1..=4);
        let size = r.gen_range(1..=4);
        let seeds = random_constraint_set(&mut r, B, B, m, size).unwrap();
        let t = if r.gen_bool(0.5) {
            relaxation_closure(&seeds, &cfg).unwrap()
        } else {
            seeds
        };
        let q = all_constraints(2, 2, m);
        let brute: std::collections::BTreeSet<Constraint> = q
            .iter()
            .filter(|c| {
                t.contains(c)
                    || q.iter()
                        .filter(|d| d.antecedent().len() <= n && is_relaxation(d, c))
                        .all(|d| t.contains(d))
            })
            .cloned()
            .collect();
        let got: std::collections::BTreeSet<Constraint> = lo_n_closure(&t, n, &cfg).unwrap().iter().cloned().collect();
        assert_eq!(got, brute);
    }
}
