mod common;

use galois_core::constraint_closures::{cm_m_closure, cm_m_oracle, lo_n_closure, CmBounds};
use galois_core::function_closures::{lo_m_closure, vs_n_closure};
use galois_core::galois_lab::check_transitivity;
use galois_core::minors::{tight_minor, Scheme, Slot};
use galois_core::satisfaction::{csf_m, fsc_n, fsc_n_csf_m, satisfies};
use galois_core::*;
use proptest::prelude::*;

const B: Domain = Domain::BOOL;

fn function(n: usize) -> impl Strategy<Value = FunctionTable> {
    prop::collection::vec(0u32..2, 1 << n).prop_map(move |t| FunctionTable::new(B, B, n, t).unwrap())
}

fn constraint(m: usize) -> impl Strategy<Value = Constraint> {
    let w = 1u64 << (1 << m);
    (0..w, 0..w).prop_map(move |(r, s)| Constraint::from_masks(B, B, m, r, s).unwrap())
}

fn class(n: usize) -> impl Strategy<Value = FunctionClass> {
    prop::collection::vec(function(n), 0..4).prop_map(|fs| FunctionClass::from_tables(B, B, fs).unwrap())
}

fn set(m: usize) -> impl Strategy<Value = ConstraintSet> {
    prop::collection::vec(constraint(m), 0..4).prop_map(|cs| ConstraintSet::from_constraints(B, B, cs).unwrap())
}

fn slot(target: usize, v: usize) -> impl Strategy<Value = Slot> {
    (0..target + v).prop_map(move |k| {
        if k < target {
            Slot::Coord(k)
        } else {
            Slot::Indet(k - target)
        }
    })
}

fn scheme(target: usize, sources: Vec<usize>, v: usize) -> impl Strategy<Value = Scheme> {
    let maps: Vec<_> = sources
        .into_iter()
        .map(|n| prop::collection::vec(slot(target, v), n))
        .collect();
    maps.prop_map(move |family| Scheme::new(target, v, family).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relaxation_preserves_satisfaction(f in function(2), c in constraint(2), drop in 0u64..16, add in 0u64..16) {
        let r = c.antecedent().to_mask().unwrap() & !drop;
        let s = c.consequent().to_mask().unwrap() | add;
        let relaxed = Constraint::from_masks(B, B, 2, r, s).unwrap();
        if satisfies(&f, &c).unwrap() {
            prop_assert!(satisfies(&f, &relaxed).unwrap());
        }
    }

    #[test]
    fn satisfaction_agrees_with_brute_force(f in function(3), c in constraint(2)) {
        prop_assert_eq!(satisfies(&f, &c).unwrap(), common::satisfies(&f, &c));
    }

    #[test]
    fn scheme_literal_round_trips(s in scheme(2, vec![2, 1], 2)) {
        let text = s.to_string();
        prop_assert_eq!(text.parse::<Scheme>().unwrap(), s);
    }

    #[test]
    fn tight_minor_is_monotone(c in constraint(2), d in constraint(2), s in scheme(2, vec![2], 1)) {
        let cfg = Config::default();
        let x = tight_minor(std::slice::from_ref(&c), &s, &cfg).unwrap();
        let meet = Constraint::new(
            c.antecedent().intersection(d.antecedent()).unwrap(),
            c.consequent().union(d.consequent()).unwrap(),
        ).unwrap();
        let y = tight_minor(&[meet], &s, &cfg).unwrap();
        prop_assert!(relaxation_of(&y, &x).unwrap());
    }

    #[test]
    fn composed_schemes_agree_with_nested_minors(
        outer in scheme(2, vec![2, 1], 2),
        inner1 in scheme(2, vec![1, 2], 1),
        inner2 in scheme(1, vec![2], 1),
        c1 in constraint(1), c2 in constraint(2), c3 in constraint(2),
    ) {
        let cfg = Config::default();
        let fams = vec![vec![c1, c2], vec![c3]];
        let r = check_transitivity(&outer, &[inner1, inner2], &fams, &cfg).unwrap();
        prop_assert!(r.holds, "{:?}", r.symmetric_difference);
    }

    #[test]
    fn galois_maps_form_a_connection(k in class(2), t in set(2)) {
        let cfg = Config::default();
        let k_in_fsc = k.iter().all(|f| fsc_n(&t, 2, &cfg).unwrap().contains(f));
        let t_in_csf = t.iter().all(|c| csf_m(&k, 2, &cfg).unwrap().contains(c));
        prop_assert_eq!(k_in_fsc, t_in_csf);
    }

    #[test]
    fn sequential_and_parallel_agree(t in set(2), k in class(2)) {
        let seq = Config::sequential();
        let par = Config::default().with_execution(Execution::Parallel);
        prop_assert_eq!(fsc_n(&t, 3, &seq).unwrap(), fsc_n(&t, 3, &par).unwrap());
        prop_assert_eq!(csf_m(&k, 2, &seq).unwrap(), csf_m(&k, 2, &par).unwrap());
        prop_assert_eq!(lo_m_closure(&k, 2, &seq).unwrap(), lo_m_closure(&k, 2, &par).unwrap());
        prop_assert_eq!(lo_n_closure(&t, 2, &seq).unwrap(), lo_n_closure(&t, 2, &par).unwrap());
    }

    #[test]
    fn fixed_arity_function_identity(k in class(2), m in 1usize..=3) {
        let cfg = Config::default();
        let lhs = fsc_n_csf_m(&k, 2, m, &cfg).unwrap();
        let rhs = lo_m_closure(&vs_n_closure(&k).unwrap(), m, &cfg).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bounded_cm_reaches_oracle_on_unary_sets(t in set(1)) {
        let cfg = Config::default();
        let out = cm_m_closure(&t, 1, &CmBounds::default(), &cfg).unwrap();
        prop_assert!(out.converged);
        out.audit(&t, &cfg).unwrap();
        prop_assert_eq!(out.set, cm_m_oracle(&t, 1, &cfg).unwrap());
    }

    #[test]
    fn lo_n_is_a_closure_operator(t in set(2), u in set(2), n in 1usize..=4) {
        let cfg = Config::default();
        let ct = lo_n_closure(&t, n, &cfg).unwrap();
        let tu = ObjectSet::union(&t, &u);
        prop_assert!(t.is_subset(&ct));
        prop_assert_eq!(lo_n_closure(&ct, n, &cfg).unwrap(), ct.clone());
        prop_assert!(ct.is_subset(&lo_n_closure(&tu, n, &cfg).unwrap()));
    }
}
