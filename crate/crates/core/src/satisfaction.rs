//! Class composition, the image `fR`, satisfaction, and the Galois maps
//! `FSC_n` / `CSF_m` over finite domains.

use std::collections::BTreeSet;

use crate::class::{ConstraintSet, FunctionClass};
use crate::config::Config;
use crate::domain::{pow_u128, Domain, Elem};
use crate::error::{Error, Result};
use crate::function::{check_function_budget, FunctionTable};
use crate::par;
use crate::relation::{Constraint, Relation};

/// Antecedent rows decoded once, for repeated row-choice walks.
pub(crate) struct Rows {
    rows: Vec<Vec<usize>>,
    arity: usize,
}

impl Rows {
    pub(crate) fn new(r: &Relation) -> Self {
        Rows {
            rows: r
                .tuples()
                .map(|t| t.into_iter().map(|e| e as usize).collect())
                .collect(),
            arity: r.arity(),
        }
    }
}

/// Visits `f(a^1 .. a^n)` (as a tuple rank over B) for every choice of
/// `n` rows `a^i` from `rows`, stopping as soon as `visit` returns false.
/// Returns false iff a visit stopped the walk.
pub(crate) fn walk_images<F>(f: &FunctionTable, rows: &Rows, mut visit: F) -> bool
where
    F: FnMut(usize) -> bool,
{
    let n = f.arity();
    let m = rows.arity;
    if rows.rows.is_empty() {
        return true;
    }
    // acc[d*m + i]: rank of the i-th argument tuple after choosing d rows
    let mut acc = vec![0usize; (n + 1) * m];
    walk(f, rows, 0, &mut acc, &mut visit)
}

fn walk<F>(f: &FunctionTable, rows: &Rows, depth: usize, acc: &mut [usize], visit: &mut F) -> bool
where
    F: FnMut(usize) -> bool,
{
    let n = f.arity();
    let m = rows.arity;
    if depth == n {
        let b = f.cod().size();
        let out = acc[n * m..]
            .iter()
            .fold(0usize, |r, &arg| r * b + f.eval_rank(arg) as usize);
        return visit(out);
    }
    let a = f.dom().size();
    for row in &rows.rows {
        for i in 0..m {
            acc[(depth + 1) * m + i] = acc[depth * m + i] * a + row[i];
        }
        if !walk(f, rows, depth + 1, acc, visit) {
            return false;
        }
    }
    true
}

/// `fR`: the coordinatewise images of all row choices from `R`.
pub fn image(f: &FunctionTable, r: &Relation) -> Result<Relation> {
    if f.dom() != r.domain() {
        return Err(Error::DomainMismatch("image"));
    }
    let mut out = Relation::empty(f.cod(), r.arity())?;
    walk_images(f, &Rows::new(r), |k| {
        out.insert_rank(k);
        true
    });
    Ok(out)
}

/// Whether `f` satisfies `c`, i.e. `f R ⊆ S`.
pub fn satisfies(f: &FunctionTable, c: &Constraint) -> Result<bool> {
    if f.dom() != c.source() || f.cod() != c.target() {
        return Err(Error::DomainMismatch("satisfaction"));
    }
    Ok(satisfies_rows(f, &Rows::new(c.antecedent()), c.consequent()))
}

pub(crate) fn satisfies_rows(f: &FunctionTable, rows: &Rows, consequent: &Relation) -> bool {
    walk_images(f, rows, |k| consequent.contains_rank(k))
}

/// `f` preserves `R` when `fR ⊆ R`; only meaningful for operations on one set.
pub fn preserves(f: &FunctionTable, r: &Relation) -> Result<bool> {
    if f.dom() != f.cod() {
        return Err(Error::DomainMismatch("preservation needs an operation on one set"));
    }
    if f.dom() != r.domain() {
        return Err(Error::DomainMismatch("preservation"));
    }
    Ok(satisfies_rows(f, &Rows::new(r), r))
}

/// The class composition `IJ`: every `f(g_1, .., g_n)` with `f` n-ary in
/// `outer` and `g_i` all of one arity `m <= cap` in `inner`.
pub fn compose_classes(
    outer: &FunctionClass,
    inner: &FunctionClass,
    cap: usize,
    cfg: &Config,
) -> Result<FunctionClass> {
    if outer.dom() != inner.cod() {
        return Err(Error::DomainMismatch("class composition"));
    }
    let mut out = FunctionClass::new(inner.dom(), outer.cod()).with_cap(cap);
    for m in 1..=cap {
        let gs: Vec<&FunctionTable> = inner.at_arity(m).collect();
        if gs.is_empty() {
            continue;
        }
        for f in outer.iter() {
            let n = f.arity();
            let count = pow_u128(gs.len() as u128, n as u128);
            if count > cfg.max_functions as u128 {
                return Err(Error::Budget {
                    what: format!("compositions of a {n}-ary function with {m}-ary inner functions"),
                    count,
                    limit: cfg.max_functions as u128,
                });
            }
            let points = inner.dom().pow(m);
            let mut choice = vec![0usize; n];
            let mut args = vec![0usize; n];
            loop {
                let b = inner.cod().size();
                let table: Vec<Elem> = (0..points)
                    .map(|p| {
                        for (i, &g) in choice.iter().enumerate() {
                            args[i] = gs[g].eval_rank(p) as usize;
                        }
                        let r = args.iter().fold(0usize, |r, &v| r * b + v);
                        f.eval_rank(r)
                    })
                    .collect();
                out.insert(FunctionTable::new(inner.dom(), outer.cod(), m, table)?)?;
                if !advance(&mut choice, gs.len()) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Odometer increment over `base`; false once every digit wrapped.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// `FSC_n(T)`: all n-ary functions satisfying every member of `t`.
pub fn fsc_n(t: &ConstraintSet, n: usize, cfg: &Config) -> Result<FunctionClass> {
    if n == 0 {
        return Err(Error::Range("arity must be at least 1".into()));
    }
    let (a, b) = (t.source(), t.target());
    let count = check_function_budget(a, b, n, cfg)?;
    let prepared: Vec<(Rows, &Relation)> = t.iter().map(|c| (Rows::new(c.antecedent()), c.consequent())).collect();
    let members = par::filter_map_range(cfg.execution, count, |i| {
        let f = FunctionTable::from_index(a, b, n, i as u128).expect("index below count");
        prepared
            .iter()
            .all(|(rows, s)| satisfies_rows(&f, rows, s))
            .then_some(f)
    });
    let mut out = FunctionClass::new(a, b);
    out.extend_unchecked(members);
    Ok(out)
}

/// `FSC` restricted to arities `1..=cap`.
pub fn fsc(t: &ConstraintSet, cap: usize, cfg: &Config) -> Result<FunctionClass> {
    let mut out = FunctionClass::new(t.source(), t.target()).with_cap(cap);
    for n in 1..=cap {
        out.extend_unchecked(fsc_n(t, n, cfg)?.iter().cloned());
    }
    Ok(out)
}

/// `|Q_m| = 2^(|A|^m) * 2^(|B|^m)`, saturating.
pub fn constraint_universe_size(a: Domain, b: Domain, m: usize) -> u128 {
    match (a.power(m), b.power(m)) {
        (Some(x), Some(y)) if x + y < 128 => 1u128 << (x + y),
        _ => u128::MAX,
    }
}

pub(crate) fn check_constraint_budget(a: Domain, b: Domain, m: usize, cfg: &Config) -> Result<()> {
    let count = constraint_universe_size(a, b, m);
    if count > cfg.max_constraints as u128 || count > 1u128 << 63 {
        return Err(Error::Budget {
            what: format!("all {m}-ary constraints"),
            count,
            limit: cfg.max_constraints as u128,
        });
    }
    Ok(())
}

/// The least consequent `S` with `(R, S)` satisfied by all of `k`:
/// the union of the images `fR`.
pub(crate) fn least_consequent(k: &FunctionClass, r: &Relation) -> Result<Relation> {
    let mut s = Relation::empty(k.cod(), r.arity())?;
    let rows = Rows::new(r);
    let full = s.space();
    for f in k.iter() {
        walk_images(f, &rows, |x| {
            s.insert_rank(x);
            true
        });
        if s.len() == full {
            break;
        }
    }
    Ok(s)
}

/// All masks `S ⊇ base` within `width` bits, ascending.
pub(crate) fn supersets(base: u64, width: usize) -> impl Iterator<Item = u64> {
    let universe = if width == 64 { !0 } else { (1u64 << width) - 1 };
    let free = universe & !base;
    // enumerate submasks of `free` in ascending order
    let mut sub: Option<u64> = Some(0);
    std::iter::from_fn(move || {
        let s = sub?;
        sub = if s == free {
            None
        } else {
            Some(((s | !free).wrapping_add(1)) & free)
        };
        Some(base | s)
    })
}

/// `CSF_m(K)`: every m-ary constraint satisfied by all members of `k`.
///
/// Enumerates `Q_m` implicitly: for each antecedent the satisfied
/// consequents are exactly the supersets of [`least_consequent`].
pub fn csf_m(k: &FunctionClass, m: usize, cfg: &Config) -> Result<ConstraintSet> {
    if m == 0 {
        return Err(Error::Range("arity must be at least 1".into()));
    }
    let (a, b) = (k.dom(), k.cod());
    check_constraint_budget(a, b, m, cfg)?;
    let (wa, wb) = (a.pow(m), b.pow(m));
    let antecedents: Vec<u64> = (0..1u64 << wa).collect();
    let chunks = par::map_slice(cfg.execution, &antecedents, |&ant| {
        let r = Relation::from_mask(a, m, ant).expect("mask in range");
        let s = least_consequent(k, &r).expect("same domains");
        let base = s.to_mask().expect("fits a mask");
        supersets(base, wb)
            .map(|con| Constraint::from_masks(a, b, m, ant, con).expect("masks in range"))
            .collect::<Vec<_>>()
    });
    let mut out = ConstraintSet::new(a, b);
    out.extend_unchecked(chunks.into_iter().flatten());
    Ok(out)
}

/// `CSF_m(K)` restricted to an explicit candidate set, for universes too
/// large to enumerate.
pub fn csf_among(k: &FunctionClass, candidates: &ConstraintSet, cfg: &Config) -> Result<ConstraintSet> {
    if k.dom() != candidates.source() || k.cod() != candidates.target() {
        return Err(Error::DomainMismatch("csf candidates"));
    }
    let cands: Vec<&Constraint> = candidates.iter().collect();
    let fs: Vec<&FunctionTable> = k.iter().collect();
    let kept = par::filter_map_slice(cfg.execution, &cands, |c| {
        let rows = Rows::new(c.antecedent());
        fs.iter()
            .all(|f| satisfies_rows(f, &rows, c.consequent()))
            .then(|| (*c).clone())
    });
    let mut out = ConstraintSet::new(k.dom(), k.cod());
    out.extend_unchecked(kept);
    Ok(out)
}

/// `CSF` restricted to arities `1..=cap`.
pub fn csf(k: &FunctionClass, cap: usize, cfg: &Config) -> Result<ConstraintSet> {
    let mut out = ConstraintSet::new(k.dom(), k.cod()).with_cap(cap);
    for m in 1..=cap {
        out.extend_unchecked(csf_m(k, m, cfg)?.iter().cloned());
    }
    Ok(out)
}

/// The separating constraint built from columns `a^1 .. a^n ∈ A^m`:
/// antecedent `{a^1, .., a^n}`, consequent the union of `fR` over `k`.
///
/// For a class closed under n-ary variable substitution the consequent is
/// exactly `{ f(a^1 .. a^n) : f ∈ K_n }`; taking images keeps the
/// constraint satisfied by every member of an arbitrary class.
pub fn trace_constraint(k: &FunctionClass, columns: &[Vec<Elem>]) -> Result<Constraint> {
    let m = match columns.first() {
        Some(c) => c.len(),
        None => return Err(Error::Invalid("trace constraint needs at least one column".into())),
    };
    if let Some(bad) = columns.iter().find(|c| c.len() != m) {
        return Err(Error::ArityMismatch {
            context: "trace constraint columns",
            expected: m,
            found: bad.len(),
        });
    }
    let r = Relation::from_tuples(k.dom(), m, columns)?;
    let s = least_consequent(k, &r)?;
    Constraint::new(r, s)
}

/// `FSC_n(CSF_m(K))`, computed without materializing `Q_m`: a function
/// lies in it iff it satisfies the trace constraint of every antecedent
/// of at most `n` tuples.
pub fn fsc_n_csf_m(k: &FunctionClass, n: usize, m: usize, cfg: &Config) -> Result<FunctionClass> {
    let (a, b) = (k.dom(), k.cod());
    let space = a.power(m).ok_or_else(|| Error::Range("tuple space overflows".into()))?;
    let subsets: u128 = (1..=n.min(space)).map(|j| binomial(space as u128, j as u128)).sum();
    if subsets > cfg.max_columns as u128 {
        return Err(Error::Budget {
            what: format!("antecedents of at most {n} tuples from A^{m}"),
            count: subsets,
            limit: cfg.max_columns as u128,
        });
    }
    let mut traces = BTreeSet::new();
    let full = Relation::full(b, m)?;
    for subset in small_subsets(space, n) {
        let columns: Vec<Vec<Elem>> = subset
            .iter()
            .map(|&r| crate::domain::unrank(r, a, m).expect("rank in range"))
            .collect();
        let c = trace_constraint(k, &columns)?;
        if c.consequent() != &full {
            traces.insert(c);
        }
    }
    let t = ConstraintSet::from_constraints(a, b, traces)?;
    fsc_n(&t, n, cfg)
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// All non-empty subsets of `0..space` of size at most `max`, as sorted
/// index lists, in size-then-lexicographic order.
pub(crate) fn small_subsets(space: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max.min(space) {
        combinations(space, size, &mut |c| out.push(c.to_vec()));
    }
    out
}

/// Calls `visit` on every `size`-subset of `0..space` in lexicographic order.
pub(crate) fn combinations(space: usize, size: usize, visit: &mut dyn FnMut(&[usize])) {
    if size > space {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        visit(&idx);
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < space - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Which side of the connection a [`GaloisQuery`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaloisSide {
    FunctionsFromConstraints,
    ConstraintsFromFunctions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AritySelector {
    Exactly(usize),
    UpTo(usize),
}

impl AritySelector {
    fn arities(self) -> Result<std::ops::RangeInclusive<usize>> {
        match self {
            AritySelector::Exactly(0) | AritySelector::UpTo(0) => {
                Err(Error::Range("arity selector must be at least 1".into()))
            }
            AritySelector::Exactly(n) => Ok(n..=n),
            AritySelector::UpTo(n) => Ok(1..=n),
        }
    }
}

pub enum GaloisInput<'a> {
    Constraints(&'a ConstraintSet),
    Functions(&'a FunctionClass),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GaloisOutput {
    Functions(FunctionClass),
    Constraints(ConstraintSet),
}

/// A request for `FSC_n` / `FSC` up to a cap, or `CSF_m` / `CSF` up to a cap.
#[derive(Debug, Clone)]
pub struct GaloisQuery {
    pub side: GaloisSide,
    pub arity: AritySelector,
    pub config: Config,
}

impl GaloisQuery {
    pub fn run(&self, input: GaloisInput<'_>) -> Result<GaloisOutput> {
        let arities = self.arity.arities()?;
        match (self.side, input) {
            (GaloisSide::FunctionsFromConstraints, GaloisInput::Constraints(t)) => {
                let mut out = FunctionClass::new(t.source(), t.target());
                for n in arities {
                    out.extend_unchecked(fsc_n(t, n, &self.config)?.iter().cloned());
                }
                Ok(GaloisOutput::Functions(out))
            }
            (GaloisSide::ConstraintsFromFunctions, GaloisInput::Functions(k)) => {
                let mut out = ConstraintSet::new(k.dom(), k.cod());
                for m in arities {
                    out.extend_unchecked(csf_m(k, m, &self.config)?.iter().cloned());
                }
                Ok(GaloisOutput::Constraints(out))
            }
            _ => Err(Error::Invalid("query side does not match its input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{enumerate_functions, projection};
    use crate::relation::{canonical_constraint, CanonicalKind};

    const B: Domain = Domain::BOOL;

    fn and() -> FunctionTable {
        FunctionTable::new(B, B, 2, vec![0, 0, 0, 1]).unwrap()
    }

    fn neg() -> FunctionTable {
        FunctionTable::new(B, B, 1, vec![1, 0]).unwrap()
    }

    fn leq() -> Relation {
        Relation::from_tuples(B, 2, [[0, 0], [0, 1], [1, 1]]).unwrap()
    }

    fn rel(tuples: &[&[Elem]]) -> Relation {
        Relation::from_tuples(B, tuples[0].len(), tuples.iter().copied()).unwrap()
    }

    /// Independent image oracle: enumerate every n-tuple of rows directly.
    fn image_oracle(f: &FunctionTable, r: &Relation) -> BTreeSet<Vec<Elem>> {
        let rows: Vec<Vec<Elem>> = r.tuples().collect();
        let n = f.arity();
        let mut out = BTreeSet::new();
        let mut pick = vec![0usize; n];
        if rows.is_empty() {
            return out;
        }
        loop {
            let t: Vec<Elem> = (0..r.arity())
                .map(|i| {
                    let args: Vec<Elem> = pick.iter().map(|&p| rows[p][i]).collect();
                    f.eval(&args).unwrap()
                })
                .collect();
            out.insert(t);
            if !advance(&mut pick, rows.len()) {
                return out;
            }
        }
    }

    #[test]
    fn image_examples() {
        let r = rel(&[&[0, 1], &[1, 1]]);
        assert_eq!(image(&and(), &r).unwrap(), r);
        let oracle = image_oracle(&and(), &r);
        assert_eq!(oracle.len(), 2);

        let empty = Relation::empty(B, 2).unwrap();
        assert!(image(&and(), &empty).unwrap().is_empty());

        let id = projection(B, 1, 1).unwrap();
        let diag = rel(&[&[0, 0], &[1, 1]]);
        assert_eq!(image(&id, &diag).unwrap(), diag);

        let three = Domain::new(3).unwrap();
        assert!(image(&and(), &Relation::full(three, 1).unwrap()).is_err());
    }

    #[test]
    fn image_matches_oracle_exhaustively() {
        let cfg = Config::default();
        for f in enumerate_functions(B, B, 2, &cfg).unwrap() {
            for mask in 0..16u64 {
                let r = Relation::from_mask(B, 2, mask).unwrap();
                let got: BTreeSet<Vec<Elem>> = image(&f, &r).unwrap().tuples().collect();
                assert_eq!(got, image_oracle(&f, &r));
            }
        }
    }

    #[test]
    fn satisfaction_examples() {
        let eq = canonical_constraint(CanonicalKind::Equality, B, B, 2).unwrap();
        let cfg = Config::default();
        for n in 1..=3 {
            for f in enumerate_functions(B, B, n, &cfg).unwrap() {
                assert!(satisfies(&f, &eq).unwrap());
            }
        }
        let c = Constraint::new(leq(), leq()).unwrap();
        assert!(satisfies(&and(), &c).unwrap());
        assert!(!satisfies(&neg(), &c).unwrap());
        assert!(preserves(&and(), &leq()).unwrap());
        assert!(!preserves(&neg(), &leq()).unwrap());
        assert!(preserves(&neg(), &Relation::full(B, 3).unwrap()).unwrap());
    }

    #[test]
    fn preserves_needs_operation() {
        let three = Domain::new(3).unwrap();
        let f = FunctionTable::new(B, three, 1, vec![0, 2]).unwrap();
        assert!(preserves(&f, &Relation::full(B, 1).unwrap()).is_err());
    }

    #[test]
    fn compose_examples() {
        let cfg = Config::default();
        let i = FunctionClass::from_tables(B, B, [and()]).unwrap();
        let o2 =
            FunctionClass::from_tables(B, B, [projection(B, 2, 1).unwrap(), projection(B, 2, 2).unwrap()]).unwrap();
        let got = compose_classes(&i, &o2, 2, &cfg).unwrap();
        let want = FunctionClass::from_tables(
            B,
            B,
            [and(), projection(B, 2, 1).unwrap(), projection(B, 2, 2).unwrap()],
        )
        .unwrap();
        assert_eq!(got, want);

        let mut oa = FunctionClass::new(B, B);
        for n in 1..=2 {
            for i in 1..=n {
                oa.insert(projection(B, n, i).unwrap()).unwrap();
            }
        }
        assert_eq!(compose_classes(&oa, &oa, 2, &cfg).unwrap(), oa);

        let empty = FunctionClass::new(B, B);
        assert!(compose_classes(&empty, &oa, 2, &cfg).unwrap().is_empty());
        assert!(compose_classes(&oa, &empty, 2, &cfg).unwrap().is_empty());
    }

    #[test]
    fn fsc_examples() {
        let cfg = Config::default();
        let t = ConstraintSet::from_constraints(B, B, [Constraint::new(leq(), leq()).unwrap()]).unwrap();
        let k = fsc_n(&t, 1, &cfg).unwrap();
        let tables: Vec<_> = k.iter().map(|f| f.table().to_vec()).collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);

        let empty =
            ConstraintSet::from_constraints(B, B, [canonical_constraint(CanonicalKind::Empty, B, B, 3).unwrap()])
                .unwrap();
        assert_eq!(fsc_n(&empty, 2, &cfg).unwrap().len(), 16);

        let kill = Constraint::new(Relation::full(B, 1).unwrap(), Relation::empty(B, 1).unwrap()).unwrap();
        let t = ConstraintSet::from_constraints(B, B, [kill]).unwrap();
        assert!(fsc_n(&t, 1, &cfg).unwrap().is_empty());
    }

    #[test]
    fn csf_examples() {
        let cfg = Config::default();
        let k = FunctionClass::from_tables(B, B, [and()]).unwrap();
        let t = csf_m(&k, 2, &cfg).unwrap();
        assert!(t.contains(&canonical_constraint(CanonicalKind::Equality, B, B, 2).unwrap()));
        assert!(t.contains(&canonical_constraint(CanonicalKind::Trivial, B, B, 2).unwrap()));
        assert!(t.contains(&Constraint::new(leq(), leq()).unwrap()));
        assert_eq!(csf_m(&FunctionClass::new(B, B), 1, &cfg).unwrap().len(), 16);
        // brute force agreement with the candidate filter
        let all = csf_m(&FunctionClass::new(B, B), 2, &cfg).unwrap();
        assert_eq!(all.len(), 256);
        assert_eq!(csf_among(&k, &all, &cfg).unwrap(), t);
    }

    #[test]
    fn csf_refuses_large_universe() {
        let cfg = Config::default();
        let k = FunctionClass::new(B, B);
        assert!(csf_m(&k, 4, &cfg).unwrap_err().is_budget());
    }

    #[test]
    fn trace_examples() {
        let id = FunctionClass::from_tables(B, B, [projection(B, 1, 1).unwrap()]).unwrap();
        let c = trace_constraint(&id, &[vec![0, 1]]).unwrap();
        assert_eq!(c.antecedent(), &rel(&[&[0, 1]]));
        assert_eq!(c.consequent(), &rel(&[&[0, 1]]));
        assert!(!satisfies(&neg(), &c).unwrap());

        let empty = FunctionClass::new(B, B);
        assert!(trace_constraint(&empty, &[vec![0, 1]]).unwrap().consequent().is_empty());

        let k2 = FunctionClass::from_tables(
            B,
            B,
            [and(), projection(B, 2, 1).unwrap(), projection(B, 2, 2).unwrap()],
        )
        .unwrap();
        let c = trace_constraint(&k2, &[vec![0, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        let want = rel(&[&[0, 0, 0, 1], &[0, 0, 1, 1], &[0, 1, 0, 1]]);
        assert_eq!(c.consequent(), &want);

        assert!(trace_constraint(&k2, &[vec![0, 1], vec![0]]).is_err());
    }

    #[test]
    fn supersets_enumerates_all() {
        let v: Vec<u64> = supersets(0b0101, 4).collect();
        assert_eq!(v, vec![0b0101, 0b0111, 0b1101, 0b1111]);
        assert_eq!(supersets(0, 4).count(), 16);
        assert_eq!(supersets(0b1111, 4).count(), 1);
    }

    #[test]
    fn small_subset_counts() {
        assert_eq!(small_subsets(4, 2).len(), 4 + 6);
        assert_eq!(small_subsets(16, 2).len(), 136);
        assert_eq!(binomial(16, 2), 120);
    }

    #[test]
    fn query_side_mismatch() {
        let q = GaloisQuery {
            side: GaloisSide::FunctionsFromConstraints,
            arity: AritySelector::Exactly(1),
            config: Config::default(),
        };
        let k = FunctionClass::new(B, B);
        assert!(q.run(GaloisInput::Functions(&k)).is_err());
        let t = ConstraintSet::new(B, B);
        match q.run(GaloisInput::Constraints(&t)).unwrap() {
            GaloisOutput::Functions(f) => assert_eq!(f.len(), 4),
            _ => unreachable!(),
        }
    }
}
