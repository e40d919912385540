//! Closure operators on constraint sets: the conjunctive-minor closure
//! `CM_m` (bounded generator fixpoint plus a Galois oracle), the local
//! closures `LO_n` and `LO`, and the union-closure check.
//!
//! `Q_m` is indexed densely: a constraint with antecedent mask `R` and
//! consequent mask `S` has id `(R << |B|^m) | S`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::class::{ConstraintSet, ObjectSet};
use crate::config::Config;
use crate::domain::{checked_pow, unrank_into, Domain, Elem};
use crate::error::{Error, Result};
use crate::minors::{source_rank, tight_minor, Scheme, Slot};
use crate::par;
use crate::relation::{canonical_constraint, relaxation_of, CanonicalKind, Constraint};
use crate::satisfaction::{check_constraint_budget, csf_m, fsc_n};

/// Limits on one generator step of the bounded `CM_m` fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CmBounds {
    pub max_family: usize,
    pub max_indets: usize,
    pub max_iterations: usize,
}

impl Default for CmBounds {
    fn default() -> Self {
        CmBounds {
            max_family: 2,
            max_indets: 2,
            max_iterations: 64,
        }
    }
}

impl CmBounds {
    fn validate(&self) -> Result<()> {
        if self.max_family == 0 || self.max_iterations == 0 {
            return Err(Error::Range("family size and iteration limit must be positive".into()));
        }
        Ok(())
    }
}

/// Why a constraint belongs to a computed closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CmWitness {
    /// Input member, equality or empty constraint.
    Seed,
    /// Single-tuple relaxation of an earlier member.
    Relaxation { parent: Constraint },
    /// Tight minor of earlier members.
    Minor { family: Vec<Constraint>, scheme: Scheme },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witnessed {
    /// Insertion position; witnesses only cite members with smaller order
    /// or members of other arities.
    pub order: usize,
    pub witness: CmWitness,
}

#[derive(Debug, Clone)]
pub struct CmClosure {
    pub set: ConstraintSet,
    pub converged: bool,
    pub rounds: usize,
    witnesses: BTreeMap<Constraint, Witnessed>,
}

impl CmClosure {
    pub fn witness(&self, c: &Constraint) -> Option<&Witnessed> {
        self.witnesses.get(c)
    }

    /// Re-checks the closure against `input` with the public minor code:
    /// seeds present, relaxation-closed, and every witness valid and
    /// well-founded.
    pub fn audit(&self, input: &ConstraintSet, cfg: &Config) -> Result<()> {
        let fail = |msg: String| Err(Error::Invalid(msg));
        let (a, b) = (self.set.source(), self.set.target());
        for m in self.set.arities() {
            for kind in [CanonicalKind::Equality, CanonicalKind::Empty] {
                let c = canonical_constraint(kind, a, b, m)?;
                if !self.set.contains(&c) {
                    return fail(format!("missing {kind:?} constraint at arity {m}"));
                }
            }
        }
        for c in input.iter() {
            let inside = self.set.arity_cap().is_none_or(|cap| c.arity() <= cap);
            if inside && !self.set.contains(c) {
                return fail(format!("input member {c} missing"));
            }
        }
        let cited = |f: &Constraint, c: &Constraint, order: usize| -> bool {
            if input.contains(f) {
                return true;
            }
            self.witnesses
                .get(f)
                .is_some_and(|w| f.arity() != c.arity() || w.order < order)
        };
        for c in self.set.iter() {
            let Some(w) = self.witnesses.get(c) else {
                return fail(format!("{c} has no witness"));
            };
            match &w.witness {
                CmWitness::Seed => {}
                CmWitness::Relaxation { parent } => {
                    if !cited(parent, c, w.order) || !relaxation_of(c, parent)? {
                        return fail(format!("bad relaxation witness for {c}"));
                    }
                }
                CmWitness::Minor { family, scheme } => {
                    if family.iter().any(|f| !cited(f, c, w.order)) {
                        return fail(format!("minor witness for {c} cites a later member"));
                    }
                    let wide = Config {
                        max_indets: scheme.indeterminates(),
                        ..cfg.clone()
                    };
                    if &tight_minor(family, scheme, &wide)? != c {
                        return fail(format!("minor witness for {c} does not reproduce it"));
                    }
                }
            }
            let ant = c.antecedent();
            for r in ant.ranks() {
                let mut relaxed = ant.clone();
                relaxed.remove_rank(r);
                let weaker = Constraint::new(relaxed, c.consequent().clone())?;
                if !self.set.contains(&weaker) {
                    return fail(format!("{weaker} missing although {c} present"));
                }
            }
            let con = c.consequent();
            for s in (0..con.space()).filter(|&s| !con.contains_rank(s)) {
                let mut grown = con.clone();
                grown.insert_rank(s);
                let weaker = Constraint::new(ant.clone(), grown)?;
                if !self.set.contains(&weaker) {
                    return fail(format!("{weaker} missing although {c} present"));
                }
            }
        }
        Ok(())
    }
}

/// Dense index of `Q_m`.
#[derive(Debug, Clone, Copy)]
struct Space {
    a: Domain,
    b: Domain,
    m: usize,
    pa: usize,
    pb: usize,
}

impl Space {
    fn new(a: Domain, b: Domain, m: usize, cfg: &Config) -> Result<Self> {
        check_constraint_budget(a, b, m, cfg)?;
        Ok(Space {
            a,
            b,
            m,
            pa: a.pow(m),
            pb: b.pow(m),
        })
    }

    fn len(&self) -> usize {
        1usize << (self.pa + self.pb)
    }

    fn id(&self, ant: u64, con: u64) -> usize {
        ((ant << self.pb) | con) as usize
    }

    fn split(&self, id: usize) -> (u64, u64) {
        ((id >> self.pb) as u64, id as u64 & low_mask(self.pb))
    }

    fn constraint(&self, id: usize) -> Constraint {
        let (ant, con) = self.split(id);
        Constraint::from_masks(self.a, self.b, self.m, ant, con).expect("id inside Q_m")
    }

    fn id_of(&self, c: &Constraint) -> Result<usize> {
        let (ant, con) = masks(c)?;
        Ok(self.id(ant, con))
    }
}

fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        !0
    } else {
        (1u64 << width) - 1
    }
}

fn masks(c: &Constraint) -> Result<(u64, u64)> {
    match (c.antecedent().to_mask(), c.consequent().to_mask()) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(Error::Range(format!(
            "arity {} constraints are too wide for mask evaluation",
            c.arity()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Source {
    arity: usize,
    ant: u64,
    con: u64,
}

impl Source {
    fn of(c: &Constraint) -> Result<Self> {
        let (ant, con) = masks(c)?;
        Ok(Source {
            arity: c.arity(),
            ant,
            con,
        })
    }

    fn constraint(&self, a: Domain, b: Domain) -> Constraint {
        Constraint::from_masks(a, b, self.arity, self.ant, self.con).expect("mask inside Q_n")
    }
}

/// A scheme with its source-rank tables precomputed for both domains.
struct Compiled {
    scheme: Scheme,
    sig_a: usize,
    idx_a: Vec<Vec<u8>>,
    sig_b: usize,
    idx_b: Vec<Vec<u8>>,
}

fn rank_table(maps: &[Vec<Slot>], v: usize, m: usize, size: usize) -> (usize, Vec<Vec<u8>>) {
    let sig = checked_pow(size, v).expect("small Skolem space");
    let space = checked_pow(size, m).expect("small target space");
    let mut a = vec![0 as Elem; m];
    let mut s = vec![0 as Elem; v];
    let tables = maps
        .iter()
        .map(|h| {
            let mut t = Vec::with_capacity(space * sig);
            for r in 0..space {
                unrank_into(r, size, &mut a);
                for k in 0..sig {
                    unrank_into(k, size, &mut s);
                    t.push(source_rank(h, &a, &s, size) as u8);
                }
            }
            t
        })
        .collect();
    (sig, tables)
}

/// Tight minor of mask relations through a compiled rank table.
#[inline]
fn apply(tables: &[Vec<u8>], sig: usize, rels: &[u64]) -> u64 {
    let space = tables[0].len() / sig;
    let mut out = 0u64;
    for r in 0..space {
        let base = r * sig;
        if (base..base + sig).any(|k| tables.iter().zip(rels).all(|(t, &rel)| rel >> t[k] & 1 == 1)) {
            out |= 1 << r;
        }
    }
    out
}

/// All schemes from sources of the given arities into `m ∪ V`, `|V| <= v`,
/// with indeterminates numbered by first occurrence.
fn canonical_schemes(arities: &[usize], m: usize, v: usize) -> Vec<Scheme> {
    fn go(slots: &mut Vec<Slot>, total: usize, used: usize, m: usize, v: usize, out: &mut Vec<(Vec<Slot>, usize)>) {
        if slots.len() == total {
            out.push((slots.clone(), used));
            return;
        }
        for i in 0..m {
            slots.push(Slot::Coord(i));
            go(slots, total, used, m, v, out);
            slots.pop();
        }
        for u in 0..(used + 1).min(v) {
            slots.push(Slot::Indet(u));
            go(slots, total, used.max(u + 1), m, v, out);
            slots.pop();
        }
    }
    let total: usize = arities.iter().sum();
    let mut flat = Vec::new();
    go(&mut Vec::with_capacity(total), total, 0, m, v, &mut flat);
    flat.into_iter()
        .map(|(slots, used)| {
            let mut family = Vec::with_capacity(arities.len());
            let mut rest = &slots[..];
            for &n in arities {
                family.push(rest[..n].to_vec());
                rest = &rest[n..];
            }
            Scheme::new(m, used, family).expect("canonical scheme is well formed")
        })
        .collect()
}

/// Bounded `CM_m` fixpoint state at one target arity.
struct Engine {
    space: Space,
    bounds: CmBounds,
    member: Vec<bool>,
    witness: HashMap<usize, Witnessed>,
    next_order: usize,
    processed: HashSet<Source>,
    schemes: HashMap<Vec<usize>, Vec<Compiled>>,
    rounds: usize,
    converged: bool,
}

impl Engine {
    fn new(a: Domain, b: Domain, m: usize, bounds: CmBounds, cfg: &Config) -> Result<Self> {
        bounds.validate()?;
        let space = Space::new(a, b, m, cfg)?;
        if space.pa > 64 || space.pb > 64 {
            return Err(Error::Range(format!("arity {m} too wide for mask evaluation")));
        }
        let mut e = Engine {
            space,
            bounds,
            member: vec![false; space.len()],
            witness: HashMap::new(),
            next_order: 0,
            processed: HashSet::new(),
            schemes: HashMap::new(),
            rounds: 0,
            converged: false,
        };
        for kind in [CanonicalKind::Equality, CanonicalKind::Empty] {
            let id = space.id_of(&canonical_constraint(kind, a, b, m)?)?;
            e.add(id, CmWitness::Seed);
        }
        Ok(e)
    }

    fn seed(&mut self, c: &Constraint) -> Result<()> {
        let id = self.space.id_of(c)?;
        self.add(id, CmWitness::Seed);
        Ok(())
    }

    /// Inserts `id` and closes under single-tuple relaxation (G1).
    fn add(&mut self, id: usize, w: CmWitness) -> bool {
        if self.member[id] {
            return false;
        }
        let sp = self.space;
        self.insert(id, w);
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            let (ant, con) = sp.split(cur);
            let parent = sp.constraint(cur);
            let weaker = (0..sp.pa)
                .filter(|&t| ant >> t & 1 == 1)
                .map(|t| sp.id(ant & !(1 << t), con))
                .chain(
                    (0..sp.pb)
                        .filter(|&s| con >> s & 1 == 0)
                        .map(|s| sp.id(ant, con | 1 << s)),
                );
            let fresh: Vec<usize> = weaker.filter(|&x| !self.member[x]).collect();
            for x in fresh {
                if !self.member[x] {
                    self.insert(x, CmWitness::Relaxation { parent: parent.clone() });
                    stack.push(x);
                }
            }
        }
        true
    }

    fn insert(&mut self, id: usize, witness: CmWitness) {
        self.member[id] = true;
        self.witness.insert(
            id,
            Witnessed {
                order: self.next_order,
                witness,
            },
        );
        self.next_order += 1;
    }

    /// Members with no single-step strengthening inside the set.
    fn maxima(&self) -> Vec<usize> {
        let sp = self.space;
        (0..sp.len())
            .filter(|&id| self.member[id])
            .filter(|&id| {
                let (ant, con) = sp.split(id);
                let stronger_ant = (0..sp.pa)
                    .filter(|&t| ant >> t & 1 == 0)
                    .any(|t| self.member[sp.id(ant | 1 << t, con)]);
                let stronger_con = (0..sp.pb)
                    .filter(|&s| con >> s & 1 == 1)
                    .any(|s| self.member[sp.id(ant, con & !(1 << s))]);
                !stronger_ant && !stronger_con
            })
            .collect()
    }

    fn compiled(&mut self, arities: &[usize]) {
        if self.schemes.contains_key(arities) {
            return;
        }
        let sp = self.space;
        let list = canonical_schemes(arities, sp.m, self.bounds.max_indets)
            .into_iter()
            .map(|scheme| {
                let v = scheme.indeterminates();
                let (sig_a, idx_a) = rank_table(scheme.family(), v, sp.m, sp.a.size());
                let (sig_b, idx_b) = rank_table(scheme.family(), v, sp.m, sp.b.size());
                Compiled {
                    scheme,
                    sig_a,
                    idx_a,
                    sig_b,
                    idx_b,
                }
            })
            .collect();
        self.schemes.insert(arities.to_vec(), list);
    }

    /// One round of G2-G4 over the current maxima and `external` sources.
    /// Returns whether anything was added.
    fn round(&mut self, external: &[Source], cfg: &Config) -> Result<bool> {
        let sp = self.space;
        let mut sources: Vec<Source> = self
            .maxima()
            .into_iter()
            .map(|id| {
                let (ant, con) = sp.split(id);
                Source { arity: sp.m, ant, con }
            })
            .collect();
        sources.extend(external.iter().cloned());
        sources.sort_by_key(|x| (x.arity, x.ant, x.con));
        sources.dedup();
        let fresh: Vec<bool> = sources.iter().map(|s| !self.processed.contains(s)).collect();

        let mut combos: Vec<Vec<usize>> = Vec::new();
        for k in 1..=self.bounds.max_family {
            multisets(sources.len(), k, &mut |c| {
                if c.iter().any(|&i| fresh[i]) {
                    combos.push(c.to_vec());
                }
            });
        }
        let mut work: u128 = 0;
        for c in &combos {
            let arities: Vec<usize> = c.iter().map(|&i| sources[i].arity).collect();
            self.compiled(&arities);
            work += self.schemes[&arities].len() as u128;
        }
        if work > cfg.max_columns as u128 {
            return Err(Error::Budget {
                what: format!("generator moves into arity {}", sp.m),
                count: work,
                limit: cfg.max_columns as u128,
            });
        }

        let member = &self.member;
        let schemes = &self.schemes;
        let found = par::map_slice(cfg.execution, &combos, |c| {
            let arities: Vec<usize> = c.iter().map(|&i| sources[i].arity).collect();
            let ants: Vec<u64> = c.iter().map(|&i| sources[i].ant).collect();
            let cons: Vec<u64> = c.iter().map(|&i| sources[i].con).collect();
            let mut hits: Vec<(usize, usize)> = Vec::new();
            for (k, cs) in schemes[&arities].iter().enumerate() {
                let ant = apply(&cs.idx_a, cs.sig_a, &ants);
                let con = apply(&cs.idx_b, cs.sig_b, &cons);
                let id = sp.id(ant, con);
                if !member[id] && !hits.iter().any(|&(x, _)| x == id) {
                    hits.push((id, k));
                }
            }
            hits
        });

        self.processed.extend(sources.iter().cloned());
        let mut added = false;
        for (c, hits) in combos.iter().zip(found) {
            for (id, k) in hits {
                if self.member[id] {
                    continue;
                }
                let arities: Vec<usize> = c.iter().map(|&i| sources[i].arity).collect();
                let scheme = self.schemes[&arities][k].scheme.clone();
                let family = c.iter().map(|&i| sources[i].constraint(sp.a, sp.b)).collect();
                added |= self.add(id, CmWitness::Minor { family, scheme });
            }
        }
        Ok(added)
    }

    /// Runs rounds until nothing changes or the iteration limit is hit.
    /// Returns whether the member set grew.
    fn run(&mut self, external: &[Source], cfg: &Config) -> Result<bool> {
        let before = self.next_order;
        self.converged = false;
        while self.rounds < self.bounds.max_iterations {
            self.rounds += 1;
            if !self.round(external, cfg)? {
                self.converged = true;
                break;
            }
        }
        Ok(self.next_order != before)
    }

    fn maxima_sources(&self) -> Vec<Source> {
        self.maxima()
            .into_iter()
            .map(|id| {
                let (ant, con) = self.space.split(id);
                Source {
                    arity: self.space.m,
                    ant,
                    con,
                }
            })
            .collect()
    }

    fn drain_into(self, set: &mut ConstraintSet, witnesses: &mut BTreeMap<Constraint, Witnessed>, offset: usize) {
        let sp = self.space;
        let mut members: Vec<(usize, Witnessed)> = self.witness.into_iter().collect();
        members.sort_by_key(|(_, w)| w.order);
        for (id, mut w) in members {
            let c = sp.constraint(id);
            w.order += offset;
            set.extend_unchecked(std::iter::once(c.clone()));
            witnesses.insert(c, w);
        }
    }
}

/// Nondecreasing index tuples of length `k` over `0..n`.
fn multisets(n: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i, cur, visit);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::with_capacity(k), visit);
}

/// Bounded `CM_m(T_m)`: least set containing `T_m`, the equality and the
/// empty constraint, closed under single-tuple relaxation and under tight
/// minors of at most `max_family` maximal members with at most
/// `max_indets` indeterminates. Always a subset of the true closure.
pub fn cm_m_closure(t: &ConstraintSet, m: usize, bounds: &CmBounds, cfg: &Config) -> Result<CmClosure> {
    if let Some(n) = t.single_arity()? {
        if n != m {
            return Err(Error::ArityMismatch {
                context: "CM_m input",
                expected: m,
                found: n,
            });
        }
    }
    let mut e = Engine::new(t.source(), t.target(), m, *bounds, cfg)?;
    for c in t.iter() {
        e.seed(c)?;
    }
    e.run(&[], cfg)?;
    let (converged, rounds) = (e.converged, e.rounds);
    let mut set = ConstraintSet::new(t.source(), t.target());
    let mut witnesses = BTreeMap::new();
    e.drain_into(&mut set, &mut witnesses, 0);
    Ok(CmClosure {
        set,
        converged,
        rounds,
        witnesses,
    })
}

/// `CM_m(T_m)` through the Galois connection: `CSF_m(FSC_n(T_m))` at
/// `n = |A|^m`. Every m-ary antecedent has at most `|A|^m` tuples, so each
/// constraint is its own small relaxation and `LO_n` is the identity there.
pub fn cm_m_oracle(t: &ConstraintSet, m: usize, cfg: &Config) -> Result<ConstraintSet> {
    let n = t
        .source()
        .power(m)
        .ok_or_else(|| Error::Range("tuple space overflows".into()))?;
    csf_m(&fsc_n(t, n, cfg)?, m, cfg)
}

/// Outcome of comparing the bounded closure with the oracle.
#[derive(Debug, Clone)]
pub struct CmCertificate {
    pub closure: CmClosure,
    pub oracle: ConstraintSet,
    /// Bounds of the final attempt.
    pub bounds: CmBounds,
    /// Number of bound increases needed.
    pub escalations: usize,
    pub agrees: bool,
}

/// Runs [`cm_m_closure`] and compares with [`cm_m_oracle`]; while the
/// bounded result is a strict subset, raises the indeterminate and family
/// bounds (up to `limit` escalations) and retries.
pub fn cm_m_certified(
    t: &ConstraintSet,
    m: usize,
    bounds: &CmBounds,
    limit: usize,
    cfg: &Config,
) -> Result<CmCertificate> {
    let oracle = cm_m_oracle(t, m, cfg)?;
    let mut current = *bounds;
    let mut escalations = 0;
    loop {
        let closure = cm_m_closure(t, m, &current, cfg)?;
        let agrees = closure.set == oracle;
        let strict_subset = !agrees && closure.set.is_subset(&oracle);
        if agrees || !strict_subset || escalations == limit {
            return Ok(CmCertificate {
                closure,
                oracle,
                bounds: current,
                escalations,
                agrees,
            });
        }
        escalations += 1;
        if escalations % 2 == 1 {
            current.max_indets += 1;
        } else {
            current.max_family += 1;
        }
    }
}

/// The conjunctive-minor closure across arities, materialized at arities
/// `1..=cap`. Generator families may draw on members of any materialized
/// arity and on input members of any arity.
pub fn cm_closure(t: &ConstraintSet, cap: usize, bounds: &CmBounds, cfg: &Config) -> Result<CmClosure> {
    if cap == 0 {
        return Err(Error::Range("arity cap must be at least 1".into()));
    }
    bounds.validate()?;
    let (a, b) = (t.source(), t.target());
    let mut engines = Vec::with_capacity(cap);
    for m in 1..=cap {
        let mut e = Engine::new(a, b, m, *bounds, cfg)?;
        for c in t.at_arity(m) {
            e.seed(c)?;
        }
        engines.push(e);
    }
    let wide: Vec<Source> = t
        .iter()
        .filter(|c| c.arity() > cap)
        .map(Source::of)
        .collect::<Result<_>>()?;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < bounds.max_iterations {
        sweeps += 1;
        let mut changed = false;
        for i in 0..cap {
            let mut external = wide.clone();
            for (j, other) in engines.iter().enumerate() {
                if j != i {
                    external.extend(other.maxima_sources());
                }
            }
            changed |= engines[i].run(&external, cfg)?;
            if !engines[i].converged {
                changed = true;
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    let rounds = engines.iter().map(|e| e.rounds).sum();
    let mut set = ConstraintSet::new(a, b).with_cap(cap);
    let mut witnesses = BTreeMap::new();
    let mut offset = 0;
    for e in engines {
        let n = e.next_order;
        e.drain_into(&mut set, &mut witnesses, offset);
        offset += n;
    }
    Ok(CmClosure {
        set,
        converged,
        rounds,
        witnesses,
    })
}

/// `CM(T) ∩ Q_m` for each `m <= cap` through the Galois connection.
pub fn cm_oracle(t: &ConstraintSet, cap: usize, cfg: &Config) -> Result<ConstraintSet> {
    let mut out = ConstraintSet::new(t.source(), t.target()).with_cap(cap);
    for m in 1..=cap {
        out.extend_unchecked(cm_m_oracle(t, m, cfg)?.iter().cloned());
    }
    Ok(out)
}

/// Dense membership of the arity-`m` part of `t`.
fn dense(t: &ConstraintSet, sp: &Space) -> Result<Vec<bool>> {
    let mut member = vec![false; sp.len()];
    for c in t.at_arity(sp.m) {
        member[sp.id_of(c)?] = true;
    }
    Ok(member)
}

/// `LO_n(T)`: adds, per arity present in `t`, every constraint all of
/// whose relaxations with antecedent of at most `n` tuples lie in `t`.
pub fn lo_n_closure(t: &ConstraintSet, n: usize, cfg: &Config) -> Result<ConstraintSet> {
    if n == 0 {
        return Err(Error::Range("local closure parameter must be at least 1".into()));
    }
    let (a, b) = (t.source(), t.target());
    let mut out = t.clone();
    for m in t.arities() {
        let sp = Space::new(a, b, m, cfg)?;
        let member = dense(t, &sp)?;
        let nb = 1usize << sp.pb;
        // up[R'][S]: (R', S') ∈ T for every S' ⊇ S
        let small: Vec<u64> = (0..1u64 << sp.pa).filter(|r| r.count_ones() as usize <= n).collect();
        let tables = par::map_slice(cfg.execution, &small, |&r| {
            let mut up = vec![false; nb];
            for s in (0..nb).rev() {
                up[s] = member[sp.id(r, s as u64)] && (0..sp.pb).all(|bit| s >> bit & 1 == 1 || up[s | 1 << bit]);
            }
            up
        });
        let mut up: HashMap<u64, Vec<bool>> = small.iter().copied().zip(tables).collect();
        up.shrink_to_fit();
        let antecedents: Vec<u64> = (0..1u64 << sp.pa).collect();
        let added = par::map_slice(cfg.execution, &antecedents, |&r| {
            let subs = submasks_up_to(r, n);
            (0..nb as u64)
                .filter(|&s| !member[sp.id(r, s)])
                .filter(|&s| subs.iter().all(|sub| up[sub][s as usize]))
                .map(|s| sp.id(r, s))
                .collect::<Vec<_>>()
        });
        out.extend_unchecked(added.into_iter().flatten().map(|id| sp.constraint(id)));
    }
    Ok(out)
}

/// Submasks of `r` with at most `k` bits.
fn submasks_up_to(r: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut sub = r;
    loop {
        if sub.count_ones() as usize <= k {
            out.push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & r;
    }
    out
}

/// `LO(T)`, the identity on finite domains; computed as `LO_n` at
/// `n = max |A|^m` and checked against `t`.
pub fn lo_constraints_closure(t: &ConstraintSet, cfg: &Config) -> Result<ConstraintSet> {
    let Some(top) = t.arities().last() else {
        return Ok(t.clone());
    };
    let n = t
        .source()
        .power(top)
        .ok_or_else(|| Error::Range("tuple space overflows".into()))?;
    let out = lo_n_closure(t, n, cfg)?;
    assert_eq!(&out, t, "full-size local closure must be the identity");
    Ok(out)
}

/// Closes `t` under relaxation at every arity present.
pub fn relaxation_closure(t: &ConstraintSet, cfg: &Config) -> Result<ConstraintSet> {
    let (a, b) = (t.source(), t.target());
    let mut out = ConstraintSet::new(a, b);
    for m in t.arities() {
        let sp = Space::new(a, b, m, cfg)?;
        let mut member = dense(t, &sp)?;
        let mut stack: Vec<usize> = (0..sp.len()).filter(|&i| member[i]).collect();
        while let Some(cur) = stack.pop() {
            let (ant, con) = sp.split(cur);
            for t in (0..sp.pa).filter(|&t| ant >> t & 1 == 1) {
                let x = sp.id(ant & !(1 << t), con);
                if !member[x] {
                    member[x] = true;
                    stack.push(x);
                }
            }
            for s in (0..sp.pb).filter(|&s| con >> s & 1 == 0) {
                let x = sp.id(ant, con | 1 << s);
                if !member[x] {
                    member[x] = true;
                    stack.push(x);
                }
            }
        }
        out.extend_unchecked((0..sp.len()).filter(|&i| member[i]).map(|i| sp.constraint(i)));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionCheck {
    pub closed: bool,
    /// A pair whose union is missing, when not closed.
    pub witness: Option<(Constraint, Constraint)>,
}

/// Pairwise union closure per arity, which for finite sets is closure
/// under all nonempty unions.
pub fn union_closure_check(t: &ConstraintSet) -> Result<UnionCheck> {
    for m in t.arities() {
        let members: Vec<&Constraint> = t.at_arity(m).collect();
        for (i, x) in members.iter().enumerate() {
            for y in &members[i + 1..] {
                let u = Constraint::new(
                    x.antecedent().union(y.antecedent())?,
                    x.consequent().union(y.consequent())?,
                )?;
                if !t.contains(&u) {
                    return Ok(UnionCheck {
                        closed: false,
                        witness: Some(((*x).clone(), (*y).clone())),
                    });
                }
            }
        }
    }
    Ok(UnionCheck {
        closed: true,
        witness: None,
    })
}
