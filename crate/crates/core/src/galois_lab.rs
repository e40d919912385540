//! Verification harness. Closure-law audits, Galois-connection axioms,
//! factorization identities and definability equivalences, each side
//! computed by a separate code path and compared set against set.
//!
//! Identities quantified over all arities are instantiated at the finite
//! stabilization bounds: `Lo_m` is the identity on n-ary classes once
//! `m >= |A|^n` (a function is determined by its full table) and `LO_n`
//! is the identity on m-ary sets once `n >= |A|^m` (every constraint is
//! its own small relaxation).

use std::fmt;
use std::time::{Duration, Instant};

use crate::class::{ConstraintSet, FunctionClass, ObjectSet};
use crate::config::Config;
use crate::constraint_closures::{
    cm_closure, cm_m_certified, cm_m_closure, lo_constraints_closure, lo_n_closure, relaxation_closure,
    union_closure_check, CmBounds,
};
use crate::error::{Error, Result};
use crate::function::FunctionTable;
use crate::function_closures::{lo_closure, lo_m_closure, vs_closure, vs_n_closure};
use crate::minors::{compose_schemes, tight_minor, Scheme};
use crate::relation::Constraint;
use crate::satisfaction::{csf, csf_m, fsc, fsc_n, fsc_n_csf_m};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Witness {
    Function(FunctionTable),
    Constraint(Constraint),
}

impl From<FunctionTable> for Witness {
    fn from(f: FunctionTable) -> Self {
        Witness::Function(f)
    }
}

impl From<Constraint> for Witness {
    fn from(c: Constraint) -> Self {
        Witness::Constraint(c)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Function(t) => write!(f, "function arity {} {}", t.arity(), t),
            Witness::Constraint(c) => write!(f, "constraint arity {} {}", c.arity(), c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    LhsOnly,
    RhsOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub side: Side,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// LHS is a strict subset of RHS.
    LhsStrict,
    /// RHS is a strict subset of LHS.
    RhsStrict,
    Incomparable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::LhsStrict => "lhs_strict",
            Verdict::RhsStrict => "rhs_strict",
            Verdict::Incomparable => "incomparable",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub identity_name: String,
    pub parameters: Vec<(String, String)>,
    pub lhs_size: usize,
    pub rhs_size: usize,
    /// Bounded by `Config::max_witnesses`.
    pub symmetric_difference: Vec<Discrepancy>,
    pub verdict: Verdict,
    /// Whether the checked statement holds on this instance. For set
    /// identities this is `verdict == Equal`; equivalence checks may hold
    /// with unequal sides.
    pub holds: bool,
    pub notes: Vec<String>,
    pub runtime: Duration,
}

/// Compares two sets, keeping at most `limit` witnesses.
pub fn compare<S>(lhs: &S, rhs: &S, limit: usize) -> (Verdict, Vec<Discrepancy>)
where
    S: ObjectSet,
    S::Item: Into<Witness>,
{
    let lhs_only = lhs.difference(rhs);
    let rhs_only = rhs.difference(lhs);
    let verdict = match (lhs_only.is_empty(), rhs_only.is_empty()) {
        (true, true) => Verdict::Equal,
        (true, false) => Verdict::LhsStrict,
        (false, true) => Verdict::RhsStrict,
        (false, false) => Verdict::Incomparable,
    };
    let diffs = lhs_only
        .into_iter()
        .map(|w| (Side::LhsOnly, w))
        .chain(rhs_only.into_iter().map(|w| (Side::RhsOnly, w)))
        .take(limit.max(1))
        .map(|(side, w)| Discrepancy {
            side,
            witness: w.into(),
        })
        .collect();
    (verdict, diffs)
}

fn params(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn set_report<S>(
    name: &str,
    parameters: Vec<(String, String)>,
    lhs: &S,
    rhs: &S,
    cfg: &Config,
    start: Instant,
) -> ClosureReport
where
    S: ObjectSet,
    S::Item: Into<Witness>,
{
    let (verdict, symmetric_difference) = compare(lhs, rhs, cfg.max_witnesses);
    ClosureReport {
        identity_name: name.to_string(),
        parameters,
        lhs_size: lhs.len(),
        rhs_size: rhs.len(),
        symmetric_difference,
        verdict,
        holds: verdict == Verdict::Equal,
        notes: Vec::new(),
        runtime: start.elapsed(),
    }
}

/// A closure-operator handle for the law audit.
pub trait ClosureOperator: Sync {
    type Set: ObjectSet;
    fn name(&self) -> String;
    fn apply(&self, x: &Self::Set, cfg: &Config) -> Result<Self::Set>;
}

pub struct IdentityOperator<S>(std::marker::PhantomData<S>);

impl<S> Default for IdentityOperator<S> {
    fn default() -> Self {
        IdentityOperator(std::marker::PhantomData)
    }
}

impl<S: ObjectSet> ClosureOperator for IdentityOperator<S> {
    type Set = S;
    fn name(&self) -> String {
        "identity".into()
    }
    fn apply(&self, x: &S, _: &Config) -> Result<S> {
        Ok(x.clone())
    }
}

/// `VS_n` on single-arity classes.
pub struct VsN;

impl ClosureOperator for VsN {
    type Set = FunctionClass;
    fn name(&self) -> String {
        "VS_n".into()
    }
    fn apply(&self, x: &FunctionClass, _: &Config) -> Result<FunctionClass> {
        vs_n_closure(x)
    }
}

/// `VS` materialized up to `cap`, on classes of arity at most `cap`.
pub struct Vs {
    pub cap: usize,
}

impl ClosureOperator for Vs {
    type Set = FunctionClass;
    fn name(&self) -> String {
        format!("VS (cap {})", self.cap)
    }
    fn apply(&self, x: &FunctionClass, cfg: &Config) -> Result<FunctionClass> {
        vs_closure(x, self.cap, cfg)
    }
}

pub struct LoM {
    pub m: usize,
}

impl ClosureOperator for LoM {
    type Set = FunctionClass;
    fn name(&self) -> String {
        format!("Lo_{}", self.m)
    }
    fn apply(&self, x: &FunctionClass, cfg: &Config) -> Result<FunctionClass> {
        lo_m_closure(x, self.m, cfg)
    }
}

pub struct LoN {
    pub n: usize,
}

impl ClosureOperator for LoN {
    type Set = ConstraintSet;
    fn name(&self) -> String {
        format!("LO_{}", self.n)
    }
    fn apply(&self, x: &ConstraintSet, cfg: &Config) -> Result<ConstraintSet> {
        lo_n_closure(x, self.n, cfg)
    }
}

/// Bounded `CM_m`.
pub struct CmM {
    pub m: usize,
    pub bounds: CmBounds,
}

impl ClosureOperator for CmM {
    type Set = ConstraintSet;
    fn name(&self) -> String {
        format!("CM_{}", self.m)
    }
    fn apply(&self, x: &ConstraintSet, cfg: &Config) -> Result<ConstraintSet> {
        let out = cm_m_closure(x, self.m, &self.bounds, cfg)?;
        if !out.converged {
            return Err(Error::Invalid("CM_m fixpoint did not converge".into()));
        }
        Ok(out.set)
    }
}

/// Extensive, monotone and idempotent on every sample. Monotonicity is
/// tested on the pair `X_i ⊆ X_i ∪ X_{i+1}`.
pub fn check_closure_laws<O>(op: &O, samples: &[O::Set], cfg: &Config) -> Result<ClosureReport>
where
    O: ClosureOperator,
    <O::Set as ObjectSet>::Item: Into<Witness>,
{
    let start = Instant::now();
    let mut passing = 0;
    let mut first: Option<(String, Verdict, Vec<Discrepancy>)> = None;
    for (i, x) in samples.iter().enumerate() {
        let y = x.union(&samples[(i + 1) % samples.len()]);
        let cx = op.apply(x, cfg)?;
        let ccx = op.apply(&cx, cfg)?;
        let cy = op.apply(&y, cfg)?;
        let failure = if !x.is_subset(&cx) {
            Some(("extensive", x, &cx))
        } else if ccx != cx {
            Some(("idempotent", &ccx, &cx))
        } else if !cx.is_subset(&cy) {
            Some(("monotone", &cx, &cy))
        } else {
            None
        };
        match failure {
            None => passing += 1,
            Some((law, l, r)) if first.is_none() => {
                let (verdict, diffs) = compare(l, r, cfg.max_witnesses);
                first = Some((format!("{law} fails on sample {i}"), verdict, diffs));
            }
            Some(_) => {}
        }
    }
    let (notes, verdict, symmetric_difference) = match first {
        None => (
            vec!["extensive, monotone and idempotent on every sample".to_string()],
            Verdict::Equal,
            vec![],
        ),
        Some((note, v, d)) => (vec![note], v, d),
    };
    Ok(ClosureReport {
        identity_name: format!("closure laws of {}", op.name()),
        parameters: params(&[("samples", samples.len().to_string())]),
        lhs_size: samples.len(),
        rhs_size: passing,
        symmetric_difference,
        verdict,
        holds: passing == samples.len(),
        notes,
        runtime: start.elapsed(),
    })
}

/// Arity caps for the Galois-axiom check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub functions: usize,
    pub constraints: usize,
}

/// Galois-connection axioms at capped arities: `K ⊆ FSC(T) ⇔ T ⊆ CSF(K)`,
/// order reversal of both maps, extensivity of both composites, and
/// `FSC∘CSF∘FSC = FSC`, `CSF∘FSC∘CSF = CSF`.
pub fn check_galois_axioms(k: &FunctionClass, t: &ConstraintSet, caps: Caps, cfg: &Config) -> Result<ClosureReport> {
    let start = Instant::now();
    let (nc, mc) = (caps.functions, caps.constraints);
    let k = FunctionClass::from_tables(k.dom(), k.cod(), k.iter().filter(|f| f.arity() <= nc).cloned())?;
    let t = ConstraintSet::from_constraints(t.source(), t.target(), t.iter().filter(|c| c.arity() <= mc).cloned())?;

    let fsc_t = fsc(&t, nc, cfg)?;
    let csf_k = csf(&k, mc, cfg)?;
    let k_big = k.union(&fsc_t);
    let t_big = t.union(&csf_k);
    let csf_k_big = csf(&k_big, mc, cfg)?;
    let fsc_t_big = fsc(&t_big, nc, cfg)?;
    let fsc_csf_k = fsc(&csf_k, nc, cfg)?;
    let csf_fsc_t = csf(&fsc_t, mc, cfg)?;
    let fsc_csf_fsc_t = fsc(&csf_fsc_t, nc, cfg)?;
    let csf_fsc_csf_k = csf(&fsc_csf_k, mc, cfg)?;

    let mut notes = Vec::new();
    let mut failure: Option<(Verdict, Vec<Discrepancy>)> = None;
    let mut record = |label: &str, ok: bool, detail: Option<(Verdict, Vec<Discrepancy>)>| {
        notes.push(format!("{label}: {}", if ok { "ok" } else { "violated" }));
        if !ok && failure.is_none() {
            failure = Some(detail.unwrap_or((Verdict::Incomparable, vec![])));
        }
    };
    let adjunction = k.is_subset(&fsc_t) == t.is_subset(&csf_k);
    record("K ⊆ FSC(T) iff T ⊆ CSF(K)", adjunction, None);
    let sub = |x: &ConstraintSet, y: &ConstraintSet| (x.is_subset(y), Some(compare(x, y, cfg.max_witnesses)));
    let subf = |x: &FunctionClass, y: &FunctionClass| (x.is_subset(y), Some(compare(x, y, cfg.max_witnesses)));
    let (ok, d) = sub(&csf_k_big, &csf_k);
    record("CSF reverses inclusion", ok, d);
    let (ok, d) = subf(&fsc_t_big, &fsc_t);
    record("FSC reverses inclusion", ok, d);
    let (ok, d) = subf(&k, &fsc_csf_k);
    record("K ⊆ FSC(CSF(K))", ok, d);
    let (ok, d) = sub(&t, &csf_fsc_t);
    record("T ⊆ CSF(FSC(T))", ok, d);
    let (ok, d) = (
        fsc_csf_fsc_t == fsc_t,
        Some(compare(&fsc_csf_fsc_t, &fsc_t, cfg.max_witnesses)),
    );
    record("FSC∘CSF∘FSC = FSC", ok, d);
    let (ok, d) = (
        csf_fsc_csf_k == csf_k,
        Some(compare(&csf_fsc_csf_k, &csf_k, cfg.max_witnesses)),
    );
    record("CSF∘FSC∘CSF = CSF", ok, d);

    let holds = failure.is_none();
    let (verdict, symmetric_difference) = failure.unwrap_or((Verdict::Equal, vec![]));
    Ok(ClosureReport {
        identity_name: "Galois connection axioms".into(),
        parameters: params(&[
            ("function arity cap", nc.to_string()),
            ("constraint arity cap", mc.to_string()),
            ("|A|", k.dom().size().to_string()),
            ("|B|", k.cod().size().to_string()),
        ]),
        lhs_size: fsc_t.len(),
        rhs_size: csf_k.len(),
        symmetric_difference,
        verdict,
        holds,
        notes,
        runtime: start.elapsed(),
    })
}

/// The two-sided identities between Galois composites and closure
/// operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factorization {
    /// `FSC(CSF(K)) = Lo(VS(K))` at arities up to `cap`.
    Functions { cap: usize },
    /// `CSF(FSC_n(T)) = LO_n(CM(T))` at arities up to `cap`.
    ConstraintsOfNary { n: usize, cap: usize },
    /// `CSF_m(FSC(T_m)) = LO(CM_m(T_m))`.
    MaryConstraints { m: usize },
    /// `FSC_n(CSF_m(K_n)) = Lo_m(VS_n(K_n))`.
    FixedArityFunctions { n: usize, m: usize },
    /// `CSF_m(FSC_n(T_m)) = LO_n(CM_m(T_m))`.
    FixedArityConstraints { n: usize, m: usize },
}

impl Factorization {
    pub fn formula(&self) -> &'static str {
        match self {
            Factorization::Functions { .. } => "FSC(CSF(K)) = Lo(VS(K))",
            Factorization::ConstraintsOfNary { .. } => "CSF(FSC_n(T)) = LO_n(CM(T))",
            Factorization::MaryConstraints { .. } => "CSF_m(FSC(T_m)) = LO(CM_m(T_m))",
            Factorization::FixedArityFunctions { .. } => "FSC_n(CSF_m(K_n)) = Lo_m(VS_n(K_n))",
            Factorization::FixedArityConstraints { .. } => "CSF_m(FSC_n(T_m)) = LO_n(CM_m(T_m))",
        }
    }
}

/// Input of a verification run.
#[derive(Debug, Clone, Copy)]
pub enum Instance<'a> {
    Functions(&'a FunctionClass),
    Constraints(&'a ConstraintSet),
}

impl<'a> Instance<'a> {
    fn functions(self) -> Result<&'a FunctionClass> {
        match self {
            Instance::Functions(k) => Ok(k),
            Instance::Constraints(_) => Err(Error::Invalid("this check takes a function class".into())),
        }
    }

    fn constraints(self) -> Result<&'a ConstraintSet> {
        match self {
            Instance::Constraints(t) => Ok(t),
            Instance::Functions(_) => Err(Error::Invalid("this check takes a constraint set".into())),
        }
    }
}

fn single_arity_class(k: &FunctionClass, n: usize) -> Result<()> {
    match k.single_arity()? {
        Some(a) if a != n => Err(Error::ArityMismatch {
            context: "n-ary class",
            expected: n,
            found: a,
        }),
        _ => Ok(()),
    }
}

fn single_arity_set(t: &ConstraintSet, m: usize) -> Result<()> {
    match t.single_arity()? {
        Some(a) if a != m => Err(Error::ArityMismatch {
            context: "m-ary constraint set",
            expected: m,
            found: a,
        }),
        _ => Ok(()),
    }
}

fn stable_arity(k_dom: crate::domain::Domain, n: usize) -> Result<usize> {
    k_dom
        .power(n)
        .ok_or_else(|| Error::Range("tuple space overflows".into()))
}

/// Computes both sides of `identity` on `input`. Left-hand sides use only
/// satisfaction and the Galois maps (with trace-constraint filtering for
/// `FSC_n∘CSF_m`); right-hand sides use only the closure operators.
pub fn verify_factorization(
    identity: Factorization,
    input: Instance<'_>,
    bounds: &CmBounds,
    cfg: &Config,
) -> Result<ClosureReport> {
    let start = Instant::now();
    let name = identity.formula();
    match identity {
        Factorization::FixedArityFunctions { n, m } => {
            let k = input.functions()?;
            single_arity_class(k, n)?;
            let lhs = fsc_n_csf_m(k, n, m, cfg)?;
            let rhs = lo_m_closure(&vs_n_closure(k)?, m, cfg)?;
            let p = params(&[
                ("n", n.to_string()),
                ("m", m.to_string()),
                ("|A|", k.dom().size().to_string()),
                ("|B|", k.cod().size().to_string()),
            ]);
            Ok(set_report(name, p, &lhs, &rhs, cfg, start))
        }
        Factorization::Functions { cap } => {
            let k = input.functions()?;
            let mut lhs = FunctionClass::new(k.dom(), k.cod()).with_cap(cap);
            for n in 1..=cap {
                let m_star = stable_arity(k.dom(), n)?;
                lhs = lhs.union(&fsc_n_csf_m(k, n, m_star, cfg)?);
            }
            let rhs = lo_closure(&vs_closure(k, cap, cfg)?, cfg)?;
            let p = params(&[
                ("cap", cap.to_string()),
                ("|A|", k.dom().size().to_string()),
                ("|B|", k.cod().size().to_string()),
            ]);
            let mut r = set_report(name, p, &lhs, &rhs, cfg, start);
            r.notes
                .push("CSF instantiated at m = |A|^n per function arity n".into());
            Ok(r)
        }
        Factorization::FixedArityConstraints { n, m } => {
            let t = input.constraints()?;
            single_arity_set(t, m)?;
            let lhs = csf_m(&fsc_n(t, n, cfg)?, m, cfg)?;
            let cm = cm_m_closure(t, m, bounds, cfg)?;
            let rhs = lo_n_closure(&cm.set, n, cfg)?;
            let p = params(&[
                ("n", n.to_string()),
                ("m", m.to_string()),
                ("|A|", t.source().size().to_string()),
                ("|B|", t.target().size().to_string()),
            ]);
            let mut r = set_report(name, p, &lhs, &rhs, cfg, start);
            note_cm(&mut r, cm.converged, bounds);
            Ok(r)
        }
        Factorization::MaryConstraints { m } => {
            let t = input.constraints()?;
            single_arity_set(t, m)?;
            let n_star = stable_arity(t.source(), m)?;
            let lhs = csf_m(&fsc_n(t, n_star, cfg)?, m, cfg)?;
            let cm = cm_m_closure(t, m, bounds, cfg)?;
            let rhs = lo_constraints_closure(&cm.set, cfg)?;
            let p = params(&[
                ("m", m.to_string()),
                ("|A|", t.source().size().to_string()),
                ("|B|", t.target().size().to_string()),
            ]);
            let mut r = set_report(name, p, &lhs, &rhs, cfg, start);
            r.notes.push(format!("FSC instantiated at n = |A|^m = {n_star}"));
            note_cm(&mut r, cm.converged, bounds);
            Ok(r)
        }
        Factorization::ConstraintsOfNary { n, cap } => {
            let t = input.constraints()?;
            let lhs = csf(&fsc_n(t, n, cfg)?, cap, cfg)?;
            let cm = cm_closure(t, cap, bounds, cfg)?;
            let rhs = lo_n_closure(&cm.set, n, cfg)?;
            let p = params(&[
                ("n", n.to_string()),
                ("cap", cap.to_string()),
                ("|A|", t.source().size().to_string()),
                ("|B|", t.target().size().to_string()),
            ]);
            let mut r = set_report(name, p, &lhs, &rhs, cfg, start);
            note_cm(&mut r, cm.converged, bounds);
            Ok(r)
        }
    }
}

fn note_cm(r: &mut ClosureReport, converged: bool, bounds: &CmBounds) {
    r.notes.push(format!(
        "CM bounds: family {}, indeterminates {}, {}",
        bounds.max_family,
        bounds.max_indets,
        if converged { "converged" } else { "not converged" }
    ));
}

/// Equivalences between closure conditions and being a Galois-closed set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definability {
    /// `K_n` definable by constraints iff closed under `VS_n` (local
    /// closure is automatic on finite domains).
    NaryClass { n: usize },
    /// `T` characterized by n-ary functions iff `LO_n`- and `CM`-closed,
    /// checked at arities up to `cap`.
    NaryCharacterized { n: usize, cap: usize },
    /// `K_n` definable by m-ary constraints iff `Lo_m`- and `VS_n`-closed.
    MaryDefinable { n: usize, m: usize },
    /// `T_m` characterized within `Q_m` by n-ary functions iff `LO_n`- and
    /// `CM_m`-closed.
    MaryCharacterized { n: usize, m: usize },
    /// Every unary class is definable by constraints.
    UnaryClass,
    /// `T` characterized by unary functions iff union-closed and
    /// `CM`-closed, checked at arities up to `cap`.
    UnaryCharacterized { cap: usize },
}

impl Definability {
    pub fn statement(&self) -> &'static str {
        match self {
            Definability::NaryClass { .. } => "K_n = FSC_n(CSF(K_n)) iff K_n is VS_n-closed",
            Definability::NaryCharacterized { .. } => "T = CSF(FSC_n(T)) iff T is LO_n-closed and CM-closed",
            Definability::MaryDefinable { .. } => "K_n = FSC_n(CSF_m(K_n)) iff K_n is Lo_m-closed and VS_n-closed",
            Definability::MaryCharacterized { .. } => "T_m = CSF_m(FSC_n(T_m)) iff T_m is LO_n-closed and CM_m-closed",
            Definability::UnaryClass => "K_1 = FSC_1(CSF(K_1)) for every unary K_1",
            Definability::UnaryCharacterized { .. } => "T = CSF(FSC_1(T)) iff T is union-closed and CM-closed",
        }
    }
}

/// Checks `(closure conditions) ⇔ (Galois fixed point)` on one instance.
/// The report compares the input (LHS) with its Galois closure (RHS);
/// `holds` records whether the equivalence is confirmed.
pub fn verify_definability(
    side: Definability,
    input: Instance<'_>,
    bounds: &CmBounds,
    cfg: &Config,
) -> Result<ClosureReport> {
    let start = Instant::now();
    let name = side.statement();
    let (mut report, predicate, detail) = match side {
        Definability::NaryClass { n } | Definability::MaryDefinable { n, .. } => {
            let k = input.functions()?;
            single_arity_class(k, n)?;
            let m = match side {
                Definability::MaryDefinable { m, .. } => m,
                _ => stable_arity(k.dom(), n)?,
            };
            let galois = fsc_n_csf_m(k, n, m, cfg)?;
            let vs_closed = vs_n_closure(k)? == *k;
            let lo_closed = lo_m_closure(k, m, cfg)? == *k;
            let p = params(&[("n", n.to_string()), ("m", m.to_string())]);
            let r = set_report(name, p, k, &galois, cfg, start);
            (
                r,
                vs_closed && lo_closed,
                format!("VS_n-closed: {vs_closed}, Lo_m-closed: {lo_closed}"),
            )
        }
        Definability::UnaryClass => {
            let k = input.functions()?;
            single_arity_class(k, 1)?;
            let m = stable_arity(k.dom(), 1)?;
            let galois = fsc_n_csf_m(k, 1, m, cfg)?;
            let lo_closed = lo_closure(k, cfg)? == *k;
            let r = set_report(name, params(&[("m", m.to_string())]), k, &galois, cfg, start);
            (r, lo_closed, format!("locally closed: {lo_closed}"))
        }
        Definability::NaryCharacterized { cap, .. } | Definability::UnaryCharacterized { cap } => {
            let t = input.constraints()?;
            if t.arities().any(|m| m > cap) {
                return Err(Error::Range(format!("input has arities above the cap {cap}")));
            }
            let n = if let Definability::NaryCharacterized { n, .. } = side {
                n
            } else {
                1
            };
            let galois = csf(&fsc_n(t, n, cfg)?, cap, cfg)?;
            let cm = cm_closure(t, cap, bounds, cfg)?;
            let cm_closed = cm.set == *t;
            let (local, label) = if let Definability::UnaryCharacterized { .. } = side {
                (union_closure_check(t)?.closed, "union-closed")
            } else {
                (lo_n_closure(t, n, cfg)? == *t, "LO_n-closed")
            };
            let p = params(&[("n", n.to_string()), ("cap", cap.to_string())]);
            let r = set_report(name, p, t, &galois, cfg, start);
            (
                r,
                cm_closed && local,
                format!("CM-closed: {cm_closed}, {label}: {local}"),
            )
        }
        Definability::MaryCharacterized { n, m } => {
            let t = input.constraints()?;
            single_arity_set(t, m)?;
            let galois = csf_m(&fsc_n(t, n, cfg)?, m, cfg)?;
            let cm_closed = cm_m_closure(t, m, bounds, cfg)?.set == *t;
            let lo_closed = lo_n_closure(t, n, cfg)? == *t;
            let p = params(&[("n", n.to_string()), ("m", m.to_string())]);
            let r = set_report(name, p, t, &galois, cfg, start);
            (
                r,
                cm_closed && lo_closed,
                format!("CM_m-closed: {cm_closed}, LO_n-closed: {lo_closed}"),
            )
        }
    };
    let fixed = report.verdict == Verdict::Equal;
    report.holds = predicate == fixed;
    report.notes.push(detail);
    report
        .notes
        .push(format!("closure conditions: {predicate}, Galois fixed point: {fixed}"));
    report.runtime = start.elapsed();
    Ok(report)
}

/// Bounded `CM_m` against its Galois oracle, escalating bounds at most
/// `escalation_limit` times while the bounded result falls short.
pub fn check_cm_oracle(
    t: &ConstraintSet,
    m: usize,
    bounds: &CmBounds,
    escalation_limit: usize,
    cfg: &Config,
) -> Result<ClosureReport> {
    let start = Instant::now();
    let cert = cm_m_certified(t, m, bounds, escalation_limit, cfg)?;
    let p = params(&[("m", m.to_string())]);
    let mut r = set_report(
        "CM_m(T_m) = CSF_m(FSC_{|A|^m}(T_m))",
        p,
        &cert.closure.set,
        &cert.oracle,
        cfg,
        start,
    );
    note_cm(&mut r, cert.closure.converged, &cert.bounds);
    if cert.escalations > 0 {
        r.notes.push(format!("bounds escalated {} time(s)", cert.escalations));
    }
    Ok(r)
}

/// `Lo_m(K_n)` descends in `m` and equals `K_n` from `m = |A|^n` on.
pub fn check_function_chain(k: &FunctionClass, cfg: &Config) -> Result<ClosureReport> {
    let start = Instant::now();
    let Some(n) = k.single_arity()? else {
        return Err(Error::Invalid("chain check needs a non-empty n-ary class".into()));
    };
    let top = stable_arity(k.dom(), n)?;
    let chain = (1..=top + 1)
        .map(|m| lo_m_closure(k, m, cfg))
        .collect::<Result<Vec<_>>>()?;
    chain_report(
        "Lo_m(K_n) descends and stabilizes at m = |A|^n",
        n,
        top,
        k,
        &chain,
        cfg,
        start,
    )
}

/// `LO_n(T_m)` descends in `n` and equals `T_m` from `n = |A|^m` on.
pub fn check_constraint_chain(t: &ConstraintSet, cfg: &Config) -> Result<ClosureReport> {
    let start = Instant::now();
    let Some(m) = t.single_arity()? else {
        return Err(Error::Invalid("chain check needs a non-empty m-ary set".into()));
    };
    let top = stable_arity(t.source(), m)?;
    let chain = (1..=top + 1)
        .map(|n| lo_n_closure(t, n, cfg))
        .collect::<Result<Vec<_>>>()?;
    chain_report(
        "LO_n(T_m) descends and stabilizes at n = |A|^m",
        m,
        top,
        t,
        &chain,
        cfg,
        start,
    )
}

fn chain_report<S>(
    name: &str,
    arity: usize,
    top: usize,
    base: &S,
    chain: &[S],
    cfg: &Config,
    start: Instant,
) -> Result<ClosureReport>
where
    S: ObjectSet,
    S::Item: Into<Witness>,
{
    let mut notes = vec![format!(
        "sizes: {}",
        chain.iter().map(|c| c.len().to_string()).collect::<Vec<_>>().join(" ")
    )];
    let mut failure = None;
    for (i, w) in chain.windows(2).enumerate() {
        if !w[1].is_subset(&w[0]) {
            notes.push(format!("not descending at parameter {}", i + 1));
            failure.get_or_insert_with(|| compare(&w[1], &w[0], cfg.max_witnesses));
        }
    }
    for (i, c) in chain.iter().enumerate() {
        if !base.is_subset(c) {
            notes.push(format!("not extensive at parameter {}", i + 1));
            failure.get_or_insert_with(|| compare(base, c, cfg.max_witnesses));
        }
    }
    let tail = &chain[top - 1..];
    if let Some(bad) = tail.iter().find(|c| *c != base) {
        notes.push("not the identity at the stabilization bound".into());
        failure.get_or_insert_with(|| compare(bad, base, cfg.max_witnesses));
    }
    let first_stable = chain.iter().position(|c| c == base).map_or(0, |p| p + 1);
    notes.push(format!("first parameter giving the identity: {first_stable}"));
    let holds = failure.is_none();
    let (verdict, symmetric_difference) = failure.unwrap_or((Verdict::Equal, vec![]));
    Ok(ClosureReport {
        identity_name: name.to_string(),
        parameters: params(&[("arity", arity.to_string()), ("bound", top.to_string())]),
        lhs_size: chain[0].len(),
        rhs_size: base.len(),
        symmetric_difference,
        verdict,
        holds,
        notes,
        runtime: start.elapsed(),
    })
}

/// Flattened versus hierarchical tight minors: `outer` applied to the
/// minors of `families[j]` via `inners[j]`, against the composed scheme
/// applied to the concatenated families.
pub fn check_transitivity(
    outer: &Scheme,
    inners: &[Scheme],
    families: &[Vec<Constraint>],
    cfg: &Config,
) -> Result<ClosureReport> {
    let start = Instant::now();
    if families.len() != inners.len() {
        return Err(Error::ArityMismatch {
            context: "families per inner scheme",
            expected: inners.len(),
            found: families.len(),
        });
    }
    let flat = compose_schemes(outer, inners)?;
    let wide = Config {
        max_indets: cfg.max_indets.max(flat.indeterminates()),
        ..cfg.clone()
    };
    let middle = inners
        .iter()
        .zip(families)
        .map(|(s, fam)| tight_minor(fam, s, &wide))
        .collect::<Result<Vec<_>>>()?;
    let hierarchical = tight_minor(&middle, outer, &wide)?;
    let all: Vec<Constraint> = families.iter().flatten().cloned().collect();
    let flattened = tight_minor(&all, &flat, &wide)?;
    let (a, b) = (hierarchical.source(), hierarchical.target());
    let lhs = ConstraintSet::from_constraints(a, b, [flattened])?;
    let rhs = ConstraintSet::from_constraints(a, b, [hierarchical])?;
    let p = params(&[("outer", outer.to_string()), ("flattened", flat.to_string())]);
    Ok(set_report(
        "tight minor of composed scheme = composed tight minors",
        p,
        &lhs,
        &rhs,
        cfg,
        start,
    ))
}

/// For a relaxation-closed set: pairwise-union closure iff `LO_1(T) = T`.
pub fn check_union_locality(t: &ConstraintSet, cfg: &Config) -> Result<ClosureReport> {
    let start = Instant::now();
    if relaxation_closure(t, cfg)? != *t {
        return Err(Error::Invalid(
            "union-locality check needs a relaxation-closed set".into(),
        ));
    }
    let union = union_closure_check(t)?;
    let lo1 = lo_n_closure(t, 1, cfg)?;
    let mut r = set_report("union-closed iff LO_1(T) = T", params(&[]), t, &lo1, cfg, start);
    let local = r.verdict == Verdict::Equal;
    r.holds = union.closed == local;
    r.notes
        .push(format!("union-closed: {}, 1-locally closed: {local}", union.closed));
    if let Some((x, y)) = union.witness {
        r.notes.push(format!("union of {x} and {y} missing"));
    }
    Ok(r)
}
