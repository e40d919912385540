//! Minor formation schemes and conjunctive minors of constraint families.
//!
//! A scheme with target `m`, indeterminates `V = {v1..vk}` and maps
//! `h_j : n_j -> m ∪ V` sends a family of relations `R_j` to the relation
//! of all `a ∈ D^m` for which some Skolem assignment `σ : V -> D` puts
//! `(a + σ) ∘ h_j` in every `R_j`. The assignment is shared by the whole
//! family.

use std::fmt;
use std::str::FromStr;

use crate::config::Config;
use crate::domain::{pow_u128, unrank_into, Domain, Elem};
use crate::error::{Error, Result};
use crate::par;
use crate::relation::{relaxation_of, Constraint, Relation};

/// One entry of a scheme map: a target coordinate or an indeterminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// 0-based target coordinate.
    Coord(usize),
    /// 0-based indeterminate.
    Indet(usize),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Coord(i) => write!(f, "c{}", i + 1),
            Slot::Indet(i) => write!(f, "v{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scheme {
    target: usize,
    indeterminates: usize,
    family: Vec<Vec<Slot>>,
}

impl Scheme {
    pub fn new(target: usize, indeterminates: usize, family: Vec<Vec<Slot>>) -> Result<Self> {
        if target == 0 {
            return Err(Error::Scheme("target arity must be at least 1".into()));
        }
        if family.is_empty() {
            return Err(Error::Scheme("scheme family must be non-empty".into()));
        }
        for (j, h) in family.iter().enumerate() {
            if h.is_empty() {
                return Err(Error::Scheme(format!("map h{} has empty source", j + 1)));
            }
            for s in h {
                let ok = match *s {
                    Slot::Coord(i) => i < target,
                    Slot::Indet(u) => u < indeterminates,
                };
                if !ok {
                    return Err(Error::Scheme(format!("entry {s} of h{} out of range", j + 1)));
                }
            }
        }
        Ok(Scheme {
            target,
            indeterminates,
            family,
        })
    }

    /// The single-map scheme `h = (c1, .., cm)`.
    pub fn identity(m: usize) -> Result<Self> {
        Scheme::new(m, 0, vec![(0..m).map(Slot::Coord).collect()])
    }

    /// `k` identity maps at arity `m`; the tight minor is the intersection.
    pub fn intersection(m: usize, k: usize) -> Result<Self> {
        Scheme::new(m, 0, vec![(0..m).map(Slot::Coord).collect(); k])
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn indeterminates(&self) -> usize {
        self.indeterminates
    }

    pub fn family(&self) -> &[Vec<Slot>] {
        &self.family
    }

    /// Source arity `n_j` of every map.
    pub fn sources(&self) -> Vec<usize> {
        self.family.iter().map(Vec::len).collect()
    }

    /// Drops indeterminates no map mentions, renumbering the rest in order.
    pub fn normalize(&self) -> Scheme {
        let mut used = vec![false; self.indeterminates];
        for s in self.family.iter().flatten() {
            if let Slot::Indet(u) = *s {
                used[u] = true;
            }
        }
        let mut renumber = vec![0; self.indeterminates];
        let mut next = 0;
        for (u, &live) in used.iter().enumerate() {
            if live {
                renumber[u] = next;
                next += 1;
            }
        }
        let family = self
            .family
            .iter()
            .map(|h| {
                h.iter()
                    .map(|s| match *s {
                        Slot::Indet(u) => Slot::Indet(renumber[u]),
                        c => c,
                    })
                    .collect()
            })
            .collect();
        Scheme {
            target: self.target,
            indeterminates: next,
            family,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "target={}; V={}", self.target, self.indeterminates)?;
        for (j, h) in self.family.iter().enumerate() {
            write!(f, "; h{}=[", j + 1)?;
            for (i, s) in h.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Parses `target=2; V=1; h1=[c1,v1]; h2=[v1,c2]`. `V` defaults to 0;
/// maps must be numbered `h1..hk` without gaps.
impl FromStr for Scheme {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut target = None;
        let mut indets = 0usize;
        let mut maps: Vec<(usize, Vec<Slot>)> = Vec::new();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Scheme(format!("expected key=value, got `{part}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| Error::Scheme(format!("`{v}` is not a number")))
            };
            match key {
                "target" => target = Some(number(value)?),
                "V" | "v" => indets = number(value)?,
                _ if key.starts_with('h') => {
                    let j = number(&key[1..])?;
                    let body = value
                        .strip_prefix('[')
                        .and_then(|v| v.strip_suffix(']'))
                        .ok_or_else(|| Error::Scheme(format!("map `{key}` must be bracketed")))?;
                    let slots = body
                        .split(',')
                        .map(str::trim)
                        .map(|tok| {
                            let (kind, idx) = tok.split_at(tok.len().min(1));
                            let idx = number(idx)?;
                            if idx == 0 {
                                return Err(Error::Scheme(format!("`{tok}`: indices start at 1")));
                            }
                            match kind {
                                "c" => Ok(Slot::Coord(idx - 1)),
                                "v" => Ok(Slot::Indet(idx - 1)),
                                _ => Err(Error::Scheme(format!("bad entry `{tok}`"))),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    maps.push((j, slots));
                }
                _ => return Err(Error::Scheme(format!("unknown key `{key}`"))),
            }
        }
        maps.sort_by_key(|(j, _)| *j);
        for (pos, (j, _)) in maps.iter().enumerate() {
            if *j != pos + 1 {
                return Err(Error::Scheme(format!("maps must be numbered h1..h{}", maps.len())));
            }
        }
        let target = target.ok_or_else(|| Error::Scheme("missing target".into()))?;
        Scheme::new(target, indets, maps.into_iter().map(|(_, h)| h).collect())
    }
}

/// Values of the indeterminates witnessing membership in a tight minor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkolemAssignment {
    pub values: Vec<Elem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinorMode {
    Tight,
    /// Antecedent inside the tight antecedent.
    Restrictive,
    /// Consequent containing the tight consequent.
    Extensive,
    /// Both of the above: a relaxation of the tight minor.
    Conjunctive,
}

fn check_family(relations: &[&Relation], scheme: &Scheme, domain: Domain) -> Result<()> {
    if relations.len() != scheme.family.len() {
        return Err(Error::ArityMismatch {
            context: "scheme family length",
            expected: scheme.family.len(),
            found: relations.len(),
        });
    }
    for (r, h) in relations.iter().zip(&scheme.family) {
        if r.arity() != h.len() {
            return Err(Error::ArityMismatch {
                context: "scheme source arity",
                expected: h.len(),
                found: r.arity(),
            });
        }
        if r.domain() != domain {
            return Err(Error::DomainMismatch("scheme family"));
        }
    }
    Ok(())
}

fn check_skolem_budget(scheme: &Scheme, domain: Domain, cfg: &Config) -> Result<()> {
    if scheme.indeterminates > cfg.max_indets {
        return Err(Error::Budget {
            what: format!("Skolem search over {} indeterminates", scheme.indeterminates),
            count: pow_u128(domain.size() as u128, scheme.indeterminates as u128),
            limit: pow_u128(domain.size() as u128, cfg.max_indets as u128),
        });
    }
    Ok(())
}

/// Rank in `D^{n_j}` of `(a + σ) ∘ h`.
#[inline]
pub(crate) fn source_rank(h: &[Slot], a: &[Elem], sigma: &[Elem], size: usize) -> usize {
    h.iter().fold(0usize, |acc, s| {
        let e = match *s {
            Slot::Coord(i) => a[i],
            Slot::Indet(u) => sigma[u],
        };
        acc * size + e as usize
    })
}

fn find_sigma(relations: &[&Relation], scheme: &Scheme, a: &[Elem], size: usize) -> Option<Vec<Elem>> {
    let v = scheme.indeterminates;
    let mut sigma = vec![0 as Elem; v];
    let total = crate::domain::checked_pow(size, v).expect("Skolem space checked");
    for s in 0..total {
        unrank_into(s, size, &mut sigma);
        if relations
            .iter()
            .zip(&scheme.family)
            .all(|(r, h)| r.contains_rank(source_rank(h, a, &sigma, size)))
        {
            return Some(sigma);
        }
    }
    None
}

/// The tight conjunctive minor of a family of relations over `domain`.
pub fn tight_relation(relations: &[&Relation], scheme: &Scheme, domain: Domain, cfg: &Config) -> Result<Relation> {
    check_family(relations, scheme, domain)?;
    check_skolem_budget(scheme, domain, cfg)?;
    let m = scheme.target;
    let size = domain.size();
    let mut out = Relation::empty(domain, m)?;
    let hits = par::filter_map_range(cfg.execution, out.space(), |r| {
        let mut a = vec![0 as Elem; m];
        unrank_into(r, size, &mut a);
        find_sigma(relations, scheme, &a, size).map(|_| r)
    });
    for r in hits {
        out.insert_rank(r);
    }
    Ok(out)
}

/// A Skolem assignment placing `tuple` in the tight minor, if one exists.
pub fn skolem_witness(
    relations: &[&Relation],
    scheme: &Scheme,
    tuple: &[Elem],
    cfg: &Config,
) -> Result<Option<SkolemAssignment>> {
    let domain = relations
        .first()
        .map(|r| r.domain())
        .ok_or_else(|| Error::Scheme("empty family".into()))?;
    check_family(relations, scheme, domain)?;
    check_skolem_budget(scheme, domain, cfg)?;
    if tuple.len() != scheme.target {
        return Err(Error::ArityMismatch {
            context: "Skolem witness tuple",
            expected: scheme.target,
            found: tuple.len(),
        });
    }
    crate::domain::rank(domain, tuple)?;
    Ok(find_sigma(relations, scheme, tuple, domain.size()).map(|values| SkolemAssignment { values }))
}

/// Removes duplicate (constraint, map) pairs and unused indeterminates.
pub fn normalize_family(family: &[Constraint], scheme: &Scheme) -> (Vec<Constraint>, Scheme) {
    let mut pairs: Vec<(Constraint, Vec<Slot>)> = Vec::new();
    for (c, h) in family.iter().zip(&scheme.family) {
        if !pairs.iter().any(|(c2, h2)| c2 == c && h2 == h) {
            pairs.push((c.clone(), h.clone()));
        }
    }
    let (fam, maps): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let s = Scheme {
        target: scheme.target,
        indeterminates: scheme.indeterminates,
        family: maps,
    };
    (fam, s.normalize())
}

/// The tight conjunctive minor `(R, S)` of a constraint family via `scheme`.
pub fn tight_minor(family: &[Constraint], scheme: &Scheme, cfg: &Config) -> Result<Constraint> {
    if family.len() != scheme.family.len() {
        return Err(Error::ArityMismatch {
            context: "scheme family length",
            expected: scheme.family.len(),
            found: family.len(),
        });
    }
    let (a, b) = match family.first() {
        Some(c) => (c.source(), c.target()),
        None => return Err(Error::Scheme("empty family".into())),
    };
    let (family, scheme) = normalize_family(family, scheme);
    let ants: Vec<&Relation> = family.iter().map(Constraint::antecedent).collect();
    let cons: Vec<&Relation> = family.iter().map(Constraint::consequent).collect();
    Constraint::new(
        tight_relation(&ants, &scheme, a, cfg)?,
        tight_relation(&cons, &scheme, b, cfg)?,
    )
}

/// Whether `candidate` is a minor of `family` via `scheme` in the given mode.
pub fn minor_check(
    candidate: &Constraint,
    family: &[Constraint],
    scheme: &Scheme,
    mode: MinorMode,
    cfg: &Config,
) -> Result<bool> {
    if candidate.arity() != scheme.target {
        return Err(Error::ArityMismatch {
            context: "minor candidate",
            expected: scheme.target,
            found: candidate.arity(),
        });
    }
    let tight = tight_minor(family, scheme, cfg)?;
    if candidate.source() != tight.source() || candidate.target() != tight.target() {
        return Err(Error::DomainMismatch("minor candidate"));
    }
    let restrictive = || candidate.antecedent().is_subset(tight.antecedent());
    let extensive = || tight.consequent().is_subset(candidate.consequent());
    match mode {
        MinorMode::Tight => Ok(candidate == &tight),
        MinorMode::Restrictive => restrictive(),
        MinorMode::Extensive => extensive(),
        MinorMode::Conjunctive => relaxation_of(candidate, &tight),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialMinor {
    pub constraint: Constraint,
    /// Tight minor of a single constraint.
    pub simple: bool,
    /// No indeterminates.
    pub weak: bool,
}

/// Tight minor of the single constraint `c0`, tagged simple / weak.
pub fn special_minor(c0: &Constraint, scheme: &Scheme, cfg: &Config) -> Result<SpecialMinor> {
    if scheme.family.len() != 1 {
        return Err(Error::Scheme(format!(
            "a simple minor needs one map, scheme has {}",
            scheme.family.len()
        )));
    }
    let constraint = tight_minor(std::slice::from_ref(c0), scheme, cfg)?;
    Ok(SpecialMinor {
        constraint,
        simple: true,
        weak: scheme.indeterminates == 0,
    })
}

/// Flattens `outer` applied to the outputs of `inners` into one scheme over
/// the concatenated inner families. Inner indeterminates are renamed apart
/// after the outer ones.
pub fn compose_schemes(outer: &Scheme, inners: &[Scheme]) -> Result<Scheme> {
    if inners.len() != outer.family.len() {
        return Err(Error::ArityMismatch {
            context: "scheme composition",
            expected: outer.family.len(),
            found: inners.len(),
        });
    }
    let mut family = Vec::new();
    let mut offset = outer.indeterminates;
    for (h, inner) in outer.family.iter().zip(inners) {
        if inner.target != h.len() {
            return Err(Error::ArityMismatch {
                context: "scheme composition source",
                expected: h.len(),
                found: inner.target,
            });
        }
        for g in &inner.family {
            family.push(
                g.iter()
                    .map(|s| match *s {
                        Slot::Coord(k) => h[k],
                        Slot::Indet(u) => Slot::Indet(offset + u),
                    })
                    .collect(),
            );
        }
        offset += inner.indeterminates;
    }
    Scheme::new(outer.target, offset, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{canonical_constraint, CanonicalKind};

    const B: Domain = Domain::BOOL;

    fn leq() -> Relation {
        Relation::from_tuples(B, 2, [[0, 0], [0, 1], [1, 1]]).unwrap()
    }

    fn geq() -> Relation {
        Relation::from_tuples(B, 2, [[0, 0], [1, 0], [1, 1]]).unwrap()
    }

    fn c(r: Relation, s: Relation) -> Constraint {
        Constraint::new(r, s).unwrap()
    }

    fn scheme(text: &str) -> Scheme {
        text.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let s = scheme("target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
        assert_eq!(s.indeterminates(), 1);
        assert_eq!(s.family()[1], vec![Slot::Indet(0), Slot::Coord(1)]);
        assert_eq!(s.to_string(), "target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
        assert_eq!(scheme(&s.to_string()), s);
        assert!("target=2; h1=[c3]".parse::<Scheme>().is_err());
        assert!("target=2; h2=[c1]".parse::<Scheme>().is_err());
        assert!("target=2; h1=[x1]".parse::<Scheme>().is_err());
        assert!("V=1; h1=[c1]".parse::<Scheme>().is_err());
        assert!("target=1".parse::<Scheme>().is_err());
    }

    #[test]
    fn swap_gives_converse() {
        let cfg = Config::default();
        let got = tight_minor(&[c(leq(), leq())], &scheme("target=2; h1=[c2,c1]"), &cfg).unwrap();
        assert_eq!(got, c(geq(), geq()));
    }

    #[test]
    fn relational_composition_via_shared_indeterminate() {
        let cfg = Config::default();
        let fam = [c(leq(), leq()), c(leq(), leq())];
        let got = tight_minor(&fam, &scheme("target=2; V=1; h1=[c1,v1]; h2=[v1,c2]"), &cfg).unwrap();
        assert_eq!(got, c(leq(), leq()));
    }

    #[test]
    fn diagonal_test_is_trivial() {
        let cfg = Config::default();
        let eq = canonical_constraint(CanonicalKind::Equality, B, B, 2).unwrap();
        let got = tight_minor(&[eq], &scheme("target=2; h1=[c1,c1]"), &cfg).unwrap();
        assert_eq!(got, canonical_constraint(CanonicalKind::Trivial, B, B, 2).unwrap());
    }

    #[test]
    fn skolem_budget_and_arity_errors() {
        let cfg = Config {
            max_indets: 1,
            ..Config::default()
        };
        let fam = [c(leq(), leq())];
        let s = scheme("target=1; V=2; h1=[v1,v2]");
        assert!(tight_minor(&fam, &s, &cfg).unwrap_err().is_budget());
        assert!(tight_minor(&fam, &scheme("target=1; h1=[c1]"), &cfg).is_err());
        assert!(tight_minor(&fam, &scheme("target=2; h1=[c1,c2]; h2=[c2,c1]"), &cfg).is_err());
    }

    #[test]
    fn skolem_witness_found() {
        let cfg = Config::default();
        let l = leq();
        let s = scheme("target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
        let w = skolem_witness(&[&l, &l], &s, &[0, 1], &cfg).unwrap().unwrap();
        assert_eq!(w.values.len(), 1);
        assert!(skolem_witness(&[&l, &l], &s, &[1, 0], &cfg).unwrap().is_none());
    }

    #[test]
    fn normalization_is_semantics_preserving() {
        let cfg = Config::default();
        let fam = [c(leq(), leq()), c(leq(), leq())];
        let s = scheme("target=2; V=3; h1=[c1,v3]; h2=[c1,v3]");
        let (f2, s2) = normalize_family(&fam, &s);
        assert_eq!(f2.len(), 1);
        assert_eq!(s2.indeterminates(), 1);
        let ants: Vec<&Relation> = fam.iter().map(Constraint::antecedent).collect();
        let big = Config {
            max_indets: 3,
            ..Config::default()
        };
        assert_eq!(
            tight_relation(&ants, &s, B, &big).unwrap(),
            tight_minor(&fam, &s, &cfg).unwrap().antecedent().clone()
        );
    }

    #[test]
    fn minor_check_modes() {
        let cfg = Config::default();
        let fam = [c(leq(), leq())];
        let id = Scheme::identity(2).unwrap();
        let tight = tight_minor(&fam, &id, &cfg).unwrap();
        for mode in [
            MinorMode::Tight,
            MinorMode::Restrictive,
            MinorMode::Extensive,
            MinorMode::Conjunctive,
        ] {
            assert!(minor_check(&tight, &fam, &id, mode, &cfg).unwrap());
        }
        let extreme = c(Relation::empty(B, 2).unwrap(), Relation::full(B, 2).unwrap());
        assert!(minor_check(&extreme, &fam, &id, MinorMode::Conjunctive, &cfg).unwrap());
        assert!(!minor_check(&extreme, &fam, &id, MinorMode::Tight, &cfg).unwrap());
        let bad = c(Relation::full(B, 2).unwrap(), Relation::empty(B, 2).unwrap());
        assert!(!minor_check(&bad, &fam, &id, MinorMode::Conjunctive, &cfg).unwrap());
        assert!(!minor_check(&bad, &fam, &id, MinorMode::Restrictive, &cfg).unwrap());
        assert!(!minor_check(&bad, &fam, &id, MinorMode::Extensive, &cfg).unwrap());
    }

    #[test]
    fn special_minor_flags() {
        let cfg = Config::default();
        let c0 = c(leq(), leq());
        let sm = special_minor(&c0, &scheme("target=2; h1=[c2,c1]"), &cfg).unwrap();
        assert_eq!(sm.constraint, c(geq(), geq()));
        assert!(sm.simple && sm.weak);
        let id = special_minor(&c0, &Scheme::identity(2).unwrap(), &cfg).unwrap();
        assert_eq!(id.constraint, c0);
        let proj = special_minor(&c0, &scheme("target=1; V=1; h1=[c1,v1]"), &cfg).unwrap();
        assert!(!proj.weak);
        assert!(special_minor(&c0, &Scheme::intersection(2, 2).unwrap(), &cfg).is_err());
    }

    #[test]
    fn compose_examples() {
        let cfg = Config::default();
        let l = c(leq(), leq());
        let swap = scheme("target=2; h1=[c2,c1]");

        // identity outer returns the inner
        let inner = scheme("target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
        let flat = compose_schemes(&Scheme::identity(2).unwrap(), std::slice::from_ref(&inner)).unwrap();
        assert_eq!(flat, inner);

        // swap after swap
        let flat = compose_schemes(&swap, std::slice::from_ref(&swap)).unwrap();
        assert_eq!(tight_minor(std::slice::from_ref(&l), &flat, &cfg).unwrap(), l);

        // composition of two converses
        let outer = scheme("target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
        let flat = compose_schemes(&outer, &[swap.clone(), swap.clone()]).unwrap();
        let hier = {
            let g = tight_minor(std::slice::from_ref(&l), &swap, &cfg).unwrap();
            tight_minor(&[g.clone(), g], &outer, &cfg).unwrap()
        };
        assert_eq!(tight_minor(&[l.clone(), l], &flat, &cfg).unwrap(), hier);
        assert_eq!(hier, c(geq(), geq()));

        assert!(compose_schemes(&outer, &[swap]).is_err());
    }

    #[test]
    fn intersection_scheme() {
        let cfg = Config::default();
        let got = tight_minor(
            &[c(leq(), leq()), c(geq(), geq())],
            &Scheme::intersection(2, 2).unwrap(),
            &cfg,
        )
        .unwrap();
        assert_eq!(got, canonical_constraint(CanonicalKind::Equality, B, B, 2).unwrap());
    }
}
