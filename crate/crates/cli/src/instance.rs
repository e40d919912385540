//! Instance documents: a JSON surface grammar for domains, functions,
//! relations, constraints, classes, constraint sets and schemes.
//!
//! ```json
//! {
//!   "domains": { "A": 2 },
//!   "functions": { "and": [0, 0, 0, 1], "pr1": { "arity": 2, "table": [0, 0, 1, 1] } },
//!   "relations": { "leq": [[0, 0], [0, 1], [1, 1]] },
//!   "constraints": { "order": ["leq", "leq"] },
//!   "classes": { "K2": ["and"] },
//!   "sets": { "T2": ["order"] },
//!   "schemes": { "swap": "target=2; V=0; h1=[c2,c1]" }
//! }
//! ```
//!
//! `source` and `target` name the domains of arguments and values. They may
//! be omitted when a single domain is declared; with no domains at all both
//! default to `{0,1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use galois_core::{
    Constraint, ConstraintSet, Domain, DomainSpec, Elem, FunctionClass, FunctionTable, Relation, Scheme,
};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    Semantic {
        binding: String,
        message: String,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ParseError::Semantic { binding, message } => write!(f, "{binding}: {message}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn semantic(binding: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        binding: binding.into(),
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    domains: BTreeMap<String, usize>,
    source: Option<String>,
    target: Option<String>,
    #[serde(default)]
    functions: BTreeMap<String, RawFunction>,
    #[serde(default)]
    relations: BTreeMap<String, RawRelation>,
    #[serde(default)]
    constraints: BTreeMap<String, (String, String)>,
    #[serde(default)]
    classes: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    schemes: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawFunction {
    Table(Vec<Elem>),
    Full { arity: usize, table: Vec<Elem> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRelation {
    Tuples(Vec<Vec<Elem>>),
    Full { arity: usize, tuples: Vec<Vec<Elem>> },
}

/// A relation as written, before it is placed over a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleList {
    pub arity: usize,
    /// Sorted and deduplicated.
    pub tuples: Vec<Vec<Elem>>,
}

impl TupleList {
    fn over(&self, domain: Domain, binding: &str) -> Result<Relation, ParseError> {
        if let Some(e) = self.tuples.iter().flatten().find(|&&e| e as usize >= domain.size()) {
            return Err(semantic(
                format!("relation \"{binding}\""),
                format!("element {e} outside a domain of size {}", domain.size()),
            ));
        }
        Relation::from_tuples(domain, self.arity, &self.tuples)
            .map_err(|e| semantic(format!("relation \"{binding}\""), e.to_string()))
    }
}

/// A validated instance document in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub domains: BTreeMap<String, usize>,
    pub source: DomainSpec,
    pub target: DomainSpec,
    pub functions: BTreeMap<String, FunctionTable>,
    pub relations: BTreeMap<String, TupleList>,
    pub constraints: BTreeMap<String, (String, String)>,
    pub classes: BTreeMap<String, Vec<String>>,
    pub sets: BTreeMap<String, Vec<String>>,
    pub schemes: BTreeMap<String, Scheme>,
    resolved_constraints: BTreeMap<String, Constraint>,
}

fn pick_domain(role: &str, named: Option<String>, domains: &BTreeMap<String, usize>) -> Result<DomainSpec, ParseError> {
    let name = match named {
        Some(n) => n,
        None => match domains.len() {
            0 => return Ok(DomainSpec::new("bool", 2).expect("size 2")),
            1 => domains.keys().next().cloned().expect("one domain"),
            _ => return Err(semantic(role, "several domains declared, name one explicitly")),
        },
    };
    let size = *domains
        .get(&name)
        .ok_or_else(|| semantic(role, format!("unknown domain \"{name}\"")))?;
    DomainSpec::new(name, size).map_err(|e| semantic(role, e.to_string()))
}

fn arity_from_length(len: usize, a: usize) -> Option<usize> {
    let mut n = 0;
    let mut points = 1usize;
    while points < len {
        points = points.checked_mul(a)?;
        n += 1;
    }
    (points == len && n >= 1).then_some(n)
}

pub fn parse_instance(text: &str) -> Result<Document, ParseError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    for (name, &size) in &raw.domains {
        Domain::new(size).map_err(|e| semantic(format!("domain \"{name}\""), e.to_string()))?;
    }
    let source = pick_domain("source", raw.source, &raw.domains)?;
    let target = pick_domain("target", raw.target, &raw.domains)?;
    let (a, b) = (source.domain, target.domain);

    let mut functions = BTreeMap::new();
    for (name, f) in raw.functions {
        let binding = format!("function \"{name}\"");
        let (arity, table) = match f {
            RawFunction::Table(t) => {
                let n = arity_from_length(t.len(), a.size()).ok_or_else(|| {
                    semantic(
                        &binding,
                        format!("{} entries is not a power of the domain size {}", t.len(), a.size()),
                    )
                })?;
                (n, t)
            }
            RawFunction::Full { arity, table } => (arity, table),
        };
        if arity == 0 {
            return Err(semantic(&binding, "arity must be at least 1"));
        }
        let expected = a
            .power(arity)
            .ok_or_else(|| semantic(&binding, format!("arity {arity} is too large")))?;
        if table.len() != expected {
            return Err(semantic(
                &binding,
                format!("expected {expected} entries, found {}", table.len()),
            ));
        }
        if let Some(v) = table.iter().find(|&&v| v as usize >= b.size()) {
            return Err(semantic(
                &binding,
                format!("value {v} outside a codomain of size {}", b.size()),
            ));
        }
        let f = FunctionTable::new(a, b, arity, table).map_err(|e| semantic(&binding, e.to_string()))?;
        functions.insert(name, f);
    }

    let mut relations = BTreeMap::new();
    for (name, r) in raw.relations {
        let binding = format!("relation \"{name}\"");
        let (arity, tuples) = match r {
            RawRelation::Tuples(ts) => {
                let arity = ts
                    .first()
                    .map(Vec::len)
                    .ok_or_else(|| semantic(&binding, "an empty relation needs the {\"arity\", \"tuples\"} form"))?;
                (arity, ts)
            }
            RawRelation::Full { arity, tuples } => (arity, tuples),
        };
        if arity == 0 {
            return Err(semantic(&binding, "arity must be at least 1"));
        }
        if let Some(t) = tuples.iter().find(|t| t.len() != arity) {
            return Err(semantic(
                &binding,
                format!("tuple {t:?} has length {}, expected {arity}", t.len()),
            ));
        }
        let largest = a.size().max(b.size());
        if let Some(e) = tuples.iter().flatten().find(|&&e| e as usize >= largest) {
            return Err(semantic(&binding, format!("element {e} outside every declared domain")));
        }
        let tuples: BTreeSet<Vec<Elem>> = tuples.into_iter().collect();
        relations.insert(
            name,
            TupleList {
                arity,
                tuples: tuples.into_iter().collect(),
            },
        );
    }

    let mut resolved_constraints = BTreeMap::new();
    for (name, (ant, con)) in &raw.constraints {
        let binding = format!("constraint \"{name}\"");
        let lookup = |r: &str| {
            relations
                .get(r)
                .ok_or_else(|| semantic(&binding, format!("unknown relation \"{r}\"")))
        };
        let (r, s) = (lookup(ant)?, lookup(con)?);
        if r.arity != s.arity {
            return Err(semantic(
                &binding,
                format!("antecedent arity {} differs from consequent arity {}", r.arity, s.arity),
            ));
        }
        let c = Constraint::new(r.over(a, ant)?, s.over(b, con)?).map_err(|e| semantic(&binding, e.to_string()))?;
        resolved_constraints.insert(name.clone(), c);
    }

    let mut classes = BTreeMap::new();
    for (name, members) in raw.classes {
        let binding = format!("class \"{name}\"");
        if let Some(m) = members.iter().find(|m| !functions.contains_key(*m)) {
            return Err(semantic(&binding, format!("unknown function \"{m}\"")));
        }
        let mut members: Vec<String> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        members.sort_by(|x, y| (&functions[x], x).cmp(&(&functions[y], y)));
        classes.insert(name, members);
    }

    let mut sets = BTreeMap::new();
    for (name, members) in raw.sets {
        let binding = format!("set \"{name}\"");
        if let Some(m) = members.iter().find(|m| !resolved_constraints.contains_key(*m)) {
            return Err(semantic(&binding, format!("unknown constraint \"{m}\"")));
        }
        let mut members: Vec<String> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        members.sort_by(|x, y| (&resolved_constraints[x], x).cmp(&(&resolved_constraints[y], y)));
        sets.insert(name, members);
    }

    let mut schemes = BTreeMap::new();
    for (name, literal) in raw.schemes {
        let s: Scheme = literal
            .parse()
            .map_err(|e: galois_core::Error| semantic(format!("scheme \"{name}\""), e.to_string()))?;
        schemes.insert(name, s);
    }

    let mut domains = raw.domains;
    domains.entry(source.name.clone()).or_insert(source.size());
    domains.entry(target.name.clone()).or_insert(target.size());
    Ok(Document {
        domains,
        source,
        target,
        functions,
        relations,
        constraints: raw.constraints,
        classes,
        sets,
        schemes,
        resolved_constraints,
    })
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

impl Document {
    pub fn a(&self) -> Domain {
        self.source.domain
    }

    pub fn b(&self) -> Domain {
        self.target.domain
    }

    pub fn function(&self, name: &str) -> Option<&FunctionTable> {
        self.functions.get(name)
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.resolved_constraints.get(name)
    }

    pub fn class(&self, name: &str) -> Option<FunctionClass> {
        let members = self.classes.get(name)?;
        Some(
            FunctionClass::from_tables(self.a(), self.b(), members.iter().map(|m| self.functions[m].clone()))
                .expect("validated members"),
        )
    }

    pub fn set(&self, name: &str) -> Option<ConstraintSet> {
        let members = self.sets.get(name)?;
        Some(
            ConstraintSet::from_constraints(
                self.a(),
                self.b(),
                members.iter().map(|m| self.resolved_constraints[m].clone()),
            )
            .expect("validated members"),
        )
    }

    pub fn scheme(&self, name: &str) -> Option<&Scheme> {
        self.schemes.get(name)
    }

    pub fn to_value(&self) -> Value {
        let functions: serde_json::Map<String, Value> = self
            .functions
            .iter()
            .map(|(k, f)| (k.clone(), json!({ "arity": f.arity(), "table": f.table() })))
            .collect();
        let relations: serde_json::Map<String, Value> = self
            .relations
            .iter()
            .map(|(k, r)| (k.clone(), json!({ "arity": r.arity, "tuples": r.tuples })))
            .collect();
        let schemes: serde_json::Map<String, Value> = self
            .schemes
            .iter()
            .map(|(k, s)| (k.clone(), Value::String(s.to_string())))
            .collect();
        json!({
            "domains": self.domains,
            "source": self.source.name,
            "target": self.target.name,
            "functions": functions,
            "relations": relations,
            "constraints": self.constraints,
            "classes": self.classes,
            "sets": self.sets,
            "schemes": schemes,
        })
    }

    /// Canonical text: keys sorted, scalar arrays on one line, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        write_value(&self.to_value(), 0, &mut out);
        out.push('\n');
        out
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs
            .iter()
            .all(|x| !x.is_object() && (!x.is_array() || is_flat_scalars(x))),
        _ => false,
    }
}

fn is_flat_scalars(v: &Value) -> bool {
    matches!(v, Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()))
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(xs) if !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                if i + 1 < xs.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "domains": {"A": 2},
        "functions": {"and": [0,0,0,1], "pr1": {"arity": 2, "table": [0,0,1,1]}},
        "relations": {"leq": [[0,0],[0,1],[1,1]], "none": {"arity": 2, "tuples": []}},
        "constraints": {"order": ["leq","leq"], "kill": ["leq","none"]},
        "classes": {"K2": ["pr1", "and", "and"]},
        "sets": {"T2": ["order"]},
        "schemes": {"swap": "target=2; h1=[c2, c1]"}
    }"#;

    #[test]
    fn parses_example() {
        let d = parse_instance(EXAMPLE).unwrap();
        assert_eq!(d.function("and").unwrap().table(), &[0, 0, 0, 1]);
        assert_eq!(d.function("and").unwrap().arity(), 2);
        let leq = d.constraint("order").unwrap();
        assert_eq!(leq.antecedent().len(), 3);
        assert!(leq.antecedent().contains(&[0, 1]));
        assert!(!leq.antecedent().contains(&[1, 0]));
        assert_eq!(d.class("K2").unwrap().len(), 2);
        assert_eq!(d.classes["K2"], vec!["and".to_string(), "pr1".to_string()]);
        assert_eq!(d.set("T2").unwrap().len(), 1);
        assert_eq!(d.scheme("swap").unwrap().to_string(), "target=2; V=0; h1=[c2,c1]");
    }

    #[test]
    fn canonical_round_trip() {
        let d = parse_instance(EXAMPLE).unwrap();
        let text = d.to_canonical_string();
        let again = parse_instance(&text).unwrap();
        assert_eq!(again, d);
        assert_eq!(again.to_canonical_string(), text);
    }

    #[test]
    fn wrong_table_length() {
        let e = parse_instance(r#"{"functions": {"f": {"arity": 2, "table": [0,1,0]}}}"#).unwrap_err();
        assert!(e.to_string().contains("expected 4 entries"), "{e}");
        assert!(e.to_string().contains("\"f\""), "{e}");
        let e = parse_instance(r#"{"functions": {"f": [0,1,0]}}"#).unwrap_err();
        assert!(matches!(e, ParseError::Semantic { .. }));
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_instance("{\n  \"functions\": {\"f\": [0,1,}\n}").unwrap_err();
        match e {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dangling_and_range_errors() {
        let e = parse_instance(r#"{"classes": {"K": ["missing"]}}"#).unwrap_err();
        assert!(e.to_string().contains("unknown function \"missing\""), "{e}");
        let e = parse_instance(r#"{"relations": {"r": [[0,2]]}}"#).unwrap_err();
        assert!(e.to_string().contains("element 2"), "{e}");
        let e = parse_instance(r#"{"relations": {"r": [[0],[1]], "s": [[0,1]]}, "constraints": {"c": ["r","s"]}}"#)
            .unwrap_err();
        assert!(e.to_string().contains("arity"), "{e}");
        let e = parse_instance(r#"{"functions": {"f": [0,2]}}"#).unwrap_err();
        assert!(e.to_string().contains("value 2"), "{e}");
        let e = parse_instance(r#"{"domains": {"A": 2, "B": 3}}"#).unwrap_err();
        assert!(e.to_string().starts_with("source"), "{e}");
    }

    #[test]
    fn two_domains() {
        let d = parse_instance(
            r#"{"domains": {"A": 3, "B": 2}, "source": "A", "target": "B",
                "functions": {"f": [0,1,1]}, "relations": {"r": [[2]], "s": [[1]]},
                "constraints": {"c": ["r","s"]}}"#,
        )
        .unwrap();
        assert_eq!(d.a().size(), 3);
        assert_eq!(d.function("f").unwrap().arity(), 1);
        let bad = r#"{"domains": {"A": 3, "B": 2}, "source": "A", "target": "B",
                "relations": {"r": [[2]]}, "constraints": {"c": ["r","r"]}}"#;
        assert!(parse_instance(bad).is_err());
    }
}
