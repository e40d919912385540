//! Line-oriented text records. Every listing is in canonical rank order and
//! no record carries timing, so equal inputs give equal bytes.

use std::fmt::Write;

use galois_core::galois_lab::{ClosureReport, Side, Witness};
use galois_core::{Constraint, ConstraintSet, FunctionClass, FunctionTable};

pub fn function_line(f: &FunctionTable) -> String {
    let table: Vec<String> = f.table().iter().map(|v| v.to_string()).collect();
    format!("function {} [{}]", f.arity(), table.join(","))
}

pub fn constraint_line(c: &Constraint) -> String {
    format!("constraint {} {} -> {}", c.arity(), c.antecedent(), c.consequent())
}

pub struct Record {
    out: String,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record {
            out: format!("record {kind}\n"),
        }
    }

    pub fn field(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        writeln!(self.out, "{key}: {value}").expect("string write");
        self
    }

    pub fn line(mut self, line: &str) -> Self {
        self.out.push_str(line);
        self.out.push('\n');
        self
    }

    pub fn functions(mut self, k: &FunctionClass) -> Self {
        writeln!(self.out, "count: {}", k.len()).expect("string write");
        for f in k.iter() {
            self.out.push_str(&function_line(f));
            self.out.push('\n');
        }
        self
    }

    pub fn constraints(mut self, t: &ConstraintSet) -> Self {
        writeln!(self.out, "count: {}", t.len()).expect("string write");
        for c in t.iter() {
            self.out.push_str(&constraint_line(c));
            self.out.push('\n');
        }
        self
    }

    pub fn finish(mut self) -> String {
        self.out.push_str("end\n");
        self.out
    }
}

pub fn report(r: &ClosureReport) -> String {
    let mut rec = Record::new("report").field("identity", &r.identity_name);
    for (k, v) in &r.parameters {
        rec = rec.field(&format!("param {k}"), v);
    }
    rec = rec
        .field("lhs_size", r.lhs_size)
        .field("rhs_size", r.rhs_size)
        .field("verdict", r.verdict)
        .field("holds", r.holds);
    for n in &r.notes {
        rec = rec.field("note", n);
    }
    for d in &r.symmetric_difference {
        let side = match d.side {
            Side::LhsOnly => "lhs_only",
            Side::RhsOnly => "rhs_only",
        };
        let w = match &d.witness {
            Witness::Function(f) => function_line(f),
            Witness::Constraint(c) => constraint_line(c),
        };
        rec = rec.field(side, w);
    }
    rec.finish()
}
