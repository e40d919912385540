use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use galois_core::constraint_closures::{cm_closure, cm_m_closure, lo_n_closure, CmBounds};
use galois_core::function_closures::{lo_m_closure, vs_closure, vs_n_closure};
use galois_core::galois_lab::{
    check_closure_laws, check_cm_oracle, verify_definability, verify_factorization, ClosureOperator, ClosureReport,
    CmM, Definability, Factorization, Instance, LoM, LoN, Vs, VsN,
};
use galois_core::sampling;
use galois_core::satisfaction::{constraint_universe_size, csf, csf_m, fsc, fsc_n};
use galois_core::{
    enumerate_functions, Config, Constraint, ConstraintSet, Domain, Error, Execution, FunctionClass, ObjectSet,
};
use rand::Rng;

use crate::cache::{Cache, Lookup};
use crate::instance::{parse_instance, Document};
use crate::render::{self, Record};
use crate::{EXIT_BUDGET, EXIT_DISCREPANCY, EXIT_OK, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(
    name = "galois",
    version,
    about = "Finite-domain workbench for the Galois connection between functions and relational constraints"
)]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Result cache directory; overrides GALOIS_CACHE_DIR.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest number of n-ary functions materialized at once.
    #[arg(long, global = true, value_name = "N")]
    max_functions: Option<u64>,
    /// Largest constraint universe materialized at once.
    #[arg(long, global = true, value_name = "N")]
    max_constraints: Option<u64>,
    /// Largest number of column tuples scanned by trace filtering.
    #[arg(long, global = true, value_name = "N")]
    max_columns: Option<u64>,
    /// Witnesses listed per report.
    #[arg(long, global = true, value_name = "N")]
    max_witnesses: Option<usize>,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Report cache use and runtime on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply a closure operator to a function class or constraint set.
    Close(CloseArgs),
    /// Apply FSC to a constraint set or CSF to a function class.
    Galois(GaloisArgs),
    /// Check a factorization identity or a definability equivalence.
    Verify(VerifyArgs),
    /// List every function or every constraint of one arity.
    Enumerate(EnumerateArgs),
    /// Audit extensivity, monotonicity and idempotence on seeded samples.
    Laws(LawsArgs),
    /// Print an instance document in canonical form.
    Canon(CanonArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Instance document (JSON).
    #[arg(long = "in", value_name = "FILE")]
    file: PathBuf,
    /// Name of a function class in the document.
    #[arg(long)]
    class: Option<String>,
    /// Name of a constraint set in the document.
    #[arg(long)]
    set: Option<String>,
}

#[derive(Args, Debug)]
struct CmArgs {
    /// Indeterminates allowed in minor schemes.
    #[arg(long, value_name = "V")]
    max_indets: Option<usize>,
    /// Largest family combined by one minor scheme.
    #[arg(long, value_name = "K")]
    max_family: Option<usize>,
    /// Round limit of the minor fixpoint.
    #[arg(long, value_name = "R")]
    max_iterations: Option<usize>,
}

impl CmArgs {
    fn bounds(&self) -> CmBounds {
        let d = CmBounds::default();
        CmBounds {
            max_family: self.max_family.unwrap_or(d.max_family),
            max_indets: self.max_indets.unwrap_or(d.max_indets),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CloseOp {
    /// Variable substitution materialized up to --cap.
    Vs,
    /// Variable substitution within one arity.
    Vsn,
    /// Local closure on --m points.
    Lom,
    /// Constraint local closure with --n functions.
    Lon,
    /// Conjunctive minors within one arity.
    Cmm,
    /// Conjunctive minors up to arity --cap.
    Cm,
}

#[derive(Args, Debug)]
pub struct CloseArgs {
    #[arg(value_enum)]
    operator: CloseOp,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    cm: CmArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GaloisSide {
    /// Functions satisfying every constraint of --set.
    Fsc,
    /// Constraints satisfied by every function of --class.
    Csf,
}

#[derive(Args, Debug)]
pub struct GaloisArgs {
    #[arg(value_enum)]
    side: GaloisSide,
    #[command(flatten)]
    input: InputArgs,
    /// A single output arity.
    #[arg(long, conflicts_with = "cap")]
    arity: Option<usize>,
    /// All output arities up to this bound.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Identity {
    /// FSC(CSF(K)) = Lo(VS(K)) up to --cap.
    #[value(name = "functions-factorization", alias = "t4")]
    FunctionsFactorization,
    /// CSF(FSC_n(T)) = LO_n(CM(T)) up to --cap.
    #[value(name = "nary-constraints-factorization", alias = "t8")]
    NaryConstraintsFactorization,
    /// CSF_m(FSC(T_m)) = LO(CM_m(T_m)).
    #[value(name = "mary-constraints-factorization", alias = "t12")]
    MaryConstraintsFactorization,
    /// FSC_n(CSF_m(K_n)) = Lo_m(VS_n(K_n)).
    #[value(name = "fixed-arity-functions", alias = "t15i")]
    FixedArityFunctions,
    /// CSF_m(FSC_n(T_m)) = LO_n(CM_m(T_m)).
    #[value(name = "fixed-arity-constraints", alias = "t15ii")]
    FixedArityConstraints,
    /// K_n is definable by constraints iff VS_n-closed.
    #[value(name = "nary-definable", alias = "thm5")]
    NaryDefinable,
    /// T is characterized by n-ary functions iff LO_n- and CM-closed.
    #[value(name = "nary-characterized", alias = "thm6")]
    NaryCharacterized,
    /// K_n is definable by m-ary constraints iff Lo_m- and VS_n-closed.
    #[value(name = "mary-definable", alias = "thm13")]
    MaryDefinable,
    /// T_m is characterized by n-ary functions iff LO_n- and CM_m-closed.
    #[value(name = "mary-characterized", alias = "thm14")]
    MaryCharacterized,
    /// Every unary class is definable by constraints.
    #[value(name = "unary-definable", alias = "cor1")]
    UnaryDefinable,
    /// T is characterized by unary functions iff union- and CM-closed.
    #[value(name = "unary-characterized", alias = "cor2")]
    UnaryCharacterized,
    /// Bounded CM_m(T_m) = CSF_m(FSC_{|A|^m}(T_m)), without escalating the bounds.
    #[value(name = "cm-oracle")]
    CmOracle,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    identity: Identity,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    cm: CmArgs,
}

#[derive(Args, Debug)]
struct DomainArgs {
    /// Size of the argument domain A.
    #[arg(long, default_value_t = 2)]
    source_size: usize,
    /// Size of the value domain B.
    #[arg(long, default_value_t = 2)]
    target_size: usize,
}

impl DomainArgs {
    fn domains(&self) -> Result<(Domain, Domain), Failure> {
        Ok((Domain::new(self.source_size)?, Domain::new(self.target_size)?))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Universe {
    Functions,
    Constraints,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    kind: Universe,
    #[arg(long)]
    arity: usize,
    #[command(flatten)]
    domains: DomainArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LawOp {
    Vsn,
    Vs,
    Lom,
    Lon,
    Cmm,
}

#[derive(Args, Debug)]
pub struct LawsArgs {
    /// Operator to audit; all of them when omitted.
    #[arg(long, value_enum)]
    operator: Option<LawOp>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Arity of sampled objects (default 2 for classes, 1 for constraint sets).
    #[arg(long)]
    arity: Option<usize>,
    /// Point count of the local closure on functions.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Function count of the local closure on constraints.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Arity bound of the substitution closure.
    #[arg(long, default_value_t = 2)]
    cap: usize,
    #[command(flatten)]
    domains: DomainArgs,
    #[command(flatten)]
    cm: CmArgs,
}

#[derive(Args, Debug)]
pub struct CanonArgs {
    #[arg(long = "in", value_name = "FILE")]
    file: PathBuf,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_budget() { EXIT_BUDGET } else { EXIT_USAGE },
            message: e.to_string(),
        }
    }
}

struct Outcome {
    code: i32,
    text: String,
}

type Task = Box<dyn FnOnce(&Config) -> Result<Outcome, Failure>>;

/// A resolved command: what identifies it in the cache, and how to run it.
struct Prepared {
    operation: String,
    input: String,
    cacheable: bool,
    task: Task,
}

fn config(g: &GlobalArgs, bounds: Option<&CmBounds>) -> Config {
    let d = Config::default();
    Config {
        max_functions: g.max_functions.unwrap_or(d.max_functions),
        max_constraints: g.max_constraints.unwrap_or(d.max_constraints),
        max_indets: bounds.map_or(d.max_indets, |b| b.max_indets.max(d.max_indets)),
        max_columns: g.max_columns.unwrap_or(d.max_columns),
        max_witnesses: g.max_witnesses.unwrap_or(d.max_witnesses),
        execution: if g.sequential {
            Execution::Sequential
        } else {
            d.execution
        },
    }
}

fn bounds_key(cfg: &Config, bounds: Option<&CmBounds>) -> String {
    let mut s = format!(
        "functions={} constraints={} indets={} columns={} witnesses={}",
        cfg.max_functions, cfg.max_constraints, cfg.max_indets, cfg.max_columns, cfg.max_witnesses
    );
    if let Some(b) = bounds {
        s.push_str(&format!(
            " family={} scheme_indets={} iterations={}",
            b.max_family, b.max_indets, b.max_iterations
        ));
    }
    s
}

pub(crate) fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let bounds = match &cli.command {
        Command::Close(a) => Some(a.cm.bounds()),
        Command::Verify(a) => Some(a.cm.bounds()),
        Command::Laws(a) => Some(a.cm.bounds()),
        _ => None,
    };
    let cfg = config(&cli.global, bounds.as_ref());
    let g = &cli.global;
    let verbose = g.verbose;
    let cache = if g.no_cache {
        None
    } else {
        Cache::from_settings(g.cache_dir.as_deref())
    };
    let bounds_text = bounds_key(&cfg, bounds.as_ref());

    let result = prepare(cli.command, bounds.unwrap_or_default()).and_then(|p| {
        let key = cache
            .as_ref()
            .filter(|_| p.cacheable)
            .map(|c| c.key(&p.operation, &p.input, &bounds_text));
        if let (Some(c), Some(k)) = (&cache, &key) {
            match c.load(k) {
                Lookup::Hit(entry) => {
                    if verbose {
                        let _ = writeln!(stderr, "cache: hit {k}");
                    }
                    return Ok(Outcome {
                        code: entry.exit_code,
                        text: entry.output,
                    });
                }
                Lookup::Corrupt(msg) => {
                    let _ = writeln!(stderr, "warning: {msg}; recomputing");
                }
                Lookup::Miss => {}
            }
        }
        let out = (p.task)(&cfg)?;
        if let (Some(c), Some(k)) = (&cache, &key) {
            match c.store(k, out.code, &out.text) {
                Ok(()) if verbose => {
                    let _ = writeln!(stderr, "cache: stored {k}");
                }
                Ok(()) => {}
                Err(e) => {
                    let _ = writeln!(stderr, "warning: cache write failed in {}: {e}", c.dir().display());
                }
            }
        }
        Ok(out)
    });
    let code = match result {
        Ok(out) => {
            let _ = stdout.write_all(out.text.as_bytes());
            out.code
        }
        Err(f) => {
            let kind = if f.code == EXIT_BUDGET { "refused" } else { "error" };
            let _ = writeln!(stderr, "{kind}: {}", f.message);
            f.code
        }
    };
    if verbose {
        let _ = writeln!(stderr, "runtime: {} ms", start.elapsed().as_millis());
    }
    code
}

fn load(file: &PathBuf) -> Result<Document, Failure> {
    let text =
        std::fs::read_to_string(file).map_err(|e| Failure::usage(format!("cannot read {}: {e}", file.display())))?;
    parse_instance(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))
}

fn class_input(input: &InputArgs) -> Result<(FunctionClass, String), Failure> {
    let doc = load(&input.file)?;
    let name = input
        .class
        .as_deref()
        .ok_or_else(|| Failure::usage("this command needs --class"))?;
    let k = doc
        .class(name)
        .ok_or_else(|| Failure::usage(format!("no class named \"{name}\" in {}", input.file.display())))?;
    let text = Record::new("input class")
        .field("A", k.dom().size())
        .field("B", k.cod().size())
        .functions(&k)
        .finish();
    Ok((k, text))
}

fn set_input(input: &InputArgs) -> Result<(ConstraintSet, String), Failure> {
    let doc = load(&input.file)?;
    let name = input
        .set
        .as_deref()
        .ok_or_else(|| Failure::usage("this command needs --set"))?;
    let t = doc
        .set(name)
        .ok_or_else(|| Failure::usage(format!("no set named \"{name}\" in {}", input.file.display())))?;
    let text = Record::new("input set")
        .field("A", t.source().size())
        .field("B", t.target().size())
        .constraints(&t)
        .finish();
    Ok((t, text))
}

fn required(value: Option<usize>, flag: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::usage(format!("this command needs --{flag}")))
}

fn class_arity(k: &FunctionClass, given: Option<usize>) -> Result<usize, Failure> {
    match given {
        Some(n) => Ok(n),
        None => k.single_arity()?.ok_or_else(|| Failure::usage("empty class: pass --n")),
    }
}

fn set_arity(t: &ConstraintSet, given: Option<usize>) -> Result<usize, Failure> {
    match given {
        Some(m) => Ok(m),
        None => t.single_arity()?.ok_or_else(|| Failure::usage("empty set: pass --m")),
    }
}

fn top_arity(arities: impl Iterator<Item = usize>, given: Option<usize>) -> Result<usize, Failure> {
    given
        .or_else(|| arities.max())
        .ok_or_else(|| Failure::usage("empty input: pass --cap"))
}

fn listing(text: String) -> Outcome {
    Outcome { code: EXIT_OK, text }
}

fn prepare(command: Command, bounds: CmBounds) -> Result<Prepared, Failure> {
    match command {
        Command::Close(a) => prepare_close(a, bounds),
        Command::Galois(a) => prepare_galois(a),
        Command::Verify(a) => prepare_verify(a, bounds),
        Command::Enumerate(a) => prepare_enumerate(a),
        Command::Laws(a) => prepare_laws(a, bounds),
        Command::Canon(a) => {
            let doc = load(&a.file)?;
            Ok(Prepared {
                operation: "canon".into(),
                input: String::new(),
                cacheable: false,
                task: Box::new(move |_| Ok(listing(doc.to_canonical_string()))),
            })
        }
    }
}

fn prepare_close(a: CloseArgs, bounds: CmBounds) -> Result<Prepared, Failure> {
    let (operation, input, task): (String, String, Task) = match a.operator {
        CloseOp::Vsn => {
            let (k, input) = class_input(&a.input)?;
            let task: Task = Box::new(move |_| {
                let out = vs_n_closure(&k)?;
                Ok(listing(
                    Record::new("close").field("operator", "VS_n").functions(&out).finish(),
                ))
            });
            ("close vsn".into(), input, task)
        }
        CloseOp::Vs => {
            let (k, input) = class_input(&a.input)?;
            let cap = top_arity(k.arities(), a.cap)?;
            let task: Task = Box::new(move |cfg| {
                let out = vs_closure(&k, cap, cfg)?;
                Ok(listing(
                    Record::new("close")
                        .field("operator", "VS")
                        .field("cap", cap)
                        .functions(&out)
                        .finish(),
                ))
            });
            (format!("close vs cap={cap}"), input, task)
        }
        CloseOp::Lom => {
            let (k, input) = class_input(&a.input)?;
            let m = required(a.m, "m")?;
            let task: Task = Box::new(move |cfg| {
                let out = lo_m_closure(&k, m, cfg)?;
                Ok(listing(
                    Record::new("close")
                        .field("operator", "Lo_m")
                        .field("m", m)
                        .functions(&out)
                        .finish(),
                ))
            });
            (format!("close lom m={m}"), input, task)
        }
        CloseOp::Lon => {
            let (t, input) = set_input(&a.input)?;
            let n = required(a.n, "n")?;
            let task: Task = Box::new(move |cfg| {
                let out = lo_n_closure(&t, n, cfg)?;
                Ok(listing(
                    Record::new("close")
                        .field("operator", "LO_n")
                        .field("n", n)
                        .constraints(&out)
                        .finish(),
                ))
            });
            (format!("close lon n={n}"), input, task)
        }
        CloseOp::Cmm => {
            let (t, input) = set_input(&a.input)?;
            let m = set_arity(&t, a.m)?;
            let task: Task = Box::new(move |cfg| {
                let out = cm_m_closure(&t, m, &bounds, cfg)?;
                let text = Record::new("close")
                    .field("operator", "CM_m")
                    .field("m", m)
                    .field("converged", out.converged)
                    .field("rounds", out.rounds)
                    .constraints(&out.set)
                    .finish();
                Ok(listing(text))
            });
            (format!("close cmm m={m}"), input, task)
        }
        CloseOp::Cm => {
            let (t, input) = set_input(&a.input)?;
            let cap = top_arity(t.arities(), a.cap)?;
            let task: Task = Box::new(move |cfg| {
                let out = cm_closure(&t, cap, &bounds, cfg)?;
                let text = Record::new("close")
                    .field("operator", "CM")
                    .field("cap", cap)
                    .field("converged", out.converged)
                    .constraints(&out.set)
                    .finish();
                Ok(listing(text))
            });
            (format!("close cm cap={cap}"), input, task)
        }
    };
    Ok(Prepared {
        operation,
        input,
        cacheable: true,
        task,
    })
}

fn prepare_galois(a: GaloisArgs) -> Result<Prepared, Failure> {
    let (scope, value) = match (a.arity, a.cap) {
        (Some(n), None) => ("arity", n),
        (None, Some(c)) => ("cap", c),
        _ => return Err(Failure::usage("pass exactly one of --arity and --cap")),
    };
    let (input, task): (String, Task) = match a.side {
        GaloisSide::Fsc => {
            let (t, input) = set_input(&a.input)?;
            let task: Task = Box::new(move |cfg| {
                let out = if scope == "arity" {
                    fsc_n(&t, value, cfg)?
                } else {
                    fsc(&t, value, cfg)?
                };
                Ok(listing(
                    Record::new("galois")
                        .field("map", "FSC")
                        .field(scope, value)
                        .functions(&out)
                        .finish(),
                ))
            });
            (input, task)
        }
        GaloisSide::Csf => {
            let (k, input) = class_input(&a.input)?;
            let task: Task = Box::new(move |cfg| {
                let out = if scope == "arity" {
                    csf_m(&k, value, cfg)?
                } else {
                    csf(&k, value, cfg)?
                };
                Ok(listing(
                    Record::new("galois")
                        .field("map", "CSF")
                        .field(scope, value)
                        .constraints(&out)
                        .finish(),
                ))
            });
            (input, task)
        }
    };
    Ok(Prepared {
        operation: format!("galois {:?} {scope}={value}", a.side),
        input,
        cacheable: true,
        task,
    })
}

enum Check {
    Factorization(Factorization),
    Definability(Definability),
    CmOracle { m: usize },
}

fn report_outcome(r: &ClosureReport) -> Outcome {
    Outcome {
        code: if r.holds { EXIT_OK } else { EXIT_DISCREPANCY },
        text: render::report(r),
    }
}

fn prepare_verify(a: VerifyArgs, bounds: CmBounds) -> Result<Prepared, Failure> {
    use Identity::*;
    let on_functions = matches!(
        a.identity,
        FunctionsFactorization | FixedArityFunctions | NaryDefinable | MaryDefinable | UnaryDefinable
    );
    let (k, t, input) = if on_functions {
        let (k, input) = class_input(&a.input)?;
        (Some(k), None, input)
    } else {
        let (t, input) = set_input(&a.input)?;
        (None, Some(t), input)
    };
    let kn = |given| class_arity(k.as_ref().expect("class input"), given);
    let tm = |given| set_arity(t.as_ref().expect("set input"), given);
    let tcap = |given| top_arity(t.as_ref().expect("set input").arities(), given);
    let check = match a.identity {
        FunctionsFactorization => {
            let cap = top_arity(k.as_ref().expect("class input").arities(), a.cap)?;
            Check::Factorization(Factorization::Functions { cap })
        }
        NaryConstraintsFactorization => Check::Factorization(Factorization::ConstraintsOfNary {
            n: required(a.n, "n")?,
            cap: tcap(a.cap)?,
        }),
        MaryConstraintsFactorization => Check::Factorization(Factorization::MaryConstraints { m: tm(a.m)? }),
        FixedArityFunctions => Check::Factorization(Factorization::FixedArityFunctions {
            n: kn(a.n)?,
            m: required(a.m, "m")?,
        }),
        FixedArityConstraints => Check::Factorization(Factorization::FixedArityConstraints {
            n: required(a.n, "n")?,
            m: tm(a.m)?,
        }),
        NaryDefinable => Check::Definability(Definability::NaryClass { n: kn(a.n)? }),
        NaryCharacterized => Check::Definability(Definability::NaryCharacterized {
            n: required(a.n, "n")?,
            cap: tcap(a.cap)?,
        }),
        MaryDefinable => Check::Definability(Definability::MaryDefinable {
            n: kn(a.n)?,
            m: required(a.m, "m")?,
        }),
        MaryCharacterized => Check::Definability(Definability::MaryCharacterized {
            n: required(a.n, "n")?,
            m: tm(a.m)?,
        }),
        UnaryDefinable => Check::Definability(Definability::UnaryClass),
        UnaryCharacterized => Check::Definability(Definability::UnaryCharacterized { cap: tcap(a.cap)? }),
        CmOracle => Check::CmOracle { m: tm(a.m)? },
    };
    let operation = match &check {
        Check::Factorization(f) => format!("verify {f:?}"),
        Check::Definability(d) => format!("verify {d:?}"),
        Check::CmOracle { m } => format!("verify cm oracle m={m}"),
    };
    let task: Task = Box::new(move |cfg| {
        let instance = match (&k, &t) {
            (Some(k), _) => Instance::Functions(k),
            (_, Some(t)) => Instance::Constraints(t),
            _ => unreachable!("one input is always resolved"),
        };
        let r = match check {
            Check::Factorization(f) => verify_factorization(f, instance, &bounds, cfg)?,
            Check::Definability(d) => verify_definability(d, instance, &bounds, cfg)?,
            Check::CmOracle { m } => check_cm_oracle(t.as_ref().expect("set input"), m, &bounds, 0, cfg)?,
        };
        Ok(report_outcome(&r))
    });
    Ok(Prepared {
        operation,
        input,
        cacheable: true,
        task,
    })
}

fn prepare_enumerate(a: EnumerateArgs) -> Result<Prepared, Failure> {
    let (da, db) = a.domains.domains()?;
    let n = a.arity;
    let operation = format!("enumerate {:?} arity={n} A={} B={}", a.kind, da.size(), db.size());
    let task: Task = match a.kind {
        Universe::Functions => Box::new(move |cfg| {
            let k = FunctionClass::from_tables(da, db, enumerate_functions(da, db, n, cfg)?)?;
            Ok(listing(
                Record::new("enumerate")
                    .field("universe", "functions")
                    .field("arity", n)
                    .functions(&k)
                    .finish(),
            ))
        }),
        Universe::Constraints => Box::new(move |cfg| {
            let t = all_constraints(da, db, n, cfg)?;
            Ok(listing(
                Record::new("enumerate")
                    .field("universe", "constraints")
                    .field("arity", n)
                    .constraints(&t)
                    .finish(),
            ))
        }),
    };
    Ok(Prepared {
        operation,
        input: String::new(),
        cacheable: true,
        task,
    })
}

fn all_constraints(a: Domain, b: Domain, m: usize, cfg: &Config) -> Result<ConstraintSet, Error> {
    if m == 0 {
        return Err(Error::Range("constraints have arity at least 1".into()));
    }
    let count = constraint_universe_size(a, b, m);
    if count > cfg.max_constraints as u128 {
        return Err(Error::Budget {
            what: format!("all {m}-ary constraints"),
            count,
            limit: cfg.max_constraints as u128,
        });
    }
    let (pa, pb) = (a.power(m).expect("within budget"), b.power(m).expect("within budget"));
    if pa.max(pb) >= 64 {
        return Err(Error::Range(format!("{m}-ary relations do not fit a 64-bit mask")));
    }
    let mut t = ConstraintSet::new(a, b);
    for ant in 0..1u64 << pa {
        for con in 0..1u64 << pb {
            t.insert(Constraint::from_masks(a, b, m, ant, con)?)?;
        }
    }
    Ok(t)
}

fn audit<O>(op: &O, samples: &[O::Set], cfg: &Config) -> Result<ClosureReport, Error>
where
    O: ClosureOperator,
    <O::Set as ObjectSet>::Item: Into<galois_core::galois_lab::Witness>,
{
    check_closure_laws(op, samples, cfg)
}

fn sample_classes<R: Rng>(
    rng: &mut R,
    count: usize,
    da: Domain,
    db: Domain,
    arity: impl Fn(&mut R) -> usize,
) -> Result<Vec<FunctionClass>, Error> {
    (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=4);
            let mut k = FunctionClass::new(da, db);
            for _ in 0..size {
                let n = arity(rng);
                k.insert(sampling::random_function(rng, da, db, n)?)?;
            }
            Ok(k)
        })
        .collect()
}

fn sample_sets<R: Rng>(
    rng: &mut R,
    count: usize,
    da: Domain,
    db: Domain,
    m: usize,
    density: f64,
) -> Result<Vec<ConstraintSet>, Error> {
    (0..count)
        .map(|_| {
            let p = rng.gen_range(0.0..density);
            sampling::random_subset_of_q(rng, da, db, m, p)
        })
        .collect()
}

fn prepare_laws(a: LawsArgs, bounds: CmBounds) -> Result<Prepared, Failure> {
    let (da, db) = a.domains.domains()?;
    if a.samples == 0 {
        return Err(Failure::usage("--samples must be positive"));
    }
    let ops: Vec<LawOp> = match a.operator {
        Some(op) => vec![op],
        None => vec![LawOp::Vsn, LawOp::Vs, LawOp::Lom, LawOp::Lon, LawOp::Cmm],
    };
    let operation = format!(
        "laws {ops:?} samples={} seed={} arity={:?} m={} n={} cap={} A={} B={}",
        a.samples,
        a.seed,
        a.arity,
        a.m,
        a.n,
        a.cap,
        da.size(),
        db.size()
    );
    let task: Task = Box::new(move |cfg| {
        let mut text = String::new();
        let mut code = EXIT_OK;
        for op in ops {
            let mut rng = sampling::rng(a.seed);
            let fn_arity = a.arity.unwrap_or(2);
            let set_arity = a.arity.unwrap_or(1);
            let r = match op {
                LawOp::Vsn => audit(&VsN, &sample_classes(&mut rng, a.samples, da, db, |_| fn_arity)?, cfg)?,
                LawOp::Vs => {
                    let cap = a.cap;
                    let samples = sample_classes(&mut rng, a.samples, da, db, |r| r.gen_range(1..=cap))?;
                    audit(&Vs { cap }, &samples, cfg)?
                }
                LawOp::Lom => audit(
                    &LoM { m: a.m },
                    &sample_classes(&mut rng, a.samples, da, db, |_| fn_arity)?,
                    cfg,
                )?,
                LawOp::Lon => audit(
                    &LoN { n: a.n },
                    &sample_sets(&mut rng, a.samples, da, db, set_arity, 0.5)?,
                    cfg,
                )?,
                LawOp::Cmm => {
                    let samples = sample_sets(&mut rng, a.samples, da, db, set_arity, 0.15)?;
                    audit(&CmM { m: set_arity, bounds }, &samples, cfg)?
                }
            };
            if !r.holds {
                code = EXIT_DISCREPANCY;
            }
            text.push_str(&render::report(&r));
        }
        Ok(Outcome { code, text })
    });
    Ok(Prepared {
        operation,
        input: String::new(),
        cacheable: true,
        task,
    })
}
