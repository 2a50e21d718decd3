//! Command dispatch and reports.

use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Map, Value};

use semikernel::comodule::{check_comodule, induced_action, rat_property_suite, rational_part, MeasuringPairing};
use semikernel::coring::{check_semicoring, coideal_check, dual_semiring, gallery, mutation_corpus, quotient_semicoring, Semicoring};
use semikernel::error::{Budget, Error as CoreError};
use semikernel::finite::{all_subs, check_semimodule_axioms, exactness_check, quotient_by_sub, short_sequence, ExactMode, FiniteModule, Sub};
use semikernel::report::ValidationReport;
use semikernel::semiring::{check_semiring_axioms, Semiring};
use semikernel::tensor::{Strategy, TensorProduct};

use crate::doc::{Command, Decl, Document, ModuleDecl};

/// Number of corpus mutations drawn from each free gallery coring.
pub const MUTATIONS_PER_CORING: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Undecided,
    Fail,
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Undecided => "undecided",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub command: String,
    pub subject: String,
    pub verdict: Verdict,
    pub checks: Vec<(String, Option<String>)>,
    pub data: Value,
}

impl Record {
    fn new(command: &str, subject: impl Into<String>) -> Record {
        Record { command: command.into(), subject: subject.into(), verdict: Verdict::Pass, checks: Vec::new(), data: json!({}) }
    }

    fn with_report(mut self, r: &ValidationReport) -> Record {
        for c in &r.checks {
            self.checks.push((c.name.clone(), c.witness.clone()));
        }
        if !r.passed() {
            self.verdict = self.verdict.max(Verdict::Fail);
        }
        self
    }

    fn failed(command: &str, subject: impl Into<String>, e: &CoreError) -> Record {
        let mut r = Record::new(command, subject);
        r.verdict = match e {
            CoreError::Undecided { .. } | CoreError::NoRule(..) | CoreError::Unsupported(_) => Verdict::Undecided,
            CoreError::Format(_) | CoreError::Parameter(_) | CoreError::BaseMismatch(_) | CoreError::NotComposable(_) => Verdict::Error,
            _ => Verdict::Fail,
        };
        r.data = json!({"error": e.to_string()});
        r
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|(n, w)| {
                let mut o = Map::new();
                o.insert("name".into(), json!(n));
                o.insert("passed".into(), json!(w.is_none()));
                if let Some(w) = w {
                    o.insert("witness".into(), json!(w));
                }
                Value::Object(o)
            })
            .collect();
        json!({
            "command": self.command,
            "subject": self.subject,
            "verdict": self.verdict.name(),
            "checks": checks,
            "data": self.data,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub records: Vec<Record>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn verdict(&self) -> Verdict {
        self.records.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass)
    }

    /// 0 pass, 1 fail, 2 undecided, 3 input error.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Undecided => 2,
            Verdict::Error => 3,
        }
    }

    fn summary(&self) -> Value {
        let count = |v: Verdict| self.records.iter().filter(|r| r.verdict == v).count();
        json!({
            "summary": {
                "records": self.records.len(),
                "pass": count(Verdict::Pass),
                "fail": count(Verdict::Fail),
                "undecided": count(Verdict::Undecided),
                "error": count(Verdict::Error),
                "verdict": self.verdict().name(),
            },
            "elapsed_ms": self.elapsed_ms,
        })
    }

    /// One JSON record per line, then a summary line carrying the timing field.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json().to_string());
            out.push('\n');
        }
        out.push_str(&self.summary().to_string());
        out.push('\n');
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# semik report\n\n");
        for r in &self.records {
            out.push_str(&format!("## {} {}: {}\n\n", r.command, r.subject, r.verdict.name().to_uppercase()));
            for (n, w) in &r.checks {
                match w {
                    None => out.push_str(&format!("- [x] {n}\n")),
                    Some(w) => out.push_str(&format!("- [ ] {n}: {w}\n")),
                }
            }
            if r.data.as_object().map_or(false, |o| !o.is_empty()) {
                out.push_str("\n```json\n");
                out.push_str(&crate::doc::to_text(&r.data));
                out.push_str("```\n");
            }
            out.push('\n');
        }
        let s = self.summary();
        out.push_str(&format!("verdict: {}\n\n", s["summary"]["verdict"].as_str().unwrap_or("")));
        out.push_str(&format!("elapsed_ms: {}\n", self.elapsed_ms));
        out
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub budget: Budget,
    /// Table modules for the rational-part property suite.
    pub family: Vec<Arc<FiniteModule>>,
}

impl Default for Options {
    fn default() -> Self {
        Options { budget: Budget::DEFAULT, family: Vec::new() }
    }
}

pub fn run(doc: &Document, commands: &[Command], opts: &Options) -> Report {
    let start = Instant::now();
    let mut records = Vec::new();
    for cmd in commands {
        if let Err(e) = crate::doc::check_resolves(doc, cmd) {
            let mut r = Record::new("input", format!("{cmd:?}"));
            r.verdict = Verdict::Error;
            r.data = json!({"error": e});
            records.push(r);
            continue;
        }
        match cmd {
            Command::Gallery => records.extend(run_gallery(opts)),
            _ => records.push(run_one(doc, cmd, opts)),
        }
    }
    Report { records, elapsed_ms: start.elapsed().as_millis() }
}

fn run_one(doc: &Document, cmd: &Command, opts: &Options) -> Record {
    let (verb, subject) = match cmd {
        Command::Validate(n) => ("validate", n.clone()),
        Command::Tensor(a, b) => ("tensor", format!("{a} ⊗ {b}")),
        Command::Dual { coring, side } => ("dual", format!("{coring} ({})", side.name())),
        Command::Coideal { coring, .. } => ("coideal", coring.clone()),
        Command::Rational { pairing, module } => ("rational", format!("{module} over {pairing}")),
        Command::Exact { module } => ("exact", module.clone()),
        Command::Gallery => ("gallery", String::new()),
    };
    let result = match cmd {
        Command::Validate(n) => validate(doc, n, opts),
        Command::Tensor(a, b) => tensor_cmd(doc, a, b, opts),
        Command::Dual { coring, side } => coring_of(doc, coring).and_then(|c| {
            let d = dual_semiring(&c, side.core(), opts.budget)?;
            let mut r = Record::new(verb, subject.clone()).with_report(&d.report);
            r.data = json!({
                "size": d.tables.elements.len(),
                "elements": d.tables.elements,
                "add": d.tables.add,
                "mul": d.tables.mul,
                "one": d.tables.one,
            });
            Ok(r)
        }),
        Command::Coideal { coring, elements } => coring_of(doc, coring).and_then(|c| coideal_cmd(&c, elements, opts)),
        Command::Rational { pairing, module } => rational_cmd(doc, pairing, module, opts),
        Command::Exact { module } => exact_cmd(doc, module),
        Command::Gallery => unreachable!("expanded by run"),
    };
    match result {
        Ok(mut r) => {
            r.command = verb.into();
            r.subject = subject;
            r
        }
        Err(e) => Record::failed(verb, subject, &e),
    }
}

fn coring_of(doc: &Document, name: &str) -> Result<Arc<Semicoring>, CoreError> {
    match doc.get(name) {
        Some(Decl::Coring(c)) => Ok(c.clone()),
        _ => Err(CoreError::Format(format!("`{name}` is not a coring"))),
    }
}

fn validate(doc: &Document, name: &str, opts: &Options) -> Result<Record, CoreError> {
    let r = Record::new("validate", name);
    Ok(match doc.get(name).expect("resolved") {
        Decl::Semiring(s) => match s {
            Semiring::Nat => r.with_report(&semikernel::semiring::check_nat_axioms(semikernel::semiring::DEFAULT_SAMPLES, 0)),
            _ => r.with_report(&check_semiring_axioms(s.tables().expect("finite"))?),
        },
        Decl::Module(ModuleDecl::Table(t)) => r.with_report(&check_semimodule_axioms(t)),
        Decl::Module(ModuleDecl::Atoms(m)) => {
            let mut r = r;
            r.data = json!({"atoms": m.atoms()});
            if m.is_finite() {
                let t = m.to_finite(opts.budget)?;
                r = r.with_report(&check_semimodule_axioms(&t.table));
            }
            r
        }
        Decl::Coring(c) => r.with_report(&check_semicoring(c)?),
        Decl::Comodule(m) => r.with_report(&check_comodule(m)?),
        Decl::Pairing(p) => r.with_report(&p.check()?),
    })
}

fn tensor_cmd(doc: &Document, a: &str, b: &str, opts: &Options) -> Result<Record, CoreError> {
    let module = |n: &str| match doc.get(n) {
        Some(Decl::Module(d)) => d.presented(),
        _ => Err(CoreError::Format(format!("`{n}` is not a module"))),
    };
    let (m, n) = (module(a)?, module(b)?);
    let t = TensorProduct::new(&m, &n, Strategy::Rules, opts.budget)?;
    let mut pure = Vec::new();
    for &(i, g) in &m.generators() {
        for &(j, h) in &n.generators() {
            let (x, y) = (m.unit(i, g), n.unit(j, h));
            pure.push(json!([m.label(&x), n.label(&y), t.result().label(&t.pure(&x, &y))]));
        }
    }
    let cardinality = if t.result().is_finite() { json!(t.result().enumerate(opts.budget)?.len()) } else { Value::Null };
    let mut r = Record::new("tensor", "");
    r.data = json!({
        "left": m.atoms(),
        "right": n.atoms(),
        "atoms": t.result().atoms(),
        "cardinality": cardinality,
        "pure_generators": pure,
    });
    Ok(r)
}

fn coideal_cmd(c: &Semicoring, elements: &[String], opts: &Options) -> Result<Record, CoreError> {
    let en = c.carrier.to_finite(opts.budget)?;
    let idx = elements.iter().map(|e| c.carrier.parse(e).map(|x| en.index_of(&x))).collect::<Result<Vec<_>, _>>()?;
    let k = Sub::generated(&en.table, &idx);
    let rep = coideal_check(c, &en, &k, opts.budget)?;
    let mut r = Record::new("coideal", "");
    r.checks.push(("K subtractive".into(), (!rep.uniform).then(|| "K differs from its closure".to_string())));
    r.checks.push(("Δ(K) in the closure of K⊗C + C⊗K".into(), rep.delta_condition.clone()));
    r.checks.push(("ε(K) = 0".into(), rep.counit_condition.clone()));
    let labels: Vec<String> = k.elements().iter().map(|&x| en.table.label(x).to_string()).collect();
    let mut data = json!({"K": labels});
    if rep.is_coideal == Some(true) {
        let (q, _) = quotient_semicoring(c, &en, &k)?;
        data["quotient_size"] = json!(q.carrier.enumerate(opts.budget)?.len());
        r = r.with_report(&check_semicoring(&q)?);
    } else {
        r.verdict = Verdict::Fail;
    }
    r.data = data;
    Ok(r)
}

fn rational_cmd(doc: &Document, pairing: &str, module: &str, opts: &Options) -> Result<Record, CoreError> {
    let p: Arc<MeasuringPairing> = match doc.get(pairing) {
        Some(Decl::Pairing(p)) => p.clone(),
        _ => return Err(CoreError::Format(format!("`{pairing}` is not a pairing"))),
    };
    let m = match doc.get(module).expect("resolved") {
        Decl::Module(ModuleDecl::Table(t)) => t.clone(),
        Decl::Comodule(c) => induced_action(&p, c, opts.budget)?.module,
        _ => return Err(CoreError::Format(format!("`{module}` must be a table module over the pairing or a comodule"))),
    };
    let rat = rational_part(&p, &m, opts.budget)?;
    let mut r = Record::new("rational", "").with_report(&check_comodule(&rat.comodule)?);
    let coaction: Vec<Value> = rat
        .sub
        .elements()
        .iter()
        .map(|&x| {
            let terms: Vec<String> = rat.representing[x]
                .as_ref()
                .expect("member")
                .iter()
                .map(|(i, c)| format!("{}⊗{}", m.label(*i), p.coring.show(c)))
                .collect();
            json!([m.label(x), if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }])
        })
        .collect();
    if !opts.family.is_empty() {
        let family: Vec<Arc<FiniteModule>> = opts.family.iter().filter(|f| f.base() == &p.algebra).cloned().collect();
        r = r.with_report(&rat_property_suite(&p, &family, opts.budget)?);
    }
    r.data = json!({"ambient_size": m.size(), "size": rat.sub.len(), "coaction": coaction});
    Ok(r)
}

fn exact_cmd(doc: &Document, module: &str) -> Result<Record, CoreError> {
    let m = match doc.get(module) {
        Some(Decl::Module(ModuleDecl::Table(t))) => t.clone(),
        Some(Decl::Module(ModuleDecl::Atoms(a))) if a.is_finite() => a.to_finite(Budget::DEFAULT)?.table,
        _ => return Err(CoreError::Unsupported(format!("`{module}` is not a finite module"))),
    };
    let mut r = Record::new("exact", "");
    let subs = all_subs(&m);
    let mut witness = None;
    for l in &subs {
        let (lbar, incl) = l.closure().as_module();
        let _ = lbar;
        let (_, pi) = quotient_by_sub(l);
        let rep = exactness_check(&short_sequence(&incl, &pi), ExactMode::Exact)?;
        if !rep.holds {
            let w = rep.joints.iter().find_map(|j| j.witness.clone()).unwrap_or_default();
            let labels: Vec<&str> = l.elements().iter().map(|&x| m.label(x)).collect();
            witness = Some(format!("L = {{{}}}: {w}", labels.join(", ")));
            break;
        }
    }
    r.checks.push(("0 → L̄ → M → M/L → 0 exact for every L".into(), witness.clone()));
    if witness.is_some() {
        r.verdict = Verdict::Fail;
    }
    r.data = json!({"subsemimodules": subs.len()});
    Ok(r)
}

/// The built-in corings, then the mutation corpus: a mutation passes when it is rejected.
pub fn run_gallery(opts: &Options) -> Vec<Record> {
    let _ = opts;
    let mut out = Vec::new();
    match gallery() {
        Ok(cs) => {
            for c in cs {
                let r = Record::new("gallery", c.name.clone());
                out.push(match check_semicoring(&c) {
                    Ok(rep) => r.with_report(&rep),
                    Err(e) => Record::failed("gallery", c.name.clone(), &e),
                });
            }
        }
        Err(e) => out.push(Record::failed("gallery", "built-in corings", &e)),
    }
    match mutation_corpus(MUTATIONS_PER_CORING) {
        Ok(muts) => {
            for (tag, d) in muts {
                let mut r = Record::new("mutation", d.name.clone());
                let verdict = d.build().and_then(|c| check_semicoring(&c));
                match verdict {
                    Ok(rep) => match rep.first_failure() {
                        Some(f) => {
                            r.checks.push((format!("rejected ({tag})"), None));
                            r.data = json!({"failed_check": f.name, "witness": f.witness});
                        }
                        None => {
                            r.checks.push((format!("rejected ({tag})"), Some("the mutated coring passed every check".into())));
                            r.verdict = Verdict::Fail;
                        }
                    },
                    Err(e) => {
                        r.checks.push((format!("rejected ({tag})"), None));
                        r.data = json!({"error": e.to_string()});
                    }
                }
                out.push(r);
            }
        }
        Err(e) => out.push(Record::failed("mutation", "corpus", &e)),
    }
    out
}
