//! The JSON document surface: declarations, commands and the canonical serializer.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::Arc;

use serde_json::value::RawValue;
use serde_json::{json, Map, Value};

use semikernel::comodule::{MeasuringPairing, Semicomodule};
use semikernel::coring::{
    counterexample, grouplike_data, polynomial_data, sweedler, trivial_coextension, word_data, DualSide, FreeCoringData,
    PolyVariant, Semicoring,
};
use semikernel::error::{Budget, Error as CoreError};
use semikernel::finite::{Action, FiniteModule};
use semikernel::linear::{Column, LinearMap};
use semikernel::module::{AtomKind, Component, Elem, Module};
use semikernel::semiring::{Builtin, Scalar, Semiring, SemiringMorphism, SemiringTables};

/// A document error with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone)]
pub enum ModuleDecl {
    Atoms(Module),
    Table(Arc<FiniteModule>),
}

impl ModuleDecl {
    pub fn presented(&self) -> Result<Module, CoreError> {
        match self {
            ModuleDecl::Atoms(m) => Ok(m.clone()),
            ModuleDecl::Table(t) => Ok(Module::from_finite(t)?.0),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Decl {
    Semiring(Semiring),
    Module(ModuleDecl),
    Coring(Arc<Semicoring>),
    Comodule(Semicomodule),
    Pairing(Arc<MeasuringPairing>),
}

impl Decl {
    pub fn kind(&self) -> &'static str {
        match self {
            Decl::Semiring(_) => "semiring",
            Decl::Module(_) => "module",
            Decl::Coring(_) => "coring",
            Decl::Comodule(_) => "comodule",
            Decl::Pairing(_) => "pairing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate(String),
    Tensor(String, String),
    Dual { coring: String, side: Side },
    Coideal { coring: String, elements: Vec<String> },
    Rational { pairing: String, module: String },
    Exact { module: String },
    Gallery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Two,
}

impl Side {
    pub fn core(self) -> DualSide {
        match self {
            Side::Left => DualSide::Left,
            Side::Right => DualSide::Right,
            Side::Two => DualSide::Two,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Two => "two",
        }
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "two" | "two-sided" => Ok(Side::Two),
            _ => Err(format!("unknown dual side `{s}` (left, right, two)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub decls: Vec<(String, Decl)>,
    index: HashMap<String, usize>,
    pub commands: Vec<Command>,
}

impl Document {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.index.get(name).map(|&i| &self.decls[i].1)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.decls.iter().map(|(n, _)| n.as_str())
    }

    pub fn push(&mut self, name: String, d: Decl) {
        self.index.insert(name.clone(), self.decls.len());
        self.decls.push((name, d));
    }

    /// The table module declarations, in order.
    pub fn table_modules(&self) -> Vec<Arc<FiniteModule>> {
        self.decls
            .iter()
            .filter_map(|(_, d)| match d {
                Decl::Module(ModuleDecl::Table(t)) => Some(t.clone()),
                _ => None,
            })
            .collect()
    }
}

struct Cursor<'a> {
    text: &'a str,
    offset: usize,
    raw: &'a str,
}

impl Cursor<'_> {
    /// Position of `token` (as a JSON string or key) inside this value, or of the value itself.
    fn at(&self, token: &str, message: impl Into<String>) -> ParseError {
        let quoted = serde_json::to_string(token).unwrap_or_default();
        let rel = self.raw.find(&quoted).unwrap_or(0);
        let (line, column) = line_col(self.text, self.offset + rel);
        ParseError { line, column, message: message.into() }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

type PResult<T> = Result<T, ParseError>;

/// Parses a document; the first error found is reported with its position.
pub fn parse(text: &str) -> PResult<Document> {
    let top: BTreeMap<String, Vec<&RawValue>> =
        serde_json::from_str(text).map_err(|e| ParseError { line: e.line(), column: e.column(), message: e.to_string() })?;
    if let Some(k) = top.keys().find(|k| *k != "declarations" && *k != "commands") {
        let c = Cursor { text, offset: 0, raw: text };
        return Err(c.at(k, format!("unknown top-level key `{k}`")));
    }
    let mut doc = Document::default();
    for raw in top.get("declarations").into_iter().flatten() {
        let c = cursor(text, raw);
        let v: Value = serde_json::from_str(raw.get()).expect("valid JSON");
        let (kind, body) = single_key(&c, &v)?;
        let name = str_field(&c, body, "name")?;
        if doc.index.contains_key(&name) {
            return Err(c.at(&name, format!("`{name}` is declared twice")));
        }
        let decl = match kind {
            "semiring" => Decl::Semiring(parse_semiring(&c, body)?),
            "module" => Decl::Module(parse_module(&c, &doc, body, &name)?),
            "coring" => Decl::Coring(Arc::new(parse_coring(&c, &doc, body, &name)?)),
            "comodule" => Decl::Comodule(parse_comodule(&c, &doc, body, &name)?),
            "pairing" => Decl::Pairing(Arc::new(parse_pairing(&c, &doc, body)?)),
            other => return Err(c.at(other, format!("unknown declaration kind `{other}`"))),
        };
        doc.push(name, decl);
    }
    for raw in top.get("commands").into_iter().flatten() {
        let c = cursor(text, raw);
        let v: Value = serde_json::from_str(raw.get()).expect("valid JSON");
        let cmd = parse_command(&c, &v)?;
        check_command(&c, &doc, &cmd)?;
        doc.commands.push(cmd);
    }
    Ok(doc)
}

fn cursor<'a>(text: &'a str, raw: &'a RawValue) -> Cursor<'a> {
    let offset = raw.get().as_ptr() as usize - text.as_ptr() as usize;
    Cursor { text, offset, raw: raw.get() }
}

fn single_key<'v>(c: &Cursor, v: &'v Value) -> PResult<(&'v str, &'v Value)> {
    match v.as_object() {
        Some(o) if o.len() == 1 => {
            let (k, b) = o.iter().next().expect("one key");
            Ok((k.as_str(), b))
        }
        _ => Err(c.at("", "expected an object with exactly one key")),
    }
}

fn field<'v>(c: &Cursor, v: &'v Value, key: &str) -> PResult<&'v Value> {
    v.get(key).ok_or_else(|| c.at("", format!("missing field `{key}`")))
}

fn str_field(c: &Cursor, v: &Value, key: &str) -> PResult<String> {
    field(c, v, key)?.as_str().map(str::to_string).ok_or_else(|| c.at(key, format!("`{key}` must be a string")))
}

fn str_list(c: &Cursor, v: &Value, key: &str) -> PResult<Vec<String>> {
    field(c, v, key)?
        .as_array()
        .and_then(|a| a.iter().map(|x| x.as_str().map(str::to_string)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| c.at(key, format!("`{key}` must be a list of strings")))
}

fn uint_field(c: &Cursor, v: &Value, key: &str) -> PResult<u64> {
    field(c, v, key)?.as_u64().ok_or_else(|| c.at(key, format!("`{key}` must be a non-negative integer")))
}

/// A square table of indices below `n`, with a positioned error for bad shapes.
fn table(c: &Cursor, v: &Value, key: &str, rows: usize, cols: usize, bound: usize) -> PResult<Vec<Vec<usize>>> {
    let t = field(c, v, key)?.as_array().ok_or_else(|| c.at(key, format!("`{key}` must be a table")))?;
    if t.len() != rows {
        return Err(c.at(key, format!("`{key}` has {} rows, expected {rows}", t.len())));
    }
    t.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array().ok_or_else(|| c.at(key, format!("row {i} of `{key}` is not a list")))?;
            if row.len() != cols {
                return Err(c.at(key, format!("row {i} of `{key}` has {} entries, expected {cols}", row.len())));
            }
            row.iter()
                .map(|x| match x.as_u64() {
                    Some(x) if (x as usize) < bound => Ok(x as usize),
                    _ => Err(c.at(key, format!("row {i} of `{key}` has an entry outside 0..{bound}"))),
                })
                .collect()
        })
        .collect()
}

fn core_err(c: &Cursor, token: &str, e: CoreError) -> ParseError {
    c.at(token, e.to_string())
}

fn parse_semiring(c: &Cursor, v: &Value) -> PResult<Semiring> {
    if let Some(b) = v.get("builtin") {
        let tag = b.as_str().ok_or_else(|| c.at("builtin", "`builtin` must be a string"))?;
        let spec = Builtin::from_str(tag).map_err(|e| core_err(c, tag, e))?;
        return Semiring::builtin(spec).map_err(|e| core_err(c, tag, e));
    }
    let elements = str_list(c, v, "elements")?;
    let n = elements.len();
    let add = table(c, v, "add", n, n, n)?;
    let mul = table(c, v, "mul", n, n, n)?;
    let zero = uint_field(c, v, "zero")? as usize;
    let one = uint_field(c, v, "one")? as usize;
    if zero >= n || one >= n {
        return Err(c.at("zero", "`zero` and `one` must index elements"));
    }
    let name = str_field(c, v, "name")?;
    Semiring::from_tables(SemiringTables { name: name.clone(), elements, add, mul, zero, one }).map_err(|e| core_err(c, &name, e))
}

/// A module base: a semiring, or the algebra of a pairing.
fn base_of(c: &Cursor, doc: &Document, v: &Value) -> PResult<Semiring> {
    let b = str_field(c, v, "base")?;
    match doc.get(&b) {
        Some(Decl::Semiring(s)) => Ok(s.clone()),
        Some(Decl::Pairing(p)) => Ok(p.algebra.clone()),
        Some(d) => Err(c.at(&b, format!("`{b}` is a {}, not a semiring or pairing", d.kind()))),
        None => Err(c.at(&b, format!("unknown base `{b}`"))),
    }
}

fn parse_table_module(c: &Cursor, v: &Value, base: &Semiring, name: &str) -> PResult<FiniteModule> {
    let labels = str_list(c, v, "elements")?;
    let n = labels.len();
    let add = table(c, v, "add", n, n, n)?;
    let (right, left) = match base.size() {
        None => (Action::Additive, None),
        Some(k) => {
            let r = Action::Table(table(c, v, "act", n, k, n)?);
            let l = match v.get("left") {
                Some(_) => Some(Action::Table(table(c, v, "left", n, k, n)?)),
                None => None,
            };
            (r, l)
        }
    };
    FiniteModule::new(base.clone(), name, labels, add, right, left).map_err(|e| core_err(c, name, e))
}

fn parse_module(c: &Cursor, doc: &Document, v: &Value, name: &str) -> PResult<ModuleDecl> {
    let base = base_of(c, doc, v)?;
    let Some(atoms) = v.get("atoms") else {
        return Ok(ModuleDecl::Table(Arc::new(parse_table_module(c, v, &base, name)?)));
    };
    Ok(ModuleDecl::Atoms(parse_atoms(c, atoms, &base, name)?))
}

fn parse_atoms(c: &Cursor, atoms: &Value, base: &Semiring, name: &str) -> PResult<Module> {
    let list = atoms.as_array().ok_or_else(|| c.at("atoms", "`atoms` must be a list"))?;
    let mut parts = Vec::new();
    for a in list {
        let m = match a {
            Value::String(s) => atom(s, base).map_err(|e| core_err(c, s, e))?,
            Value::Object(_) => {
                let t = parse_table_module(c, a, base, str_field(c, a, "name")?.as_str())?;
                Module::from_finite(&t).map_err(|e| core_err(c, "atoms", e))?.0
            }
            _ => return Err(c.at("atoms", "an atom is a name or a table")),
        };
        parts.push(m);
    }
    let m = if parts.is_empty() { Module::zero_module(base) } else { Module::direct_sum(&parts).map_err(|e| core_err(c, "atoms", e))? };
    Ok(m.with_name(name))
}

fn atom(s: &str, base: &Semiring) -> Result<Module, CoreError> {
    let over_nat = matches!(base, Semiring::Nat);
    let cleaned: String = s.chars().map(|c| if c == '(' || c == ')' { ' ' } else { c }).collect();
    let mut parts = cleaned.split_whitespace();
    match (parts.next().unwrap_or(""), parts.next(), over_nat) {
        ("FREE", None, _) | ("NAT", None, true) => Module::base_module(base),
        ("BOOL", None, true) => Ok(Module::bool_atom()),
        ("QMODZ", None, true) => Ok(Module::qmodz()),
        ("CYCLIC", Some(n), true) => Module::cyclic(n.parse().map_err(|_| CoreError::Format(format!("bad atom `{s}`")))?),
        _ => Err(CoreError::Format(format!("unknown atom `{s}` over {base}"))),
    }
}

/// Scalar label, in the base's own display form.
fn scalar(c: &Cursor, base: &Semiring, v: &Value) -> PResult<Scalar> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(c.at("", "a scalar is a label")),
    };
    base.parse_label(&text).ok_or_else(|| c.at(&text, format!("`{text}` is not an element of {base}")))
}

fn parse_coring(c: &Cursor, doc: &Document, v: &Value, name: &str) -> PResult<Semicoring> {
    let semiring = |key: &str| -> PResult<Semiring> {
        let b = str_field(c, v, key)?;
        match doc.get(&b) {
            Some(Decl::Semiring(s)) => Ok(s.clone()),
            _ => Err(c.at(&b, format!("unknown semiring `{b}`"))),
        }
    };
    let built = |r: Result<Semicoring, CoreError>| r.map_err(|e| core_err(c, name, e));
    let renamed = |mut s: Semicoring| {
        s.name = name.to_string();
        s
    };
    if let Some(b) = v.get("builtin") {
        let tag = b.as_str().ok_or_else(|| c.at("builtin", "`builtin` must be a string"))?;
        let free = |d: Result<FreeCoringData, CoreError>| -> PResult<Semicoring> {
            let mut d = d.map_err(|e| core_err(c, tag, e))?;
            d.name = name.to_string();
            built(d.build())
        };
        return match tag {
            "sweedler" => Ok(renamed(built(sweedler(&SemiringMorphism::identity(&semiring("base")?), Budget::DEFAULT))?)),
            "coext" => {
                let m = str_field(c, v, "module")?;
                let module = match doc.get(&m) {
                    Some(Decl::Module(d)) => d.presented().map_err(|e| core_err(c, &m, e))?,
                    _ => return Err(c.at(&m, format!("unknown module `{m}`"))),
                };
                Ok(renamed(built(trivial_coextension(&module))?))
            }
            "grouplike" => {
                let names = str_list(c, v, "basis")?;
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                free(grouplike_data(&semiring("base")?, &refs))
            }
            "polynomial" => {
                let variant = match uint_field(c, v, "variant")? {
                    1 => PolyVariant::GrouplikePowers,
                    2 => PolyVariant::Binomial,
                    _ => return Err(c.at("variant", "polynomial variants are 1 and 2")),
                };
                free(polynomial_data(&semiring("base")?, uint_field(c, v, "degree")? as usize, variant))
            }
            "words" => free(word_data(uint_field(c, v, "length")? as usize, uint_field(c, v, "variant")? as u8)),
            "counterexample" => Ok(renamed(built(counterexample(uint_field(c, v, "n")?))?)),
            other => Err(c.at(other, format!("unknown builtin coring `{other}`"))),
        };
    }
    if v.get("basis").is_some() {
        let base = semiring("base")?;
        let basis = str_list(c, v, "basis")?;
        let n = basis.len();
        let pos = |s: &str| basis.iter().position(|b| b == s).ok_or_else(|| c.at(s, format!("`{s}` is not a basis element")));
        let rows = field(c, v, "delta")?.as_array().filter(|r| r.len() == n).ok_or_else(|| c.at("delta", format!("`delta` needs {n} formal sums")))?;
        let mut delta = vec![vec![vec![base.zero(); n]; n]; n];
        for (i, row) in rows.iter().enumerate() {
            for (coef, l, r) in formal_sum(c, row)? {
                let (j, k) = (pos(&l)?, pos(&r)?);
                let s = scalar(c, &base, &coef)?;
                delta[i][j][k] = base.add(delta[i][j][k], s);
            }
        }
        let eps = field(c, v, "eps")?
            .as_array()
            .filter(|e| e.len() == n)
            .ok_or_else(|| c.at("eps", format!("`eps` needs {n} scalars")))?
            .iter()
            .map(|x| scalar(c, &base, x))
            .collect::<PResult<Vec<_>>>()?;
        return built(FreeCoringData { name: name.to_string(), base, basis, delta, eps }.build());
    }
    let carrier = match field(c, v, "carrier")? {
        Value::String(m) => match doc.get(m) {
            Some(Decl::Module(d)) => d.presented().map_err(|e| core_err(c, m, e))?,
            _ => return Err(c.at(m, format!("unknown module `{m}`"))),
        },
        inline => {
            let base = base_of(c, doc, inline)?;
            parse_atoms(c, field(c, inline, "atoms")?, &base, &str_field(c, inline, "name")?)?
        }
    };
    let gens = carrier.generators();
    let cc = semikernel::tensor::tensor(&carrier, &carrier).map_err(|e| core_err(c, name, e))?;
    let rows = field(c, v, "delta")?
        .as_array()
        .filter(|r| r.len() == gens.len())
        .ok_or_else(|| c.at("delta", format!("`delta` needs {} formal sums, one per generator", gens.len())))?;
    let delta = rows
        .iter()
        .map(|row| {
            let terms = formal_sum(c, row)?
                .into_iter()
                .map(|(k, l, r)| {
                    let k = k.as_u64().ok_or_else(|| c.at("delta", "multiplicities are natural numbers"))?;
                    let x = carrier.parse(&l).map_err(|e| core_err(c, &l, e))?;
                    let y = carrier.parse(&r).map_err(|e| core_err(c, &r, e))?;
                    Ok(cc.result().nat_mul(k, &cc.pure(&x, &y)))
                })
                .collect::<PResult<Vec<Elem>>>()?;
            Ok(cc.result().sum(&terms))
        })
        .collect::<PResult<Vec<_>>>()?;
    let eps = field(c, v, "eps")?
        .as_array()
        .filter(|e| e.len() == gens.len())
        .ok_or_else(|| c.at("eps", format!("`eps` needs {} scalars", gens.len())))?
        .iter()
        .map(|x| scalar(c, carrier.base(), x))
        .collect::<PResult<Vec<_>>>()?;
    built(Semicoring::new(name, carrier, delta, eps))
}

/// `[[coefficient, [left, right]], ...]`.
fn formal_sum(c: &Cursor, v: &Value) -> PResult<Vec<(Value, String, String)>> {
    let bad = || c.at("", "a formal sum is a list of [coefficient, [left, right]]");
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|t| {
            let t = t.as_array().filter(|t| t.len() == 2).ok_or_else(bad)?;
            let p = t[1].as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let l = p[0].as_str().ok_or_else(bad)?.to_string();
            let r = p[1].as_str().ok_or_else(bad)?.to_string();
            Ok((t[0].clone(), l, r))
        })
        .collect()
}

fn parse_comodule(c: &Cursor, doc: &Document, v: &Value, name: &str) -> PResult<Semicomodule> {
    let cname = str_field(c, v, "coring")?;
    let coring = match doc.get(&cname) {
        Some(Decl::Coring(k)) => k.clone(),
        _ => return Err(c.at(&cname, format!("unknown coring `{cname}`"))),
    };
    if v.get("regular").and_then(Value::as_bool) == Some(true) {
        let mut m = Semicomodule::regular(&coring);
        m.name = name.to_string();
        return Ok(m);
    }
    let mname = str_field(c, v, "carrier")?;
    let carrier = match doc.get(&mname) {
        Some(Decl::Module(d)) => d.presented().map_err(|e| core_err(c, &mname, e))?,
        _ => return Err(c.at(&mname, format!("unknown module `{mname}`"))),
    };
    if carrier.has_q() {
        return Err(c.at(&mname, "coaction tables cannot describe a QMODZ carrier"));
    }
    let mc = semikernel::tensor::tensor(&carrier, &coring.carrier).map_err(|e| core_err(c, name, e))?;
    let gens = carrier.generators();
    let rows = field(c, v, "coaction")?
        .as_array()
        .filter(|r| r.len() == gens.len())
        .ok_or_else(|| c.at("coaction", format!("`coaction` needs {} formal sums", gens.len())))?;
    let mut images = Vec::new();
    for row in rows {
        let mut terms = Vec::new();
        for (k, l, r) in formal_sum(c, row)? {
            let k = k.as_u64().ok_or_else(|| c.at("coaction", "multiplicities are natural numbers"))?;
            let x = carrier.parse(&l).map_err(|e| core_err(c, &l, e))?;
            let y = coring.carrier.parse(&r).map_err(|e| core_err(c, &r, e))?;
            terms.push(mc.result().nat_mul(k, &mc.pure(&x, &y)));
        }
        images.push(mc.result().sum(&terms));
    }
    let mut cols = Vec::new();
    let mut k = 0;
    for comp in carrier.comps() {
        let n = comp.presented().expect("no QMODZ").nvars();
        cols.push(Column::Gens(images[k..k + n].to_vec()));
        k += n;
    }
    let coaction = LinearMap::new(carrier.clone(), mc.result().clone(), cols).map_err(|e| core_err(c, name, e))?;
    Ok(Semicomodule { name: name.to_string(), coring, carrier, mc, coaction })
}

fn parse_pairing(c: &Cursor, doc: &Document, v: &Value) -> PResult<MeasuringPairing> {
    let cname = str_field(c, v, "coring")?;
    let coring = match doc.get(&cname) {
        Some(Decl::Coring(k)) => k.clone(),
        _ => return Err(c.at(&cname, format!("unknown coring `{cname}`"))),
    };
    if let Some(side) = v.get("dual") {
        if side.as_str() != Some("left") {
            return Err(c.at("dual", "measuring pairings use the left dual"));
        }
        return MeasuringPairing::from_dual(&coring, Budget::DEFAULT).map_err(|e| core_err(c, &cname, e));
    }
    let sname = str_field(c, v, "semiring")?;
    let algebra = match doc.get(&sname) {
        Some(Decl::Semiring(s)) => s.clone(),
        _ => return Err(c.at(&sname, format!("unknown semiring `{sname}`"))),
    };
    let base = coring.base().clone();
    let unit = field(c, v, "unit")?
        .as_array()
        .ok_or_else(|| c.at("unit", "`unit` lists the image of each base scalar"))?
        .iter()
        .map(|x| scalar(c, &algebra, x))
        .collect::<PResult<Vec<_>>>()?;
    let unit = SemiringMorphism::new(base.clone(), algebra.clone(), unit).map_err(|e| core_err(c, "unit", e))?;
    let a = Module::base_module(&base).map_err(|e| core_err(c, "coring", e))?;
    let gens = coring.carrier.generators();
    let rows = field(c, v, "evaluation")?
        .as_array()
        .filter(|r| Some(r.len()) == algebra.size())
        .ok_or_else(|| c.at("evaluation", "`evaluation` needs one row per element of the semiring"))?;
    let mut kappa = Vec::new();
    for row in rows {
        let vals = row
            .as_array()
            .filter(|r| r.len() == gens.len())
            .ok_or_else(|| c.at("evaluation", format!("each evaluation row needs {} scalars", gens.len())))?
            .iter()
            .map(|x| scalar(c, &base, x).map(|s| a.from_scalar(s).expect("scalar")))
            .collect::<PResult<Vec<_>>>()?;
        let mut cols = Vec::new();
        let mut k = 0;
        for comp in coring.carrier.comps() {
            let n = comp.presented().expect("no QMODZ").nvars();
            cols.push(Column::Gens(vals[k..k + n].to_vec()));
            k += n;
        }
        kappa.push(LinearMap::new(coring.carrier.clone(), a.clone(), cols).map_err(|e| core_err(c, "evaluation", e))?);
    }
    MeasuringPairing::new(&coring, algebra, unit, kappa).map_err(|e| core_err(c, "evaluation", e))
}

fn parse_command(c: &Cursor, v: &Value) -> PResult<Command> {
    if v.as_str() == Some("gallery") {
        return Ok(Command::Gallery);
    }
    let (verb, body) = single_key(c, v)?;
    let name = |b: &Value| b.as_str().map(str::to_string).ok_or_else(|| c.at(verb, format!("`{verb}` takes a name")));
    Ok(match verb {
        "validate" => Command::Validate(name(body)?),
        "tensor" => {
            let pair = body.as_array().filter(|a| a.len() == 2).ok_or_else(|| c.at(verb, "`tensor` takes two module names"))?;
            Command::Tensor(name(&pair[0])?, name(&pair[1])?)
        }
        "dual" => match body {
            Value::String(s) => Command::Dual { coring: s.clone(), side: Side::Left },
            _ => {
                let side = match body.get("side") {
                    Some(s) => s.as_str().unwrap_or("").parse().map_err(|e: String| c.at("side", e))?,
                    None => Side::Left,
                };
                Command::Dual { coring: str_field(c, body, "coring")?, side }
            }
        },
        "coideal" => Command::Coideal { coring: str_field(c, body, "coring")?, elements: str_list(c, body, "elements")? },
        "rational" => Command::Rational { pairing: str_field(c, body, "pairing")?, module: str_field(c, body, "module")? },
        "exact" => Command::Exact { module: name(body)? },
        "gallery" => Command::Gallery,
        other => return Err(c.at(other, format!("unknown command `{other}`"))),
    })
}

/// Every name a command mentions must resolve to a declaration of the right kind.
fn check_command(c: &Cursor, doc: &Document, cmd: &Command) -> PResult<()> {
    let want = |n: &str, kinds: &[&str]| -> PResult<()> {
        match doc.get(n) {
            Some(d) if kinds.contains(&d.kind()) => Ok(()),
            Some(d) => Err(c.at(n, format!("`{n}` is a {}, expected {}", d.kind(), kinds.join(" or ")))),
            None => Err(c.at(n, format!("dangling reference `{n}`"))),
        }
    };
    match cmd {
        Command::Validate(n) => want(n, &["semiring", "module", "coring", "comodule", "pairing"]),
        Command::Tensor(a, b) => want(a, &["module"]).and(want(b, &["module"])),
        Command::Dual { coring, .. } | Command::Coideal { coring, .. } => want(coring, &["coring"]),
        Command::Rational { pairing, module } => want(pairing, &["pairing"]).and(want(module, &["module", "comodule"])),
        Command::Exact { module } => want(module, &["module"]),
        Command::Gallery => Ok(()),
    }
}

pub fn check_resolves(doc: &Document, cmd: &Command) -> Result<(), String> {
    let c = Cursor { text: "", offset: 0, raw: "" };
    check_command(&c, doc, cmd).map_err(|e| e.message)
}

// Serialization. Keys come out sorted, so equal values give identical text.

pub fn semiring_value(s: &Semiring) -> Value {
    match (s.builtin_tag(), s) {
        (Some(tag), _) => json!({"name": s.name(), "builtin": tag.to_string()}),
        (None, Semiring::Nat) => json!({"name": "NAT", "builtin": "NAT"}),
        (None, _) => {
            let t = s.tables().expect("finite");
            json!({"name": t.name, "elements": t.elements, "add": t.add, "mul": t.mul, "zero": t.zero, "one": t.one})
        }
    }
}

fn action_rows(a: &Action) -> Option<&Vec<Vec<usize>>> {
    match a {
        Action::Table(t) => Some(t),
        Action::Additive => None,
    }
}

pub fn table_module_value(m: &FiniteModule, base_name: &str) -> Value {
    let mut o = Map::new();
    o.insert("name".into(), json!(m.name()));
    o.insert("base".into(), json!(base_name));
    o.insert("elements".into(), json!(m.labels()));
    o.insert("add".into(), json!(m.add_table()));
    if let Some(t) = action_rows(m.right_action()) {
        o.insert("act".into(), json!(t));
    }
    if !m.is_symmetric() {
        if let Some(t) = action_rows(m.left_action()) {
            o.insert("left".into(), json!(t));
        }
    }
    Value::Object(o)
}

fn atom_value(comp: &Component, base: &Semiring, base_name: &str) -> Result<Value, CoreError> {
    let p = match comp {
        Component::QmodZ => return Ok(json!("QMODZ")),
        Component::P(p) => p,
    };
    Ok(match &p.kind {
        AtomKind::Free { .. } => json!("FREE"),
        AtomKind::Cyclic(n) => json!(format!("CYCLIC({n})")),
        AtomKind::Bool => json!("BOOL"),
        AtomKind::Generic => {
            let single = Module::new(base.clone(), p.label.clone(), vec![comp.clone()])?;
            let t = single.to_finite(Budget::DEFAULT)?;
            table_module_value(&t.table.clone().as_ref().clone().with_name(p.label.clone()), base_name)
        }
    })
}

pub fn module_value(m: &Module, base_name: &str) -> Result<Value, CoreError> {
    let atoms = m.comps().iter().map(|c| atom_value(c, m.base(), base_name)).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({"name": m.name(), "base": base_name, "atoms": atoms}))
}

/// Coefficient of e_j⊗e_k in each Δ(e_i), for a coring built on a named basis.
fn basis_constants(c: &Semicoring) -> Option<(Vec<Vec<Vec<Scalar>>>, Vec<Scalar>)> {
    let basis = c.basis.as_ref()?;
    let n = basis.len();
    let base = c.base();
    if c.carrier.comps().len() != n || !c.carrier.comps().iter().all(|p| matches!(p.presented().map(|p| &p.kind), Some(AtomKind::Free { .. }))) {
        return None;
    }
    let coords = |x: &Elem| -> Vec<Scalar> {
        (0..n).map(|j| c.carrier.presented(j).scalar_of(x.0[j].vector()).expect("free coordinate")).collect()
    };
    let e = |i: usize| c.carrier.embed(i, semikernel::module::CompElem::P(c.carrier.presented(i).scalar_nf(base.one()).expect("one")));
    let mut delta = vec![vec![vec![base.zero(); n]; n]; n];
    for (i, row) in delta.iter_mut().enumerate() {
        for (x, y) in c.sweedler(&e(i)) {
            let (cx, cy) = (coords(&x), coords(&y));
            for j in 0..n {
                for k in 0..n {
                    row[j][k] = base.add(row[j][k], base.mul(cx[j], cy[k]));
                }
            }
        }
    }
    let eps = (0..n).map(|i| c.eps(&e(i))).collect();
    Some((delta, eps))
}

pub fn free_coring_value(d: &FreeCoringData, base_name: &str) -> Value {
    let n = d.rank();
    let delta: Vec<Value> = (0..n)
        .map(|i| {
            let mut terms = Vec::new();
            for j in 0..n {
                for k in 0..n {
                    let s = d.delta[i][j][k];
                    if s != d.base.zero() {
                        terms.push(json!([d.base.label(s), [d.basis[j], d.basis[k]]]));
                    }
                }
            }
            Value::Array(terms)
        })
        .collect();
    let eps: Vec<String> = d.eps.iter().map(|&s| d.base.label(s)).collect();
    json!({"name": d.name, "base": base_name, "basis": d.basis, "delta": delta, "eps": eps})
}

pub fn coring_value(c: &Semicoring, base_name: &str) -> Result<Value, CoreError> {
    if let Some((delta, eps)) = basis_constants(c) {
        let d = FreeCoringData { name: c.name.clone(), base: c.base().clone(), basis: c.basis.clone().expect("basis"), delta, eps };
        return Ok(free_coring_value(&d, base_name));
    }
    let gens = c.carrier.generators();
    let mut delta = Vec::new();
    let mut eps = Vec::new();
    for &(i, g) in &gens {
        let u = c.carrier.unit(i, g);
        let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (x, y) in c.sweedler(&u) {
            *counts.entry((c.carrier.label(&x), c.carrier.label(&y))).or_default() += 1;
        }
        delta.push(Value::Array(counts.into_iter().map(|((l, r), k)| json!([k, [l, r]])).collect()));
        eps.push(c.base().label(c.eps(&u)));
    }
    Ok(json!({"name": c.name, "carrier": module_value(&c.carrier, base_name)?, "delta": delta, "eps": eps}))
}

/// A self-contained document declaring `c` and its base, followed by `commands`.
pub fn coring_document(c: &Semicoring, commands: Vec<Value>) -> Result<Value, CoreError> {
    let s = semiring_value(c.base());
    let base_name = s["name"].as_str().expect("name").to_string();
    Ok(json!({"declarations": [{"semiring": s}, {"coring": coring_value(c, &base_name)?}], "commands": commands}))
}

pub fn free_coring_document(d: &FreeCoringData, commands: Vec<Value>) -> Value {
    let s = semiring_value(&d.base);
    let base_name = s["name"].as_str().expect("name").to_string();
    json!({"declarations": [{"semiring": s}, {"coring": free_coring_value(d, &base_name)}], "commands": commands})
}

/// All built-in corings in one document, each followed by a `validate` command.
pub fn gallery_document() -> Result<Value, CoreError> {
    let mut decls: Vec<Value> = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    let mut commands = Vec::new();
    for c in semikernel::coring::gallery()? {
        let s = semiring_value(c.base());
        let base_name = s["name"].as_str().expect("name").to_string();
        if !seen.contains(&base_name) {
            seen.push(base_name.clone());
            decls.push(json!({"semiring": s}));
        }
        decls.push(json!({"coring": coring_value(&c, &base_name)?}));
        commands.push(json!({"validate": c.name}));
    }
    Ok(json!({"declarations": decls, "commands": commands}))
}

/// The mutation corpus as standalone documents, with file stems.
pub fn mutation_documents(per_coring: usize) -> Result<Vec<(String, Value)>, CoreError> {
    let slug = |s: &str| {
        let raw: String = s.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' }).collect();
        raw.split('-').filter(|p| !p.is_empty()).collect::<Vec<_>>().join("-")
    };
    Ok(semikernel::coring::mutation_corpus(per_coring)?
        .into_iter()
        .enumerate()
        .map(|(i, (tag, d))| {
            let family = d.name.split(" [").next().unwrap_or("").to_string();
            let stem = format!("{i:02}-{}-{}", slug(&family), slug(&tag));
            let cmd = json!({"validate": d.name});
            (stem, free_coring_document(&d, vec![cmd]))
        })
        .collect())
}

/// Canonical text: pretty JSON with number rows kept on one line.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(_) if !has_object(v) => {
            out.push_str(&serde_json::to_string(v).expect("json"));
        }
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(o) if o.is_empty() => out.push_str("{}"),
        Value::Object(o) => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("json"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("json")),
    }
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(a) => a.iter().any(has_object),
        _ => false,
    }
}
