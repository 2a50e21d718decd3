//! Presented semimodules: finite direct sums of atoms, each a finitely presented
//! commutative monoid with a scalar action on its generators, plus ℚ/ℤ atoms.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Budget, Error, Result};
use crate::finite::{Action, FiniteModule};
use crate::rewrite::{self, RewriteSystem, Vector};
use crate::semiring::{Scalar, Semiring};

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// The base semiring as a module over itself; generators are additive generators of S.
    Free { gen_scalars: Vec<Scalar>, scalar_nf: Vec<Vector> },
    /// ℤ/n over NAT.
    Cyclic(u64),
    /// The Boolean monoid {0,1} over NAT.
    Bool,
    Generic,
}

/// One finitely presented atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presented {
    pub label: String,
    pub kind: AtomKind,
    pub gens: Vec<String>,
    pub rs: RewriteSystem,
    /// `right[g][s]` is the normal form of g·s; `None` over NAT.
    pub right: Option<Vec<Vec<Vector>>>,
    /// Only present when the left action differs from the right one.
    pub left: Option<Vec<Vec<Vector>>>,
    /// Display names of normal forms, when known.
    pub names: BTreeMap<Vector, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Component {
    P(Arc<Presented>),
    QmodZ,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompElem {
    P(Vector),
    Q(Q),
}

impl CompElem {
    pub fn vector(&self) -> &[u64] {
        match self {
            CompElem::P(v) => v,
            CompElem::Q(_) => panic!("ℚ/ℤ component has no generator vector"),
        }
    }

    pub fn q(&self) -> Q {
        match self {
            CompElem::Q(q) => *q,
            CompElem::P(_) => panic!("not a ℚ/ℤ component"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CompElem::P(v) => rewrite::is_zero(v),
            CompElem::Q(q) => *q.numer() == 0,
        }
    }
}

/// An element of a presented module, one normal form per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub Vec<CompElem>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    base: Semiring,
    name: String,
    comps: Vec<Component>,
}

/// Reduces a rational into [0, 1).
pub fn frac(q: Q) -> Q {
    let n = q.numer().mod_floor(q.denom());
    Q::new(n, *q.denom())
}

/// Presentation of a finite commutative monoid by generators and Cayley relations,
/// with the normal form of every element.
pub(crate) fn cayley_presentation(
    n: usize,
    zero: usize,
    add: &dyn Fn(usize, usize) -> usize,
    gens: &[usize],
    budget: Budget,
) -> Result<(RewriteSystem, Vec<Vector>)> {
    let k = gens.len();
    let mut word: Vec<Option<Vector>> = vec![None; n];
    word[zero] = Some(vec![0; k]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for (i, &g) in gens.iter().enumerate() {
            let y = add(x, g);
            if word[y].is_none() {
                let mut w = word[x].clone().expect("visited");
                w[i] += 1;
                word[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    let word: Vec<Vector> = word
        .into_iter()
        .enumerate()
        .map(|(x, w)| w.ok_or_else(|| Error::Internal(format!("element {x} not reached from the generators"))))
        .collect::<Result<_>>()?;
    let mut rels = Vec::new();
    for x in 0..n {
        for (i, &g) in gens.iter().enumerate() {
            let mut lhs = word[x].clone();
            lhs[i] += 1;
            let rhs = word[add(x, g)].clone();
            if lhs != rhs {
                rels.push((lhs, rhs));
            }
        }
    }
    let rs = RewriteSystem::complete(k, rels, budget)?;
    let nf = word.into_iter().map(|w| rs.normalize(w)).collect();
    Ok((rs, nf))
}

impl Presented {
    pub fn nvars(&self) -> usize {
        self.gens.len()
    }

    pub fn zero(&self) -> Vector {
        vec![0; self.nvars()]
    }

    pub fn unit(&self, g: usize) -> Vector {
        rewrite::unit(self.nvars(), g)
    }

    pub fn normalize(&self, v: Vector) -> Vector {
        self.rs.normalize(v)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vector {
        self.normalize(rewrite::add(a, b))
    }

    pub fn nat_mul(&self, k: u64, a: &[u64]) -> Vector {
        self.normalize(rewrite::scale(k, a))
    }

    /// Σ_g v_g · table[g][s], normalized.
    fn apply_table(&self, table: &[Vec<Vector>], v: &[u64], s: Scalar) -> Vector {
        let mut acc = self.zero();
        for (g, &c) in v.iter().enumerate() {
            if c > 0 {
                let img = &table[g][s as usize];
                for (a, x) in acc.iter_mut().zip(img) {
                    *a += c * x;
                }
            }
        }
        self.normalize(acc)
    }

    pub fn act(&self, v: &[u64], s: Scalar) -> Vector {
        match &self.right {
            None => self.nat_mul(s, v),
            Some(t) => self.apply_table(t, v, s),
        }
    }

    pub fn lact(&self, s: Scalar, v: &[u64]) -> Vector {
        match (&self.left, &self.right) {
            (Some(t), _) => self.apply_table(t, v, s),
            (None, None) => self.nat_mul(s, v),
            (None, Some(t)) => self.apply_table(t, v, s),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.left.is_none()
    }

    /// For a `Free` atom, the scalar an element stands for.
    pub fn scalar_of(&self, v: &[u64]) -> Option<Scalar> {
        match &self.kind {
            AtomKind::Free { scalar_nf, .. } if scalar_nf.is_empty() => Some(v[0]),
            AtomKind::Free { scalar_nf, .. } => scalar_nf.iter().position(|x| x == v).map(|i| i as Scalar),
            _ => None,
        }
    }

    pub fn scalar_nf(&self, s: Scalar) -> Option<Vector> {
        match &self.kind {
            AtomKind::Free { scalar_nf, .. } if scalar_nf.is_empty() => Some(vec![s]),
            AtomKind::Free { scalar_nf, .. } => scalar_nf.get(s as usize).cloned(),
            _ => None,
        }
    }

    pub fn name_of(&self, v: &[u64]) -> String {
        if let Some(n) = self.names.get(v) {
            return n.clone();
        }
        match self.kind {
            AtomKind::Cyclic(_) | AtomKind::Bool => return v[0].to_string(),
            AtomKind::Free { ref scalar_nf, .. } if scalar_nf.is_empty() => return v[0].to_string(),
            _ => {}
        }
        if rewrite::is_zero(v) {
            return "0".into();
        }
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(g, &c)| if c == 1 { self.gens[g].clone() } else { format!("{c}·{}", self.gens[g]) })
            .collect();
        terms.join("+")
    }

    pub fn parse(&self, text: &str) -> Option<Vector> {
        let text = text.trim();
        if let Some((v, _)) = self.names.iter().find(|(_, n)| n.as_str() == text) {
            return Some(v.clone());
        }
        if let Ok(k) = text.parse::<u64>() {
            match self.kind {
                AtomKind::Cyclic(_) | AtomKind::Bool => return Some(self.nat_mul(k, &[1])),
                AtomKind::Free { ref scalar_nf, .. } if scalar_nf.is_empty() => return Some(vec![k]),
                _ if k == 0 => return Some(self.zero()),
                _ => {}
            }
        }
        let mut acc = self.zero();
        for term in text.split('+') {
            let term = term.trim();
            let (k, name) = match term.split_once('·') {
                Some((k, name)) => (k.trim().parse::<u64>().ok()?, name.trim()),
                None => (1, term),
            };
            let g = self.gens.iter().position(|x| x == name)?;
            acc[g] += k;
        }
        Some(self.normalize(acc))
    }

    /// The base semiring S as a module over itself.
    pub fn free(base: &Semiring) -> Result<Presented> {
        match base {
            Semiring::Nat => Ok(Presented {
                label: "NAT".into(),
                kind: AtomKind::Free { gen_scalars: vec![1], scalar_nf: Vec::new() },
                gens: vec!["1".into()],
                rs: RewriteSystem::free(1),
                right: None,
                left: None,
                names: BTreeMap::new(),
            }),
            Semiring::Finite(_) => {
                let n = base.size().expect("finite");
                let gens_s = base.additive_generators();
                let gens: Vec<usize> = gens_s.iter().map(|&g| g as usize).collect();
                let add = |a: usize, b: usize| base.add(a as Scalar, b as Scalar) as usize;
                let (rs, nf) = cayley_presentation(n, base.zero() as usize, &add, &gens, Budget::DEFAULT)?;
                let right: Vec<Vec<Vector>> =
                    gens_s.iter().map(|&g| (0..n).map(|t| nf[base.mul(g, t as Scalar) as usize].clone()).collect()).collect();
                let left: Vec<Vec<Vector>> =
                    gens_s.iter().map(|&g| (0..n).map(|t| nf[base.mul(t as Scalar, g) as usize].clone()).collect()).collect();
                let names = nf.iter().enumerate().map(|(s, v)| (v.clone(), base.label(s as Scalar))).collect();
                Ok(Presented {
                    label: base.name(),
                    kind: AtomKind::Free { gen_scalars: gens_s.clone(), scalar_nf: nf },
                    gens: gens_s.iter().map(|&g| base.label(g)).collect(),
                    rs,
                    left: if left == right { None } else { Some(left) },
                    right: Some(right),
                    names,
                })
            }
        }
    }

    pub fn cyclic(n: u64) -> Result<Presented> {
        if n < 1 {
            return Err(Error::Parameter(format!("CYCLIC({n}) needs n ≥ 1")));
        }
        Ok(Presented {
            label: format!("CYCLIC({n})"),
            kind: AtomKind::Cyclic(n),
            gens: vec!["1".into()],
            rs: RewriteSystem::complete(1, vec![(vec![n], vec![0])], Budget::DEFAULT)?,
            right: None,
            left: None,
            names: BTreeMap::new(),
        })
    }

    pub fn bool_atom() -> Presented {
        Presented {
            label: "BOOL".into(),
            kind: AtomKind::Bool,
            gens: vec!["1".into()],
            rs: RewriteSystem::complete(1, vec![(vec![2], vec![1])], Budget::DEFAULT).expect("one rule"),
            right: None,
            left: None,
            names: BTreeMap::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.nvars()).all(|g| rewrite::is_zero(&self.normalize(self.unit(g))))
    }
}

impl Component {
    pub fn label(&self) -> String {
        match self {
            Component::P(p) => p.label.clone(),
            Component::QmodZ => "QMODZ".into(),
        }
    }

    pub fn presented(&self) -> Option<&Arc<Presented>> {
        match self {
            Component::P(p) => Some(p),
            Component::QmodZ => None,
        }
    }

    pub fn zero(&self) -> CompElem {
        match self {
            Component::P(p) => CompElem::P(p.zero()),
            Component::QmodZ => CompElem::Q(Q::from_integer(0)),
        }
    }
}

/// The enumeration of a finite presented module as a table module.
#[derive(Debug, Clone)]
pub struct Enumerated {
    pub table: Arc<FiniteModule>,
    pub elems: Vec<Elem>,
    pub index: HashMap<Elem, usize>,
}

impl Enumerated {
    pub fn index_of(&self, e: &Elem) -> usize {
        *self.index.get(e).expect("element of the enumerated module")
    }
}

impl Module {
    pub fn new(base: Semiring, name: impl Into<String>, comps: Vec<Component>) -> Result<Module> {
        if comps.iter().any(|c| matches!(c, Component::QmodZ)) && base != Semiring::Nat {
            return Err(Error::Unsupported("QMODZ atoms are only available over NAT".into()));
        }
        for c in &comps {
            if let Component::P(p) = c {
                let finite = base.is_finite();
                if finite != p.right.is_some() {
                    return Err(Error::BaseMismatch(format!("atom {} does not match base {base}", p.label)));
                }
            }
        }
        Ok(Module { base, name: name.into(), comps })
    }

    /// The base semiring as a module over itself.
    pub fn base_module(base: &Semiring) -> Result<Module> {
        Module::new(base.clone(), base.name(), vec![Component::P(Arc::new(Presented::free(base)?))])
    }

    pub fn free(base: &Semiring, rank: usize) -> Result<Module> {
        let atom = Arc::new(Presented::free(base)?);
        Module::new(base.clone(), format!("{}^{rank}", base.name()), vec![Component::P(atom); rank])
    }

    pub fn zero_module(base: &Semiring) -> Module {
        Module { base: base.clone(), name: "0".into(), comps: Vec::new() }
    }

    pub fn nat() -> Module {
        Module::base_module(&Semiring::Nat).expect("NAT")
    }

    pub fn cyclic(n: u64) -> Result<Module> {
        Module::new(Semiring::Nat, format!("CYCLIC({n})"), vec![Component::P(Arc::new(Presented::cyclic(n)?))])
    }

    pub fn bool_atom() -> Module {
        Module { base: Semiring::Nat, name: "BOOL".into(), comps: vec![Component::P(Arc::new(Presented::bool_atom()))] }
    }

    pub fn qmodz() -> Module {
        Module { base: Semiring::Nat, name: "QMODZ".into(), comps: vec![Component::QmodZ] }
    }

    pub fn direct_sum(parts: &[Module]) -> Result<Module> {
        let base = match parts.first() {
            Some(m) => m.base.clone(),
            None => return Err(Error::Unsupported("direct sum of an empty list needs a base".into())),
        };
        if let Some(m) = parts.iter().find(|m| m.base != base) {
            return Err(Error::BaseMismatch(format!("{} is over {}, expected {base}", m.name, m.base)));
        }
        let comps = parts.iter().flat_map(|m| m.comps.iter().cloned()).collect();
        let name = parts.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join("⊕");
        Ok(Module { base, name, comps })
    }

    /// A finite table module as a single generic atom, with the element correspondence.
    pub fn from_finite(m: &FiniteModule) -> Result<(Module, Vec<Elem>)> {
        let n = m.size();
        let add = |a: usize, b: usize| m.add(a, b);
        let gens = crate::semiring::monoid_generators(n, 0, add);
        let (rs, nf) = cayley_presentation(n, 0, &add, &gens, Budget::DEFAULT)?;
        let (right, left) = match m.base().elements() {
            None => (None, None),
            Some(scalars) => {
                let r: Vec<Vec<Vector>> =
                    gens.iter().map(|&g| scalars.iter().map(|&s| nf[m.act(g, s)].clone()).collect()).collect();
                let l: Vec<Vec<Vector>> =
                    gens.iter().map(|&g| scalars.iter().map(|&s| nf[m.lact(s, g)].clone()).collect()).collect();
                let left = if l == r { None } else { Some(l) };
                (Some(r), left)
            }
        };
        let names = nf.iter().enumerate().map(|(x, v)| (v.clone(), m.label(x).to_string())).collect();
        let atom = Presented {
            label: m.name().to_string(),
            kind: AtomKind::Generic,
            gens: gens.iter().map(|&g| m.label(g).to_string()).collect(),
            rs,
            right,
            left,
            names,
        };
        let module = Module { base: m.base().clone(), name: m.name().to_string(), comps: vec![Component::P(Arc::new(atom))] };
        let elems = nf.into_iter().map(|v| Elem(vec![CompElem::P(v)])).collect();
        Ok((module, elems))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Module {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &Semiring {
        &self.base
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn comps(&self) -> &[Component] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Component {
        &self.comps[i]
    }

    pub fn presented(&self, i: usize) -> &Arc<Presented> {
        self.comps[i].presented().expect("presented component")
    }

    /// Same base and atoms; names are ignored.
    pub fn same_as(&self, other: &Module) -> bool {
        self.base == other.base
            && self.comps.len() == other.comps.len()
            && self.comps.iter().zip(&other.comps).all(|(a, b)| match (a, b) {
                (Component::P(x), Component::P(y)) => Arc::ptr_eq(x, y) || x == y,
                (Component::QmodZ, Component::QmodZ) => true,
                _ => false,
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.comps.iter().all(|c| c.presented().map_or(true, |p| p.is_symmetric()))
    }

    pub fn zero(&self) -> Elem {
        Elem(self.comps.iter().map(|c| c.zero()).collect())
    }

    pub fn is_zero(&self, e: &Elem) -> bool {
        e.0.iter().all(|c| c.is_zero())
    }

    /// The element with `value` in component `comp` and zero elsewhere.
    pub fn embed(&self, comp: usize, value: CompElem) -> Elem {
        let mut z = self.zero();
        z.0[comp] = value;
        z
    }

    pub fn unit(&self, comp: usize, g: usize) -> Elem {
        self.embed(comp, CompElem::P(self.presented(comp).unit(g)))
    }

    /// All (component, generator) pairs of presented components.
    pub fn generators(&self) -> Vec<(usize, usize)> {
        self.comps
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.presented().map(|p| (i, p.nvars())))
            .flat_map(|(i, k)| (0..k).map(move |g| (i, g)))
            .collect()
    }

    pub fn generator_name(&self, comp: usize, g: usize) -> String {
        let p = self.presented(comp);
        if self.comps.len() == 1 {
            p.gens[g].clone()
        } else {
            self.label(&self.unit(comp, g))
        }
    }

    pub fn has_q(&self) -> bool {
        self.comps.iter().any(|c| matches!(c, Component::QmodZ))
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(
            self.comps
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(c, (x, y))| match (c, x, y) {
                    (Component::P(p), CompElem::P(x), CompElem::P(y)) => CompElem::P(p.add(x, y)),
                    (Component::QmodZ, CompElem::Q(x), CompElem::Q(y)) => CompElem::Q(frac(x + y)),
                    _ => panic!("element does not match module {}", self.name),
                })
                .collect(),
        )
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.zero(), |acc, e| self.add(&acc, e))
    }

    pub fn nat_mul(&self, k: u64, a: &Elem) -> Elem {
        Elem(
            self.comps
                .iter()
                .zip(&a.0)
                .map(|(c, x)| match (c, x) {
                    (Component::P(p), CompElem::P(x)) => CompElem::P(p.nat_mul(k, x)),
                    (Component::QmodZ, CompElem::Q(q)) => CompElem::Q(q_mul(k as i64, *q)),
                    _ => panic!("element does not match module {}", self.name),
                })
                .collect(),
        )
    }

    /// Right action a·s.
    pub fn act(&self, a: &Elem, s: Scalar) -> Elem {
        if !self.base.is_finite() {
            return self.nat_mul(s, a);
        }
        Elem(
            self.comps
                .iter()
                .zip(&a.0)
                .map(|(c, x)| match (c, x) {
                    (Component::P(p), CompElem::P(x)) => CompElem::P(p.act(x, s)),
                    _ => panic!("element does not match module {}", self.name),
                })
                .collect(),
        )
    }

    /// Left action s·a.
    pub fn lact(&self, s: Scalar, a: &Elem) -> Elem {
        if !self.base.is_finite() {
            return self.nat_mul(s, a);
        }
        Elem(
            self.comps
                .iter()
                .zip(&a.0)
                .map(|(c, x)| match (c, x) {
                    (Component::P(p), CompElem::P(x)) => CompElem::P(p.lact(s, x)),
                    _ => panic!("element does not match module {}", self.name),
                })
                .collect(),
        )
    }

    /// For the base module, the scalar an element stands for.
    pub fn as_scalar(&self, e: &Elem) -> Option<Scalar> {
        if self.comps.len() != 1 {
            return None;
        }
        self.presented(0).scalar_of(e.0[0].vector())
    }

    pub fn from_scalar(&self, s: Scalar) -> Option<Elem> {
        if self.comps.len() != 1 {
            return None;
        }
        self.comps[0].presented()?.scalar_nf(s).map(|v| Elem(vec![CompElem::P(v)]))
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.presented().map_or(false, |p| p.rs.is_finite()))
    }

    /// Every element, components enumerated breadth-first; zero comes first.
    pub fn enumerate(&self, budget: Budget) -> Result<Vec<Elem>> {
        if self.has_q() {
            return Err(Error::Unsupported(format!("{} has a QMODZ atom and cannot be enumerated", self.name)));
        }
        let mut per_comp = Vec::new();
        let mut total: usize = 1;
        for c in &self.comps {
            let p = c.presented().expect("no QMODZ");
            let els = p.rs.enumerate(budget)?;
            total = total.saturating_mul(els.len());
            if total > budget.0 {
                return Err(budget.exceeded(format!("enumerating {}", self.name)));
            }
            per_comp.push(els);
        }
        let mut out = vec![Elem(Vec::new())];
        for els in per_comp.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * els.len());
            for v in els {
                for tail in &out {
                    let mut e = Vec::with_capacity(tail.0.len() + 1);
                    e.push(CompElem::P(v.clone()));
                    e.extend(tail.0.iter().cloned());
                    next.push(Elem(e));
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn to_finite(&self, budget: Budget) -> Result<Enumerated> {
        let elems = self.enumerate(budget)?;
        let index: HashMap<Elem, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let idx = |e: &Elem| *index.get(e).expect("closed");
        let n = elems.len();
        let add: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| idx(&self.add(&elems[a], &elems[b]))).collect()).collect();
        let (right, left) = match self.base.elements() {
            None => (Action::Additive, None),
            Some(scalars) => {
                let r = Action::Table(elems.iter().map(|e| scalars.iter().map(|&s| idx(&self.act(e, s))).collect()).collect());
                let l = if self.is_symmetric() {
                    None
                } else {
                    Some(Action::Table(
                        elems.iter().map(|e| scalars.iter().map(|&s| idx(&self.lact(s, e))).collect()).collect(),
                    ))
                };
                (r, l)
            }
        };
        let labels = elems.iter().map(|e| self.label(e)).collect();
        let table = FiniteModule::from_tables(self.base.clone(), self.name.clone(), labels, add, right, left)?;
        Ok(Enumerated { table: Arc::new(table), elems, index })
    }

    pub fn comp_label(&self, i: usize, x: &CompElem) -> String {
        match (&self.comps[i], x) {
            (Component::P(p), CompElem::P(v)) => p.name_of(v),
            (Component::QmodZ, CompElem::Q(q)) => q.to_string(),
            _ => "?".into(),
        }
    }

    pub fn label(&self, e: &Elem) -> String {
        let parts: Vec<String> = e.0.iter().enumerate().map(|(i, x)| self.comp_label(i, x)).collect();
        if parts.len() == 1 {
            parts.into_iter().next().expect("one")
        } else {
            format!("({})", parts.join(", "))
        }
    }

    fn parse_comp(&self, i: usize, text: &str) -> Option<CompElem> {
        match &self.comps[i] {
            Component::P(p) => p.parse(text).map(CompElem::P),
            Component::QmodZ => {
                let t = text.trim();
                let q = match t.split_once('/') {
                    Some((a, b)) => Q::new(a.trim().parse().ok()?, b.trim().parse().ok()?),
                    None => Q::from_integer(t.parse().ok()?),
                };
                Some(CompElem::Q(frac(q)))
            }
        }
    }

    /// Parses the display form produced by `label`.
    pub fn parse(&self, text: &str) -> Result<Elem> {
        let bad = || Error::Format(format!("cannot read {text:?} as an element of {}", self.name));
        let t = text.trim();
        if self.comps.len() == 1 {
            return self.parse_comp(0, t).map(|c| Elem(vec![c])).ok_or_else(bad);
        }
        if self.comps.is_empty() {
            return if t == "0" || t == "()" { Ok(self.zero()) } else { Err(bad()) };
        }
        if t == "0" {
            return Ok(self.zero());
        }
        let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
        let parts = split_top_level(inner);
        if parts.len() != self.comps.len() {
            return Err(bad());
        }
        let comps = parts.iter().enumerate().map(|(i, p)| self.parse_comp(i, p)).collect::<Option<Vec<_>>>().ok_or_else(bad)?;
        Ok(Elem(comps))
    }

    /// Display form of the atom decomposition, e.g. "NAT ⊕ CYCLIC(4)".
    pub fn atoms(&self) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        self.comps.iter().map(|c| c.label()).collect::<Vec<_>>().join(" ⊕ ")
    }
}

fn q_mul(k: i64, q: Q) -> Q {
    let d = *q.denom();
    let k = k.mod_floor(&d);
    frac(Q::new((k as i128 * *q.numer() as i128 % d as i128) as i64, d))
}

pub(crate) fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur).trim().to_string()),
            _ => cur.push(ch),
        }
    }
    out.push(cur.trim().to_string());
    out
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_bool_has_two_elements() {
        let m = Module::base_module(&Semiring::bool()).unwrap();
        assert_eq!(m.enumerate(Budget::DEFAULT).unwrap().len(), 2);
        assert_eq!(Module::free(&Semiring::zmod(2), 3).unwrap().enumerate(Budget::DEFAULT).unwrap().len(), 8);
        assert!(Module::free(&Semiring::bool(), 0).unwrap().enumerate(Budget::DEFAULT).unwrap().len() == 1);
    }

    #[test]
    fn cyclic_arithmetic() {
        let m = Module::cyclic(4).unwrap();
        let one = m.unit(0, 0);
        assert_eq!(m.label(&m.nat_mul(7, &one)), "3");
        assert_eq!(m.parse("5").unwrap(), m.nat_mul(1, &one));
    }

    #[test]
    fn qmodz_reduces() {
        let q = Module::qmodz();
        let a = q.parse("3/4").unwrap();
        assert_eq!(q.label(&q.add(&a, &a)), "1/2");
        assert_eq!(q.label(&q.nat_mul(4, &a)), "0");
    }

    #[test]
    fn finite_round_trip() {
        let f = FiniteModule::free(&Semiring::bool(), 2).unwrap();
        let (m, elems) = Module::from_finite(&f).unwrap();
        let e = m.to_finite(Budget::DEFAULT).unwrap();
        assert_eq!(e.elems.len(), 4);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(m.add(&elems[a], &elems[b]), elems[f.add(a, b)]);
            }
            assert_eq!(m.parse(&m.label(&elems[a])).unwrap(), elems[a]);
        }
    }
}
