use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::semiring::{Scalar, Semiring, SemiringMorphism};

/// Scalar action on a finite module: a table indexed `[element][scalar]`,
/// or the action of NAT by repeated addition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Table(Vec<Vec<usize>>),
    Additive,
}

/// A semimodule with finitely many elements, given by tables; element 0 is the zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModule {
    base: Semiring,
    name: String,
    labels: Vec<String>,
    add: Vec<Vec<usize>>,
    right: Action,
    /// `None` when the left action equals the right one.
    left: Option<Action>,
}

fn nat_multiple(add: &[Vec<usize>], mut k: u64, m: usize) -> usize {
    let (mut acc, mut base) = (0, m);
    while k > 0 {
        if k & 1 == 1 {
            acc = add[acc][base];
        }
        base = add[base][base];
        k >>= 1;
    }
    acc
}

impl FiniteModule {
    /// Builds a module from tables after checking their shape (not the axioms).
    pub fn from_tables(
        base: Semiring,
        name: impl Into<String>,
        labels: Vec<String>,
        add: Vec<Vec<usize>>,
        right: Action,
        left: Option<Action>,
    ) -> Result<Self> {
        let name = name.into();
        let n = labels.len();
        if n == 0 {
            return Err(Error::Format(format!("{name}: a module needs at least the zero element")));
        }
        if add.len() != n || add.iter().any(|r| r.len() != n) {
            return Err(Error::Format(format!("{name}: addition table must be {n}×{n}")));
        }
        if add.iter().flatten().any(|&x| x >= n) {
            return Err(Error::Format(format!("{name}: addition table is not closed")));
        }
        for a in std::iter::once(&right).chain(left.iter()) {
            match (a, base.size()) {
                (Action::Additive, None) => {}
                (Action::Additive, Some(_)) => {
                    return Err(Error::Format(format!("{name}: an action table is required over {base}")))
                }
                (Action::Table(_), None) => {
                    return Err(Error::Format(format!("{name}: NAT acts by repeated addition; omit the action table")))
                }
                (Action::Table(t), Some(k)) => {
                    if t.len() != n || t.iter().any(|r| r.len() != k) {
                        return Err(Error::Format(format!("{name}: action table must be {n}×{k}")));
                    }
                    if t.iter().flatten().any(|&x| x >= n) {
                        return Err(Error::Format(format!("{name}: action table is not closed")));
                    }
                }
            }
        }
        let left = match left {
            Some(l) if l == right => None,
            other => other,
        };
        Ok(FiniteModule { base, name, labels, add, right, left })
    }

    /// Builds a module and insists that every axiom holds.
    pub fn new(
        base: Semiring,
        name: impl Into<String>,
        labels: Vec<String>,
        add: Vec<Vec<usize>>,
        right: Action,
        left: Option<Action>,
    ) -> Result<Self> {
        let m = Self::from_tables(base, name, labels, add, right, left)?;
        let r = check_semimodule_axioms(&m);
        if let Some(c) = r.first_failure() {
            return Err(Error::Hypothesis(format!(
                "{} is not a semimodule: {} fails at {}",
                m.name,
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(m)
    }

    pub(crate) fn from_fns(
        base: &Semiring,
        name: impl Into<String>,
        labels: Vec<String>,
        add: impl Fn(usize, usize) -> usize,
        right: impl Fn(usize, Scalar) -> usize,
        left: Option<&dyn Fn(Scalar, usize) -> usize>,
    ) -> Self {
        let n = labels.len();
        let add_t: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| add(a, b)).collect()).collect();
        let (right_a, left_a) = match base.elements() {
            None => (Action::Additive, None),
            Some(el) => {
                let r = Action::Table((0..n).map(|m| el.iter().map(|&s| right(m, s)).collect()).collect());
                let l = left.map(|f| Action::Table((0..n).map(|m| el.iter().map(|&s| f(s, m)).collect()).collect()));
                (r, l)
            }
        };
        FiniteModule::from_tables(base.clone(), name, labels, add_t, right_a, left_a).expect("well-formed tables")
    }

    pub fn zero_module(base: &Semiring) -> Self {
        FiniteModule::from_fns(base, "0", vec!["0".into()], |_, _| 0, |_, _| 0, None)
    }

    /// Sⁿ with coordinatewise operations (finite S).
    pub fn free(base: &Semiring, rank: usize) -> Result<Self> {
        let k = base
            .size()
            .ok_or_else(|| Error::Unsupported(format!("free({base}, {rank}) has no finite table")))?;
        let size = k.checked_pow(rank as u32).filter(|&s| s <= 1 << 20).ok_or_else(|| {
            Error::Unsupported(format!("free({base}, {rank}) is too large to tabulate"))
        })?;
        // Index = Σ coord_i · k^i, with coordinates stored as scalars relabelled so that zero is 0.
        let zero = base.zero() as usize;
        let to_s = |c: usize| -> Scalar {
            (if c == 0 { zero } else if c == zero { 0 } else { c }) as Scalar
        };
        let from_s = |s: Scalar| -> usize {
            let s = s as usize;
            if s == zero {
                0
            } else if s == 0 {
                zero
            } else {
                s
            }
        };
        let coords = |x: usize| -> Vec<Scalar> {
            let mut v = Vec::with_capacity(rank);
            let mut x = x;
            for _ in 0..rank {
                v.push(to_s(x % k));
                x /= k;
            }
            v
        };
        let encode = |v: &[Scalar]| -> usize { v.iter().rev().fold(0, |acc, &s| acc * k + from_s(s)) };
        let labels = (0..size)
            .map(|x| {
                let c = coords(x);
                if rank == 1 {
                    base.label(c[0])
                } else {
                    format!("({})", c.iter().map(|&s| base.label(s)).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        let add = |a: usize, b: usize| {
            let (ca, cb) = (coords(a), coords(b));
            encode(&ca.iter().zip(&cb).map(|(&x, &y)| base.add(x, y)).collect::<Vec<_>>())
        };
        let right = |m: usize, s: Scalar| encode(&coords(m).iter().map(|&x| base.mul(x, s)).collect::<Vec<_>>());
        let left = |s: Scalar, m: usize| encode(&coords(m).iter().map(|&x| base.mul(s, x)).collect::<Vec<_>>());
        Ok(FiniteModule::from_fns(base, format!("free({base},{rank})"), labels, add, right, Some(&left)))
    }

    /// ℤ/n as a NAT-module.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("CYCLIC needs n ≥ 1".into()));
        }
        let n = n as usize;
        Ok(FiniteModule::from_fns(
            &Semiring::Nat,
            format!("CYCLIC({n})"),
            (0..n).map(|i| i.to_string()).collect(),
            |a, b| (a + b) % n,
            |_, _| 0,
            None,
        ))
    }

    /// The two-element idempotent monoid as a NAT-module.
    pub fn bool_over_nat() -> Self {
        FiniteModule::from_fns(&Semiring::Nat, "BOOL", vec!["0".into(), "1".into()], |a, b| a.max(b), |_, _| 0, None)
    }

    /// Restriction of scalars along a semiring morphism into this module's base.
    pub fn restrict(&self, phi: &SemiringMorphism) -> Result<Self> {
        if phi.target() != &self.base {
            return Err(Error::BaseMismatch(format!("restricting {} along a map into {}", self.name, phi.target())));
        }
        let left: Option<&dyn Fn(Scalar, usize) -> usize> =
            if self.is_symmetric() { None } else { Some(&|s, m| self.lact(phi.apply(s), m)) };
        Ok(FiniteModule::from_fns(
            phi.source(),
            self.name.clone(),
            self.labels.clone(),
            |a, b| self.add(a, b),
            |m, s| self.act(m, phi.apply(s)),
            left,
        ))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.labels.len());
        self.labels = labels;
        self
    }

    pub fn base(&self) -> &Semiring {
        &self.base
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, m: usize) -> &str {
        &self.labels[m]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn right_action(&self) -> &Action {
        &self.right
    }

    pub fn left_action(&self) -> &Action {
        self.left.as_ref().unwrap_or(&self.right)
    }

    pub fn is_symmetric(&self) -> bool {
        self.left.is_none()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn nat_mul(&self, k: u64, m: usize) -> usize {
        nat_multiple(&self.add, k, m)
    }

    /// Right action m·s.
    pub fn act(&self, m: usize, s: Scalar) -> usize {
        match &self.right {
            Action::Table(t) => t[m][s as usize],
            Action::Additive => self.nat_mul(s, m),
        }
    }

    /// Left action s·m.
    pub fn lact(&self, s: Scalar, m: usize) -> usize {
        match self.left_action() {
            Action::Table(t) => t[m][s as usize],
            Action::Additive => self.nat_mul(s, m),
        }
    }

    pub fn sum<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(0, |a, b| self.add(a, b))
    }

    /// Scalars to test the action against: all of them, or a sample when the base is NAT.
    pub(crate) fn test_scalars(&self) -> Vec<Scalar> {
        self.base.elements().unwrap_or_else(|| vec![0, 1, 2, 3, 5, 7, 12, 97])
    }

    pub fn is_cancellative(&self) -> bool {
        let n = self.size();
        (0..n).all(|g| (0..n).all(|x| (0..x).all(|y| self.add(g, x) != self.add(g, y))))
    }

    /// The elements reachable from `gens` under addition and both actions.
    pub fn closure_of(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.size()];
        mask[0] = true;
        let mut stack: Vec<usize> = Vec::new();
        let scalars = self.base.elements().unwrap_or_default();
        for &g in gens {
            if !mask[g] {
                mask[g] = true;
                stack.push(g);
            }
        }
        let mut members: Vec<usize> = (0..self.size()).filter(|&i| mask[i]).collect();
        while let Some(x) = stack.pop() {
            let mut new = Vec::new();
            for &y in &members {
                new.push(self.add(x, y));
            }
            for &s in &scalars {
                new.push(self.act(x, s));
                new.push(self.lact(s, x));
            }
            for z in new {
                if !mask[z] {
                    mask[z] = true;
                    members.push(z);
                    stack.push(z);
                }
            }
        }
        mask
    }

    /// A small generating set under addition and action, chosen deterministically.
    pub fn module_generators(&self) -> Vec<usize> {
        let n = self.size();
        let mut gens = Vec::new();
        let mut reached = vec![false; n];
        reached[0] = true;
        // Elements that are not sums of two other nonzero elements come first.
        let reducible = |x: usize| (1..n).any(|a| a != x && (1..n).any(|b| b != x && self.add(a, b) == x));
        let mut order: Vec<usize> = (1..n).collect();
        order.sort_by_key(|&x| (reducible(x), x));
        for x in order {
            if !reached[x] {
                gens.push(x);
                reached = self.closure_of(&gens);
            }
        }
        gens
    }
}

/// Exhaustive check of the semimodule axioms; NAT actions are checked on sampled scalars.
pub fn check_semimodule_axioms(m: &FiniteModule) -> ValidationReport {
    let n = m.size();
    let l = |i: usize| m.label(i).to_string();
    let s_l = |s: Scalar| m.base.label(s);
    let base = &m.base;
    let scalars = m.test_scalars();
    let mut r = ValidationReport::new(m.name.clone());
    r.sampled = !base.is_finite();
    let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));
    r.push(
        "additive associativity",
        triples()
            .find(|&(a, b, c)| m.add(m.add(a, b), c) != m.add(a, m.add(b, c)))
            .map(|(a, b, c)| format!("({}, {}, {})", l(a), l(b), l(c))),
    );
    r.push(
        "additive commutativity",
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| m.add(a, b) != m.add(b, a))
            .map(|(a, b)| format!("({}, {})", l(a), l(b))),
    );
    r.push("additive identity", (0..n).find(|&a| m.add(a, 0) != a).map(l));
    for (side, act) in [("right", true), ("left", false)] {
        if side == "left" && m.is_symmetric() {
            continue;
        }
        let f = |x: usize, s: Scalar| if act { m.act(x, s) } else { m.lact(s, x) };
        let mut w: Option<String> = None;
        'a: for a in 0..n {
            for b in 0..n {
                for &s in &scalars {
                    if f(m.add(a, b), s) != m.add(f(a, s), f(b, s)) {
                        w = Some(format!("({}+{})·{} ≠ {}·{}+{}·{}", l(a), l(b), s_l(s), l(a), s_l(s), l(b), s_l(s)));
                        break 'a;
                    }
                }
            }
        }
        r.push(format!("{side} action distributes over module addition"), w);
        let mut w: Option<String> = None;
        'b: for a in 0..n {
            for &s in &scalars {
                for &t in &scalars {
                    if f(a, base.add(s, t)) != m.add(f(a, s), f(a, t)) {
                        w = Some(format!("{}·({}+{})", l(a), s_l(s), s_l(t)));
                        break 'b;
                    }
                }
            }
        }
        r.push(format!("{side} action distributes over scalar addition"), w);
        let mut w: Option<String> = None;
        'c: for a in 0..n {
            for &s in &scalars {
                for &t in &scalars {
                    let lhs = if act { f(f(a, s), t) } else { f(f(a, t), s) };
                    if f(a, base.mul(s, t)) != lhs {
                        w = Some(format!("{} with scalars ({}, {})", l(a), s_l(s), s_l(t)));
                        break 'c;
                    }
                }
            }
        }
        r.push(format!("{side} action is associative"), w);
        r.push(format!("{side} unit acts trivially"), (0..n).find(|&a| f(a, base.one()) != a).map(l));
        let zero_w = (0..n)
            .find(|&a| f(a, base.zero()) != 0)
            .map(l)
            .or_else(|| scalars.iter().find(|&&s| f(0, s) != 0).map(|&s| format!("0·{}", s_l(s))));
        r.push(format!("{side} zero absorption"), zero_w);
    }
    if !m.is_symmetric() {
        let w = (0..n)
            .flat_map(|a| { let sc = &scalars; sc.iter().flat_map(move |&s| sc.iter().map(move |&t| (a, s, t))) })
            .find(|&(a, s, t)| m.act(m.lact(s, a), t) != m.lact(s, m.act(a, t)))
            .map(|(a, s, t)| format!("({}·{})·{}", s_l(s), l(a), s_l(t)));
        r.push("bimodule compatibility", w);
    }
    r
}

/// Direct sum with its injections and projections.
pub fn direct_sum(ms: &[Arc<FiniteModule>]) -> Result<(Arc<FiniteModule>, Vec<super::TableMap>, Vec<super::TableMap>)> {
    let base = match ms.first() {
        Some(m) => m.base.clone(),
        None => return Err(Error::Unsupported("direct sum of an empty list needs a base; use zero_module".into())),
    };
    if let Some(m) = ms.iter().find(|m| m.base != base) {
        return Err(Error::BaseMismatch(format!("{} is over {}, expected {}", m.name, m.base, base)));
    }
    let sizes: Vec<usize> = ms.iter().map(|m| m.size()).collect();
    let total: usize = sizes.iter().product();
    if total > 1 << 20 {
        return Err(Error::Unsupported("direct sum too large to tabulate".into()));
    }
    let coords = |x: usize| -> Vec<usize> {
        let mut v = Vec::with_capacity(ms.len());
        let mut x = x;
        for &s in &sizes {
            v.push(x % s);
            x /= s;
        }
        v
    };
    let encode = |v: &[usize]| -> usize { v.iter().zip(&sizes).rev().fold(0, |acc, (&c, &s)| acc * s + c) };
    let labels = (0..total)
        .map(|x| {
            let c = coords(x);
            format!("({})", c.iter().zip(ms).map(|(&i, m)| m.label(i).to_string()).collect::<Vec<_>>().join(","))
        })
        .collect();
    let symmetric = ms.iter().all(|m| m.is_symmetric());
    let lact = |s: Scalar, x: usize| {
        encode(&coords(x).iter().zip(ms).map(|(&c, m)| m.lact(s, c)).collect::<Vec<_>>())
    };
    let sum = FiniteModule::from_fns(
        &base,
        ms.iter().map(|m| m.name.clone()).collect::<Vec<_>>().join("⊕"),
        labels,
        |a, b| encode(&coords(a).iter().zip(coords(b)).zip(ms).map(|((&x, y), m)| m.add(x, y)).collect::<Vec<_>>()),
        |x, s| encode(&coords(x).iter().zip(ms).map(|(&c, m)| m.act(c, s)).collect::<Vec<_>>()),
        if symmetric { None } else { Some(&lact) },
    );
    let sum = Arc::new(sum);
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let images = (0..m.size())
            .map(|e| {
                let mut v = vec![0; ms.len()];
                v[i] = e;
                encode(&v)
            })
            .collect();
        inj.push(super::TableMap::new(m.clone(), sum.clone(), images)?);
        let images = (0..total).map(|x| coords(x)[i]).collect();
        proj.push(super::TableMap::new(sum.clone(), m.clone(), images)?);
    }
    Ok((sum, inj, proj))
}
