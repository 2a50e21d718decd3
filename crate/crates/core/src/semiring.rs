//! Finite (tabled) semirings, the effective semiring NAT, and semiring morphisms.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::{Flag, ValidationReport};

/// Element of a semiring: an index into the element list when finite, the integer itself for NAT.
pub type Scalar = u64;

/// Default number of sampled triples for axiom checks on NAT.
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Bool,
    Zmod(u64),
    NatCap(u64),
    TropCap(u64),
    Ideals(u64),
    Nat,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Bool => write!(f, "BOOL"),
            Builtin::Zmod(n) => write!(f, "ZMOD({n})"),
            Builtin::NatCap(k) => write!(f, "NATCAP({k})"),
            Builtin::TropCap(k) => write!(f, "TROPCAP({k})"),
            Builtin::Ideals(n) => write!(f, "IDEALS({n})"),
            Builtin::Nat => write!(f, "NAT"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts `BOOL`, `NAT`, `ZMOD(4)` and `ZMOD 4` style tags.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().map(|c| if c == '(' || c == ')' { ' ' } else { c }).collect();
        let mut parts = cleaned.split_whitespace();
        let tag = parts.next().unwrap_or("").to_ascii_uppercase();
        let arg = parts.next();
        if parts.next().is_some() {
            return Err(Error::Format(format!("unknown builtin semiring `{s}`")));
        }
        let num = |a: Option<&str>| -> Result<u64> {
            a.ok_or_else(|| Error::Format(format!("builtin `{tag}` needs a parameter")))?
                .parse::<u64>()
                .map_err(|_| Error::Format(format!("bad parameter in `{s}`")))
        };
        match (tag.as_str(), arg) {
            ("BOOL", None) => Ok(Builtin::Bool),
            ("NAT", None) => Ok(Builtin::Nat),
            ("ZMOD", a) => Ok(Builtin::Zmod(num(a)?)),
            ("NATCAP", a) => Ok(Builtin::NatCap(num(a)?)),
            ("TROPCAP", a) => Ok(Builtin::TropCap(num(a)?)),
            ("IDEALS", a) => Ok(Builtin::Ideals(num(a)?)),
            _ => Err(Error::Format(format!("unknown builtin semiring `{s}`"))),
        }
    }
}

/// Raw operation tables, as supplied by a user before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiringTables {
    pub name: String,
    pub elements: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralPredicates {
    pub commutative: Flag,
    pub cancellative: Flag,
    pub additively_idempotent: Flag,
    pub sampled: bool,
}

#[derive(Debug)]
pub struct FiniteSemiring {
    tables: SemiringTables,
    builtin: Option<Builtin>,
    predicates: StructuralPredicates,
}

#[derive(Debug, Clone)]
pub enum Semiring {
    Finite(Arc<FiniteSemiring>),
    Nat,
}

impl PartialEq for Semiring {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Semiring::Nat, Semiring::Nat) => true,
            (Semiring::Finite(a), Semiring::Finite(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.tables.elements == b.tables.elements
                        && a.tables.add == b.tables.add
                        && a.tables.mul == b.tables.mul
                        && a.tables.zero == b.tables.zero
                        && a.tables.one == b.tables.one)
            }
            _ => false,
        }
    }
}

impl Eq for Semiring {}

fn table_from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect()
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

impl Semiring {
    pub fn builtin(spec: Builtin) -> Result<Semiring> {
        let tables = match spec {
            Builtin::Nat => return Ok(Semiring::Nat),
            Builtin::Bool => SemiringTables {
                name: "BOOL".into(),
                elements: vec!["0".into(), "1".into()],
                add: vec![vec![0, 1], vec![1, 1]],
                mul: vec![vec![0, 0], vec![0, 1]],
                zero: 0,
                one: 1,
            },
            Builtin::Zmod(n) => {
                if n < 2 {
                    return Err(Error::Parameter(format!("ZMOD needs n ≥ 2, got {n}")));
                }
                let n = n as usize;
                SemiringTables {
                    name: format!("ZMOD({n})"),
                    elements: (0..n).map(|i| i.to_string()).collect(),
                    add: table_from_fn(n, |a, b| (a + b) % n),
                    mul: table_from_fn(n, |a, b| (a * b) % n),
                    zero: 0,
                    one: 1,
                }
            }
            Builtin::NatCap(k) => {
                if k < 1 {
                    return Err(Error::Parameter(format!("NATCAP needs k ≥ 1, got {k}")));
                }
                let k = k as usize;
                SemiringTables {
                    name: format!("NATCAP({k})"),
                    elements: (0..=k).map(|i| i.to_string()).collect(),
                    add: table_from_fn(k + 1, |a, b| (a + b).min(k)),
                    mul: table_from_fn(k + 1, |a, b| (a * b).min(k)),
                    zero: 0,
                    one: 1,
                }
            }
            Builtin::TropCap(k) => {
                if k < 1 {
                    return Err(Error::Parameter(format!("TROPCAP needs k ≥ 1, got {k}")));
                }
                // Indices 0..=k are the numbers, index k+1 is ∞.
                let k = k as usize;
                let inf = k + 1;
                let mut elements: Vec<String> = (0..=k).map(|i| i.to_string()).collect();
                elements.push("inf".into());
                SemiringTables {
                    name: format!("TROPCAP({k})"),
                    elements,
                    add: table_from_fn(k + 2, |a, b| a.min(b)),
                    mul: table_from_fn(k + 2, |a, b| if a == inf || b == inf { inf } else { (a + b).min(k) }),
                    zero: inf,
                    one: 0,
                }
            }
            Builtin::Ideals(n) => {
                if n < 2 {
                    return Err(Error::Parameter(format!("IDEALS needs n ≥ 2, got {n}")));
                }
                // The ideal dℤ/nℤ is indexed by the divisor d; d = n is the zero ideal.
                let mut ds = divisors(n);
                ds.reverse();
                let idx = |d: u64| ds.iter().position(|&x| x == d).expect("divisor");
                let m = ds.len();
                SemiringTables {
                    name: format!("IDEALS({n})"),
                    elements: ds.iter().map(|&d| if d == n { "(0)".to_string() } else { format!("({d})") }).collect(),
                    add: table_from_fn(m, |a, b| idx(ds[a].gcd(&ds[b]))),
                    mul: table_from_fn(m, |a, b| idx(ds[a].lcm(&ds[b]))),
                    zero: 0,
                    one: m - 1,
                }
            }
        };
        let mut s = Semiring::from_tables(tables)?;
        if let Semiring::Finite(f) = &mut s {
            Arc::get_mut(f).expect("fresh").builtin = Some(spec);
        }
        Ok(s)
    }

    pub fn bool() -> Semiring {
        Semiring::builtin(Builtin::Bool).expect("BOOL")
    }

    pub fn zmod(n: u64) -> Semiring {
        Semiring::builtin(Builtin::Zmod(n)).expect("ZMOD")
    }

    /// Validates tables and axioms; fails with the first violated axiom.
    pub fn from_tables(tables: SemiringTables) -> Result<Semiring> {
        let report = check_semiring_axioms(&tables)?;
        if let Some(c) = report.first_failure() {
            return Err(Error::Hypothesis(format!(
                "{} is not a semiring: {} fails at {}",
                tables.name,
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        let predicates = finite_predicates(&tables);
        Ok(Semiring::Finite(Arc::new(FiniteSemiring { tables, builtin: None, predicates })))
    }

    /// Componentwise product semiring.
    pub fn product(a: &Semiring, b: &Semiring) -> Result<Semiring> {
        let (fa, fb) = match (a, b) {
            (Semiring::Finite(x), Semiring::Finite(y)) => (x, y),
            _ => return Err(Error::Unsupported("product of infinite semirings".into())),
        };
        let nb = fb.tables.elements.len();
        let n = fa.tables.elements.len() * nb;
        let pair = |i: usize| (i / nb, i % nb);
        let elements = (0..n)
            .map(|i| {
                let (x, y) = pair(i);
                format!("({},{})", fa.tables.elements[x], fb.tables.elements[y])
            })
            .collect();
        let op = |ta: &Vec<Vec<usize>>, tb: &Vec<Vec<usize>>| {
            table_from_fn(n, |i, j| {
                let (x1, y1) = pair(i);
                let (x2, y2) = pair(j);
                ta[x1][x2] * nb + tb[y1][y2]
            })
        };
        Semiring::from_tables(SemiringTables {
            name: format!("{}×{}", a.name(), b.name()),
            elements,
            add: op(&fa.tables.add, &fb.tables.add),
            mul: op(&fa.tables.mul, &fb.tables.mul),
            zero: fa.tables.zero * nb + fb.tables.zero,
            one: fa.tables.one * nb + fb.tables.one,
        })
    }

    pub fn name(&self) -> String {
        match self {
            Semiring::Nat => "NAT".into(),
            Semiring::Finite(f) => f.tables.name.clone(),
        }
    }

    pub fn builtin_tag(&self) -> Option<Builtin> {
        match self {
            Semiring::Nat => Some(Builtin::Nat),
            Semiring::Finite(f) => f.builtin,
        }
    }

    pub fn tables(&self) -> Option<&SemiringTables> {
        match self {
            Semiring::Nat => None,
            Semiring::Finite(f) => Some(&f.tables),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Semiring::Finite(_))
    }

    pub fn size(&self) -> Option<usize> {
        self.tables().map(|t| t.elements.len())
    }

    /// All elements of a finite semiring, in index order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.size().map(|n| (0..n as Scalar).collect())
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Semiring::Nat => 0,
            Semiring::Finite(f) => f.tables.zero as Scalar,
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Semiring::Nat => 1,
            Semiring::Finite(f) => f.tables.one as Scalar,
        }
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            Semiring::Nat => a.checked_add(b).expect("NAT overflow"),
            Semiring::Finite(f) => f.tables.add[a as usize][b as usize] as Scalar,
        }
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            Semiring::Nat => a.checked_mul(b).expect("NAT overflow"),
            Semiring::Finite(f) => f.tables.mul[a as usize][b as usize] as Scalar,
        }
    }

    /// The k-fold sum a + ... + a.
    pub fn nat_mul(&self, k: u64, a: Scalar) -> Scalar {
        match self {
            Semiring::Nat => k.checked_mul(a).expect("NAT overflow"),
            Semiring::Finite(_) => {
                let (mut acc, mut base, mut k) = (self.zero(), a, k);
                while k > 0 {
                    if k & 1 == 1 {
                        acc = self.add(acc, base);
                    }
                    base = self.add(base, base);
                    k >>= 1;
                }
                acc
            }
        }
    }

    /// The image of the integer k under the unique morphism from NAT.
    pub fn from_nat(&self, k: u64) -> Scalar {
        self.nat_mul(k, self.one())
    }

    pub fn sum<I: IntoIterator<Item = Scalar>>(&self, it: I) -> Scalar {
        it.into_iter().fold(self.zero(), |a, b| self.add(a, b))
    }

    pub fn label(&self, s: Scalar) -> String {
        match self {
            Semiring::Nat => s.to_string(),
            Semiring::Finite(f) => f.tables.elements[s as usize].clone(),
        }
    }

    pub fn parse_label(&self, text: &str) -> Option<Scalar> {
        match self {
            Semiring::Nat => text.trim().parse().ok(),
            Semiring::Finite(f) => f.tables.elements.iter().position(|e| e == text).map(|i| i as Scalar),
        }
    }

    pub fn contains(&self, s: Scalar) -> bool {
        match self.size() {
            None => true,
            Some(n) => (s as usize) < n,
        }
    }

    pub fn predicates(&self) -> StructuralPredicates {
        match self {
            Semiring::Finite(f) => f.predicates.clone(),
            Semiring::Nat => nat_predicates(DEFAULT_SAMPLES, 0),
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self {
            Semiring::Nat => true,
            Semiring::Finite(f) => f.predicates.commutative.holds,
        }
    }

    /// A generating set of the additive monoid, irreducible elements first.
    pub fn additive_generators(&self) -> Vec<Scalar> {
        match self {
            Semiring::Nat => vec![1],
            Semiring::Finite(f) => {
                let t = &f.tables;
                monoid_generators(t.elements.len(), t.zero, |a, b| t.add[a][b])
                    .into_iter()
                    .map(|g| g as Scalar)
                    .collect()
            }
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Deterministic generating set of a finite commutative monoid.
pub(crate) fn monoid_generators(n: usize, zero: usize, add: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let reducible = |x: usize| {
        (0..n).any(|a| a != zero && a != x && (0..n).any(|b| b != zero && b != x && add(a, b) == x))
    };
    let mut order: Vec<usize> = (0..n).filter(|&x| x != zero).collect();
    order.sort_by_key(|&x| (reducible(x), x));
    let mut gens = Vec::new();
    let mut reached = vec![false; n];
    reached[zero] = true;
    for x in order {
        if reached[x] {
            continue;
        }
        gens.push(x);
        // Close the reached set under adding any generator.
        let mut changed = true;
        while changed {
            changed = false;
            for y in 0..n {
                if !reached[y] {
                    continue;
                }
                for &g in &gens {
                    let z = add(y, g);
                    if !reached[z] {
                        reached[z] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    gens
}

/// Checks every semiring axiom exhaustively, reporting a witness per failed axiom.
pub fn check_semiring_axioms(t: &SemiringTables) -> Result<ValidationReport> {
    let n = t.elements.len();
    if n == 0 {
        return Err(Error::Format(format!("{}: empty carrier", t.name)));
    }
    for (opname, table) in [("add", &t.add), ("mul", &t.mul)] {
        if table.len() != n {
            return Err(Error::Format(format!("{}: {opname} table has {} rows, expected {n}", t.name, table.len())));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "{}: {opname} row {i} has {} entries, expected {n}",
                    t.name,
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Format(format!("{}: {opname} is not closed (entry {bad})", t.name)));
            }
        }
    }
    if t.zero >= n || t.one >= n {
        return Err(Error::Format(format!("{}: zero/one outside carrier", t.name)));
    }
    let e = |i: usize| t.elements[i].as_str();
    let add = |a: usize, b: usize| t.add[a][b];
    let mul = |a: usize, b: usize| t.mul[a][b];
    let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));
    let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
    let w3 = |(a, b, c): (usize, usize, usize)| format!("({}, {}, {})", e(a), e(b), e(c));
    let w2 = |(a, b): (usize, usize)| format!("({}, {})", e(a), e(b));

    let mut r = ValidationReport::new(&t.name);
    r.push("additive associativity", triples().find(|&(a, b, c)| add(add(a, b), c) != add(a, add(b, c))).map(w3));
    r.push("additive commutativity", pairs().find(|&(a, b)| add(a, b) != add(b, a)).map(w2));
    r.push(
        "additive identity",
        (0..n).find(|&a| add(a, t.zero) != a || add(t.zero, a) != a).map(|a| e(a).to_string()),
    );
    r.push("multiplicative associativity", triples().find(|&(a, b, c)| mul(mul(a, b), c) != mul(a, mul(b, c))).map(w3));
    r.push(
        "multiplicative identity",
        (0..n).find(|&a| mul(a, t.one) != a || mul(t.one, a) != a).map(|a| e(a).to_string()),
    );
    r.push(
        "left distributivity",
        triples().find(|&(a, b, c)| mul(a, add(b, c)) != add(mul(a, b), mul(a, c))).map(w3),
    );
    r.push(
        "right distributivity",
        triples().find(|&(a, b, c)| mul(add(a, b), c) != add(mul(a, c), mul(b, c))).map(w3),
    );
    let absorb = (0..n)
        .find(|&a| mul(a, t.zero) != t.zero)
        .map(|a| w2((a, t.zero)))
        .or_else(|| (0..n).find(|&a| mul(t.zero, a) != t.zero).map(|a| w2((t.zero, a))));
    r.push("absorption", absorb);
    r.push("one differs from zero", (t.one == t.zero).then(|| e(t.one).to_string()));
    Ok(r)
}

fn finite_predicates(t: &SemiringTables) -> StructuralPredicates {
    let n = t.elements.len();
    let e = |i: usize| t.elements[i].as_str();
    let commutative = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| t.mul[a][b] != t.mul[b][a])
        .map(|(a, b)| format!("{}·{} ≠ {}·{}", e(a), e(b), e(b), e(a)));
    let cancellative = (0..n)
        .flat_map(|g| (0..n).flat_map(move |x| (0..x).map(move |y| (g, x, y))))
        .find(|&(g, x, y)| t.add[g][x] == t.add[g][y])
        .map(|(g, x, y)| format!("{g}+{x} = {g}+{y} but {x} ≠ {y}", g = e(g), x = e(x), y = e(y)));
    let idempotent = (0..n).find(|&a| t.add[a][a] != a).map(|a| format!("{a}+{a} ≠ {a}", a = e(a)));
    StructuralPredicates {
        commutative: Flag::from_witness(commutative),
        cancellative: Flag::from_witness(cancellative),
        additively_idempotent: Flag::from_witness(idempotent),
        sampled: false,
    }
}

fn sample_values(samples: usize, seed: u64) -> impl Iterator<Item = (u64, u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(move |_| {
        let bound = 10_000u64;
        (rng.gen_range(0..bound), rng.gen_range(0..bound), rng.gen_range(0..bound))
    })
}

fn nat_predicates(samples: usize, seed: u64) -> StructuralPredicates {
    let mut commutative = None;
    let mut cancellative = None;
    let mut idempotent = None;
    for (a, b, c) in sample_values(samples, seed) {
        if commutative.is_none() && a * b != b * a {
            commutative = Some(format!("{a}·{b} ≠ {b}·{a}"));
        }
        if cancellative.is_none() && b != c && a + b == a + c {
            cancellative = Some(format!("{a}+{b} = {a}+{c} but {b} ≠ {c}"));
        }
        if idempotent.is_none() && a + a != a {
            idempotent = Some(format!("{a}+{a} ≠ {a}"));
        }
    }
    StructuralPredicates {
        commutative: Flag::from_witness(commutative),
        cancellative: Flag::from_witness(cancellative),
        additively_idempotent: Flag::from_witness(idempotent),
        sampled: true,
    }
}

/// Structural flags; exhaustive for finite semirings, sampled (and flagged) for NAT.
pub fn structural_predicates(s: &Semiring) -> StructuralPredicates {
    s.predicates()
}

/// Sampled axiom check for the effective semiring NAT.
pub fn check_nat_axioms(samples: usize, seed: u64) -> ValidationReport {
    let s = Semiring::Nat;
    let mut r = ValidationReport::new("NAT");
    r.sampled = true;
    let mut fails: Vec<(&str, String)> = Vec::new();
    for (a, b, c) in sample_values(samples, seed) {
        let w = format!("({a}, {b}, {c})");
        let checks: [(&str, bool); 8] = [
            ("additive associativity", s.add(s.add(a, b), c) == s.add(a, s.add(b, c))),
            ("additive commutativity", s.add(a, b) == s.add(b, a)),
            ("additive identity", s.add(a, 0) == a),
            ("multiplicative associativity", s.mul(s.mul(a, b), c) == s.mul(a, s.mul(b, c))),
            ("multiplicative identity", s.mul(a, 1) == a && s.mul(1, a) == a),
            ("left distributivity", s.mul(a, s.add(b, c)) == s.add(s.mul(a, b), s.mul(a, c))),
            ("right distributivity", s.mul(s.add(a, b), c) == s.add(s.mul(a, c), s.mul(b, c))),
            ("absorption", s.mul(a, 0) == 0 && s.mul(0, a) == 0),
        ];
        for (name, ok) in checks {
            if !ok && !fails.iter().any(|(n, _)| *n == name) {
                fails.push((name, w.clone()));
            }
        }
    }
    for name in [
        "additive associativity",
        "additive commutativity",
        "additive identity",
        "multiplicative associativity",
        "multiplicative identity",
        "left distributivity",
        "right distributivity",
        "absorption",
    ] {
        r.push(name, fails.iter().find(|(n, _)| *n == name).map(|(_, w)| w.clone()));
    }
    r.push("one differs from zero", None);
    r
}

/// A map of semirings; for a NAT source the map is the unique one, k ↦ k·1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiringMorphism {
    source: Semiring,
    target: Semiring,
    map: Vec<Scalar>,
}

impl SemiringMorphism {
    pub fn new(source: Semiring, target: Semiring, map: Vec<Scalar>) -> Result<Self> {
        match source.size() {
            Some(n) if map.len() != n => {
                return Err(Error::Format(format!("morphism table has {} entries, expected {n}", map.len())))
            }
            None if !map.is_empty() => {
                return Err(Error::Format("a morphism out of NAT is determined by 1 ↦ 1; omit the table".into()))
            }
            _ => {}
        }
        if let Some(&bad) = map.iter().find(|&&x| !target.contains(x)) {
            return Err(Error::Format(format!("morphism value {bad} outside target")));
        }
        Ok(SemiringMorphism { source, target, map })
    }

    pub fn identity(s: &Semiring) -> Self {
        let map = s.elements().unwrap_or_default();
        SemiringMorphism { source: s.clone(), target: s.clone(), map }
    }

    pub fn source(&self) -> &Semiring {
        &self.source
    }

    pub fn target(&self) -> &Semiring {
        &self.target
    }

    pub fn apply(&self, s: Scalar) -> Scalar {
        match self.source {
            Semiring::Nat => self.target.from_nat(s),
            Semiring::Finite(_) => self.map[s as usize],
        }
    }

    /// Preservation of +, ·, 0 and 1; exhaustive for finite sources, sampled for NAT.
    pub fn check(&self) -> ValidationReport {
        let mut r = ValidationReport::new(format!("{} → {}", self.source, self.target));
        let pairs: Vec<(Scalar, Scalar)> = match self.source.elements() {
            Some(el) => el.iter().flat_map(|&a| el.iter().map(move |&b| (a, b))).collect(),
            None => {
                r.sampled = true;
                sample_values(DEFAULT_SAMPLES, 7).map(|(a, b, _)| (a % 1000, b % 1000)).collect()
            }
        };
        let (s, t) = (&self.source, &self.target);
        let f = |x| self.apply(x);
        let w = |(a, b): (Scalar, Scalar)| format!("({}, {})", s.label(a), s.label(b));
        r.push("preserves addition", pairs.iter().copied().find(|&(a, b)| f(s.add(a, b)) != t.add(f(a), f(b))).map(w));
        r.push(
            "preserves multiplication",
            pairs.iter().copied().find(|&(a, b)| f(s.mul(a, b)) != t.mul(f(a), f(b))).map(w),
        );
        r.push("preserves zero", (f(s.zero()) != t.zero()).then(|| s.label(s.zero())));
        r.push("preserves one", (f(s.one()) != t.one()).then(|| s.label(s.one())));
        r
    }
}

/// A bijection a → b preserving both operations, zero and one, by backtracking.
pub fn find_semiring_isomorphism(a: &SemiringTables, b: &SemiringTables) -> Option<Vec<usize>> {
    let n = a.elements.len();
    if n != b.elements.len() {
        return None;
    }
    fn consistent(a: &SemiringTables, b: &SemiringTables, f: &[Option<usize>]) -> bool {
        let n = f.len();
        for x in 0..n {
            let Some(fx) = f[x] else { continue };
            for y in 0..n {
                let Some(fy) = f[y] else { continue };
                for (ta, tb) in [(&a.add, &b.add), (&a.mul, &b.mul)] {
                    if let Some(fz) = f[ta[x][y]] {
                        if fz != tb[fx][fy] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    fn rec(i: usize, a: &SemiringTables, b: &SemiringTables, f: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> bool {
        if i == f.len() {
            return true;
        }
        if f[i].is_some() {
            return rec(i + 1, a, b, f, used);
        }
        for y in 0..f.len() {
            if used[y] {
                continue;
            }
            f[i] = Some(y);
            used[y] = true;
            if consistent(a, b, f) && rec(i + 1, a, b, f, used) {
                return true;
            }
            used[y] = false;
        }
        f[i] = None;
        false
    }
    let mut f = vec![None; n];
    let mut used = vec![false; n];
    f[a.zero] = Some(b.zero);
    used[b.zero] = true;
    if a.one != a.zero {
        if used[b.one] {
            return None;
        }
        f[a.one] = Some(b.one);
        used[b.one] = true;
    }
    if !consistent(a, b, &f) || !rec(0, a, b, &mut f, &mut used) {
        return None;
    }
    Some(f.into_iter().map(|x| x.expect("total")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_pass_axioms() {
        for b in [
            Builtin::Bool,
            Builtin::Zmod(2),
            Builtin::Zmod(4),
            Builtin::Zmod(6),
            Builtin::NatCap(1),
            Builtin::NatCap(8),
            Builtin::TropCap(3),
            Builtin::Ideals(4),
            Builtin::Ideals(12),
        ] {
            let s = Semiring::builtin(b).unwrap();
            let r = check_semiring_axioms(s.tables().unwrap()).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert!(check_nat_axioms(DEFAULT_SAMPLES, 1).passed());
    }

    #[test]
    fn parameters_out_of_range() {
        assert!(matches!(Semiring::builtin(Builtin::Zmod(1)), Err(Error::Parameter(_))));
        assert!(matches!(Semiring::builtin(Builtin::NatCap(0)), Err(Error::Parameter(_))));
        assert!(matches!(Semiring::builtin(Builtin::Ideals(1)), Err(Error::Parameter(_))));
    }

    #[test]
    fn builtin_tags_parse() {
        assert_eq!("ZMOD 4".parse::<Builtin>().unwrap(), Builtin::Zmod(4));
        assert_eq!("TROPCAP(3)".parse::<Builtin>().unwrap(), Builtin::TropCap(3));
        assert_eq!("BOOL".parse::<Builtin>().unwrap(), Builtin::Bool);
        assert!("FOO".parse::<Builtin>().is_err());
    }

    #[test]
    fn ideals_of_z4_form_a_chain() {
        let s = Semiring::builtin(Builtin::Ideals(4)).unwrap();
        let t = s.tables().unwrap();
        assert_eq!(t.elements, vec!["(0)", "(2)", "(1)"]);
        let i = |l: &str| s.parse_label(l).unwrap();
        assert_eq!(s.add(i("(2)"), i("(1)")), i("(1)"));
        assert_eq!(s.mul(i("(2)"), i("(1)")), i("(2)"));
        assert_eq!(s.mul(i("(2)"), i("(2)")), i("(2)"));
        assert_eq!(s.zero(), i("(0)"));
    }

    #[test]
    fn swapped_bool_multiplication_fails_absorption() {
        let mut t = Semiring::bool().tables().unwrap().clone();
        t.mul[1][0] = 1;
        let r = check_semiring_axioms(&t).unwrap();
        let c = r.check("absorption").unwrap();
        assert_eq!(c.witness.as_deref(), Some("(1, 0)"));
    }

    #[test]
    fn non_closed_table_is_a_format_error() {
        let mut t = Semiring::bool().tables().unwrap().clone();
        t.add[1][1] = 5;
        assert!(matches!(check_semiring_axioms(&t), Err(Error::Format(_))));
        let mut t = Semiring::bool().tables().unwrap().clone();
        t.mul.pop();
        assert!(matches!(check_semiring_axioms(&t), Err(Error::Format(_))));
    }

    #[test]
    fn structural_flags() {
        let b = structural_predicates(&Semiring::bool());
        assert!(b.commutative.holds && b.additively_idempotent.holds);
        assert_eq!(b.cancellative.witness.as_deref(), Some("1+1 = 1+0 but 1 ≠ 0"));
        for n in 2..7 {
            let z = structural_predicates(&Semiring::zmod(n));
            assert!(z.commutative.holds && z.cancellative.holds && !z.additively_idempotent.holds);
        }
        let t = structural_predicates(&Semiring::builtin(Builtin::TropCap(4)).unwrap());
        assert!(t.additively_idempotent.holds);
        let nat = structural_predicates(&Semiring::Nat);
        assert!(nat.sampled && nat.cancellative.holds && !nat.additively_idempotent.holds);
    }

    #[test]
    fn natcap_one_is_bool() {
        let a = Semiring::builtin(Builtin::NatCap(1)).unwrap();
        assert_eq!(a.tables().unwrap().add, Semiring::bool().tables().unwrap().add);
        assert_eq!(a.tables().unwrap().mul, Semiring::bool().tables().unwrap().mul);
    }

    #[test]
    fn morphisms() {
        let b = Semiring::bool();
        let b2 = Semiring::product(&b, &b).unwrap();
        let diag = SemiringMorphism::new(b.clone(), b2.clone(), vec![0, 3]).unwrap();
        assert!(diag.check().passed());
        let bad = SemiringMorphism::new(b.clone(), b2, vec![0, 1]).unwrap();
        assert!(!bad.check().passed());
        let from_nat = SemiringMorphism::new(Semiring::Nat, Semiring::zmod(3), vec![]).unwrap();
        assert_eq!(from_nat.apply(5), 2);
        assert!(from_nat.check().passed());
    }

    #[test]
    fn additive_generators() {
        assert_eq!(Semiring::zmod(5).additive_generators(), vec![1]);
        let b = Semiring::bool();
        let b2 = Semiring::product(&b, &b).unwrap();
        assert_eq!(b2.additive_generators().len(), 2);
        let trop = Semiring::builtin(Builtin::TropCap(2)).unwrap();
        assert_eq!(trop.additive_generators().len(), 3);
    }
}
