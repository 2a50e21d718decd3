//! Linear maps between presented modules, stored by their values on generators.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Budget, Error, Result};
use crate::finite::TableMap;
use crate::module::{frac, CompElem, Component, Elem, Enumerated, Module, Q};
use crate::semiring::Scalar;

/// Images of one source component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    /// Image of each generator.
    Gens(Vec<Elem>),
    /// For a ℚ/ℤ source: q ↦ k_j·q in each target component j.
    Q(Vec<i64>),
}

#[derive(Debug, Clone)]
pub struct LinearMap {
    source: Module,
    target: Module,
    cols: Vec<Column>,
}

const PROBES: [i64; 2] = [1_000_000_007, 998_244_353];

fn scale_q(k: i64, q: Q) -> Q {
    let d = *q.denom();
    let k = k.rem_euclid(d);
    frac(Q::new(((k as i128 * *q.numer() as i128) % d as i128) as i64, d))
}

impl LinearMap {
    /// Builds a map from generator images, checking that relations and actions are respected.
    pub fn new(source: Module, target: Module, cols: Vec<Column>) -> Result<LinearMap> {
        if source.base() != target.base() {
            return Err(Error::BaseMismatch(format!("{} → {}", source.name(), target.name())));
        }
        if cols.len() != source.comps().len() {
            return Err(Error::Format(format!("map out of {} needs {} columns", source.name(), source.comps().len())));
        }
        for (i, (c, col)) in source.comps().iter().zip(&cols).enumerate() {
            match (c, col) {
                (Component::P(p), Column::Gens(imgs)) => {
                    if imgs.len() != p.nvars() {
                        return Err(Error::Format(format!("component {i} of {} has {} generators", source.name(), p.nvars())));
                    }
                    for e in imgs {
                        check_shape(&target, e)?;
                    }
                }
                (Component::QmodZ, Column::Q(ks)) => {
                    if ks.len() != target.comps().len() {
                        return Err(Error::Format("ℚ/ℤ column has the wrong length".into()));
                    }
                    if ks.iter().zip(target.comps()).any(|(&k, t)| k != 0 && !matches!(t, Component::QmodZ)) {
                        return Err(Error::NotLinear("ℚ/ℤ maps nontrivially only into ℚ/ℤ atoms".into()));
                    }
                }
                _ => return Err(Error::Format(format!("column {i} does not match the component kind"))),
            }
        }
        let f = LinearMap { source, target, cols };
        if let Some(w) = f.linearity_violation() {
            return Err(Error::NotLinear(w));
        }
        Ok(f)
    }

    /// Builds a map from an element function, evaluated on generators and on ℚ/ℤ probes.
    pub fn from_fn<F: Fn(&Elem) -> Result<Elem>>(source: &Module, target: &Module, f: F) -> Result<LinearMap> {
        let mut cols = Vec::with_capacity(source.comps().len());
        for (i, c) in source.comps().iter().enumerate() {
            match c {
                Component::P(p) => {
                    let imgs = (0..p.nvars()).map(|g| f(&source.unit(i, g))).collect::<Result<Vec<_>>>()?;
                    cols.push(Column::Gens(imgs));
                }
                Component::QmodZ => {
                    let mut found: Option<Vec<i64>> = None;
                    for d in PROBES {
                        let img = f(&source.embed(i, CompElem::Q(Q::new(1, d))))?;
                        check_shape(target, &img)?;
                        let mut ks = Vec::new();
                        for (t, x) in target.comps().iter().zip(&img.0) {
                            match (t, x) {
                                (Component::QmodZ, CompElem::Q(q)) => {
                                    let r = (q * Q::from_integer(d)).to_integer();
                                    ks.push(if r > d / 2 { r - d } else { r });
                                }
                                (_, x) if x.is_zero() => ks.push(0),
                                _ => return Err(Error::NotLinear("ℚ/ℤ sent into a finitely generated atom".into())),
                            }
                        }
                        match &found {
                            None => found = Some(ks),
                            Some(prev) if *prev == ks => {}
                            Some(_) => return Err(Error::Internal("ℚ/ℤ image is not a fixed multiple".into())),
                        }
                    }
                    cols.push(Column::Q(found.expect("probed")));
                }
            }
        }
        LinearMap::new(source.clone(), target.clone(), cols)
    }

    pub fn identity(m: &Module) -> LinearMap {
        LinearMap::from_fn(m, m, |e| Ok(e.clone())).expect("identity is linear")
    }

    pub fn zero(source: &Module, target: &Module) -> LinearMap {
        LinearMap::from_fn(source, target, |_| Ok(target.zero())).expect("zero is linear")
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn cols(&self) -> &[Column] {
        &self.cols
    }

    pub fn with_target_name(mut self, name: &str) -> LinearMap {
        self.target = self.target.with_name(name);
        self
    }

    pub fn apply(&self, e: &Elem) -> Elem {
        let t = &self.target;
        let mut raw: Vec<CompElem> = t.zero().0;
        for ((col, x), _) in self.cols.iter().zip(&e.0).zip(self.source.comps()) {
            match (col, x) {
                (Column::Gens(imgs), CompElem::P(v)) => {
                    for (g, &c) in v.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for (acc, y) in raw.iter_mut().zip(&imgs[g].0) {
                            match (acc, y) {
                                (CompElem::P(a), CompElem::P(b)) => {
                                    for (ai, bi) in a.iter_mut().zip(b) {
                                        *ai += c * bi;
                                    }
                                }
                                (CompElem::Q(a), CompElem::Q(b)) => *a = frac(*a + scale_q(c as i64, *b)),
                                _ => unreachable!("shape checked"),
                            }
                        }
                    }
                }
                (Column::Q(ks), CompElem::Q(q)) => {
                    for (acc, &k) in raw.iter_mut().zip(ks) {
                        if k != 0 {
                            if let CompElem::Q(a) = acc {
                                *a = frac(*a + scale_q(k, *q));
                            }
                        }
                    }
                }
                _ => panic!("element does not match {}", self.source.name()),
            }
        }
        Elem(
            raw.into_iter()
                .zip(t.comps())
                .map(|(x, c)| match (x, c) {
                    (CompElem::P(v), Component::P(p)) => CompElem::P(p.normalize(v)),
                    (x, _) => x,
                })
                .collect(),
        )
    }

    /// Witness of a relation or action the generator images fail to respect.
    pub fn linearity_violation(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        for (i, c) in s.comps().iter().enumerate() {
            let Component::P(p) = c else { continue };
            for r in p.rs.rules() {
                let img = |v: &[u64]| self.apply(&s.embed(i, CompElem::P(v.to_vec())));
                let lhs_raw = img(&r.lhs);
                let rhs_raw = img(&r.rhs);
                if lhs_raw != rhs_raw {
                    return Some(format!(
                        "relation {} = {} of {} maps to {} ≠ {}",
                        p.name_of(&r.lhs),
                        p.name_of(&r.rhs),
                        p.label,
                        t.label(&lhs_raw),
                        t.label(&rhs_raw)
                    ));
                }
            }
        }
        if let Some(scalars) = s.base().elements() {
            let both_sides = !(s.is_symmetric() && t.is_symmetric());
            for (i, g) in s.generators() {
                let u = s.unit(i, g);
                let fu = self.apply(&u);
                for &a in &scalars {
                    if self.apply(&s.act(&u, a)) != t.act(&fu, a) {
                        return Some(format!("f({}·{}) ≠ f({})·{}", s.label(&u), s.base().label(a), s.label(&u), s.base().label(a)));
                    }
                    if both_sides && self.apply(&s.lact(a, &u)) != t.lact(a, &fu) {
                        return Some(format!("f({}·{}) ≠ {}·f({})", s.base().label(a), s.label(&u), s.base().label(a), s.label(&u)));
                    }
                }
            }
        }
        None
    }

    /// self ∘ before.
    pub fn compose(&self, before: &LinearMap) -> Result<LinearMap> {
        if !before.target.same_as(&self.source) {
            return Err(Error::NotComposable(format!("{} does not feed {}", before.target.name(), self.source.name())));
        }
        let cols = before
            .cols
            .iter()
            .map(|col| match col {
                Column::Gens(imgs) => Column::Gens(imgs.iter().map(|e| self.apply(e)).collect()),
                Column::Q(ks) => {
                    let mut out = vec![0i64; self.target.comps().len()];
                    for (j, &k) in ks.iter().enumerate() {
                        if k == 0 {
                            continue;
                        }
                        if let Column::Q(inner) = &self.cols[j] {
                            for (o, &l) in out.iter_mut().zip(inner) {
                                *o += k * l;
                            }
                        }
                    }
                    Column::Q(out)
                }
            })
            .collect();
        Ok(LinearMap { source: before.source.clone(), target: self.target.clone(), cols })
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &LinearMap) -> LinearMap {
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| match (a, b) {
                (Column::Gens(x), Column::Gens(y)) => {
                    Column::Gens(x.iter().zip(y).map(|(p, q)| self.target.add(p, q)).collect())
                }
                (Column::Q(x), Column::Q(y)) => Column::Q(x.iter().zip(y).map(|(p, q)| p + q).collect()),
                _ => unreachable!("same source"),
            })
            .collect();
        LinearMap { source: self.source.clone(), target: self.target.clone(), cols }
    }

    /// None when the maps agree on every generator; otherwise a witness.
    pub fn differs_from(&self, other: &LinearMap) -> Option<String> {
        for (i, (a, b)) in self.cols.iter().zip(&other.cols).enumerate() {
            match (a, b) {
                (Column::Gens(x), Column::Gens(y)) => {
                    for (g, (p, q)) in x.iter().zip(y).enumerate() {
                        if p != q {
                            return Some(format!(
                                "at {}: {} vs {}",
                                self.source.generator_name(i, g),
                                self.target.label(p),
                                other.target.label(q)
                            ));
                        }
                    }
                }
                (Column::Q(x), Column::Q(y)) => {
                    if x != y {
                        return Some(format!("on the ℚ/ℤ atom {i}: scales {x:?} vs {y:?}"));
                    }
                }
                _ => return Some(format!("column {i} differs in kind")),
            }
        }
        None
    }

    pub fn equals(&self, other: &LinearMap) -> bool {
        self.differs_from(other).is_none()
    }

    /// Two distinct elements with the same image, by enumerating a finite source.
    pub fn injectivity_witness(&self, budget: Budget) -> Result<Option<(Elem, Elem)>> {
        let mut seen: HashMap<Elem, Elem> = HashMap::new();
        for e in self.source.enumerate(budget)? {
            let img = self.apply(&e);
            if let Some(prev) = seen.get(&img) {
                return Ok(Some((prev.clone(), e)));
            }
            seen.insert(img, e);
        }
        Ok(None)
    }

    pub fn to_table(&self, src: &Enumerated, tgt: &Enumerated) -> Result<TableMap> {
        let images = src.elems.iter().map(|e| tgt.index_of(&self.apply(e))).collect();
        TableMap::new_unchecked(src.table.clone(), tgt.table.clone(), images)
    }

    /// The map of presented modules agreeing with a table map on enumerated elements.
    pub fn from_table(src: &Module, src_elems: &[Elem], tgt: &Module, tgt_elems: &[Elem], f: &TableMap) -> Result<LinearMap> {
        let index: HashMap<&Elem, usize> = src_elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        LinearMap::from_fn(src, tgt, |e| {
            let i = index.get(e).ok_or_else(|| Error::Internal("element outside the enumeration".into()))?;
            Ok(tgt_elems[f.apply(*i)].clone())
        })
    }

    pub fn scalar_value(&self, e: &Elem) -> Option<Scalar> {
        self.target.as_scalar(&self.apply(e))
    }
}

/// Every linear map between two finite modules.
pub fn linear_maps(source: &Module, target: &Module, budget: Budget) -> Result<Vec<LinearMap>> {
    let s = source.to_finite(budget)?;
    let t = target.to_finite(budget)?;
    let homs = crate::finite::hom_enumerate(&s.table, &t.table, budget)?;
    homs.maps.iter().map(|f| LinearMap::from_table(source, &s.elems, target, &t.elems, f)).collect()
}

fn check_shape(m: &Module, e: &Elem) -> Result<()> {
    let ok = e.0.len() == m.comps().len()
        && e.0.iter().zip(m.comps()).all(|(x, c)| match (x, c) {
            (CompElem::P(v), Component::P(p)) => v.len() == p.nvars(),
            (CompElem::Q(_), Component::QmodZ) => true,
            _ => false,
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Format(format!("element does not belong to {}", m.name())))
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}:", self.source.name(), self.target.name())?;
        for (i, col) in self.cols.iter().enumerate() {
            match col {
                Column::Gens(imgs) => {
                    for (g, e) in imgs.iter().enumerate() {
                        write!(f, " {} ↦ {};", self.source.generator_name(i, g), self.target.label(e))?;
                    }
                }
                Column::Q(ks) => write!(f, " q ↦ {ks:?}·q;")?,
            }
        }
        Ok(())
    }
}
