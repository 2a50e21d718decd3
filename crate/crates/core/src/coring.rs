//! Semicorings: a bimodule C with a coassociative, counital comultiplication Δ: C → C⊗C
//! and counit ε: C → A.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::finite::{quotient_by_sub, saturation_tensor, Action, FiniteModule, Sub};
use crate::linear::LinearMap;
use crate::module::{AtomKind, CompElem, Component, Elem, Module};
use crate::report::ValidationReport;
use crate::semiring::{Scalar, Semiring, SemiringMorphism};
use crate::tensor::{associator, left_unitor, right_unitor, tensor, tensor_of_maps, TensorProduct};

#[derive(Debug, Clone)]
pub struct Semicoring {
    pub name: String,
    pub carrier: Module,
    /// C ⊗ C.
    pub cc: TensorProduct,
    pub comult: LinearMap,
    pub counit: LinearMap,
    /// Basis names when the carrier is free.
    pub basis: Option<Vec<String>>,
}

/// A coring on a free module, given by structure constants:
/// Δ(e_i) = Σ delta[i][j][k] e_j⊗e_k and ε(e_i) = eps[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCoringData {
    pub name: String,
    pub base: Semiring,
    pub basis: Vec<String>,
    pub delta: Vec<Vec<Vec<Scalar>>>,
    pub eps: Vec<Scalar>,
}

impl Semicoring {
    /// Builds a coring from the images of the carrier's generators, in `carrier.generators()` order.
    pub fn new(name: impl Into<String>, carrier: Module, delta: Vec<Elem>, eps: Vec<Scalar>) -> Result<Semicoring> {
        if carrier.has_q() {
            return Err(Error::Unsupported("semicoring carriers cannot contain QMODZ".into()));
        }
        let cc = tensor(&carrier, &carrier)?;
        let gens = carrier.generators();
        if delta.len() != gens.len() || eps.len() != gens.len() {
            return Err(Error::Format(format!("{} generators need {} Δ and ε values", carrier.name(), gens.len())));
        }
        let a = Module::base_module(carrier.base())?;
        let mut dcols = Vec::new();
        let mut ecols = Vec::new();
        let mut k = 0;
        for c in carrier.comps() {
            let n = c.presented().expect("no QMODZ").nvars();
            dcols.push(crate::linear::Column::Gens(delta[k..k + n].to_vec()));
            ecols.push(crate::linear::Column::Gens(
                eps[k..k + n]
                    .iter()
                    .map(|&s| a.from_scalar(s).ok_or_else(|| Error::Format(format!("ε value {s} is not a scalar"))))
                    .collect::<Result<Vec<_>>>()?,
            ));
            k += n;
        }
        let comult = LinearMap::new(carrier.clone(), cc.result().clone(), dcols)?;
        let counit = LinearMap::new(carrier.clone(), a, ecols)?;
        Ok(Semicoring { name: name.into(), carrier, cc, comult, counit, basis: None })
    }

    /// Builds Δ and ε from formulas on generators (component, generator index).
    pub fn from_fns<D, E>(name: impl Into<String>, carrier: Module, delta: D, eps: E) -> Result<Semicoring>
    where
        D: Fn(&TensorProduct, usize, usize) -> Result<Elem>,
        E: Fn(usize, usize) -> Result<Scalar>,
    {
        let cc = tensor(&carrier, &carrier)?;
        let gens = carrier.generators();
        let d = gens.iter().map(|&(c, g)| delta(&cc, c, g)).collect::<Result<Vec<_>>>()?;
        let e = gens.iter().map(|&(c, g)| eps(c, g)).collect::<Result<Vec<_>>>()?;
        Semicoring::new(name, carrier, d, e)
    }

    pub fn base(&self) -> &Semiring {
        self.carrier.base()
    }

    pub fn with_basis(mut self, basis: Vec<String>) -> Semicoring {
        self.basis = Some(basis);
        self
    }

    /// Δ(c) as a list of pure tensors.
    pub fn sweedler(&self, c: &Elem) -> Vec<(Elem, Elem)> {
        self.cc.decompose(&self.comult.apply(c))
    }

    pub fn eps(&self, c: &Elem) -> Scalar {
        self.counit.scalar_value(c).expect("counit lands in the base")
    }

    /// Display of a carrier element, as a formal sum over the basis when there is one.
    pub fn show(&self, e: &Elem) -> String {
        let Some(basis) = &self.basis else { return self.carrier.label(e) };
        let base = self.base();
        let mut terms = Vec::new();
        for (i, x) in e.0.iter().enumerate() {
            let s = self.carrier.presented(i).scalar_of(x.vector()).expect("free carrier");
            if s == base.zero() {
                continue;
            }
            if s == base.one() {
                terms.push(basis[i].clone());
            } else {
                terms.push(format!("{}·{}", base.label(s), basis[i]));
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    pub fn show_tensor(&self, t: &Elem) -> String {
        let parts: Vec<String> = self.cc.decompose(t).iter().map(|(x, y)| format!("{}⊗{}", self.show(x), self.show(y))).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn is_finite(&self) -> bool {
        self.carrier.is_finite()
    }
}

impl FreeCoringData {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn build(&self) -> Result<Semicoring> {
        let n = self.rank();
        if self.delta.len() != n || self.delta.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) || self.eps.len() != n {
            return Err(Error::Format(format!("{}: structure constants must be {n}×{n}×{n} and {n}", self.name)));
        }
        let base = &self.base;
        if let Some(&s) = self.delta.iter().flatten().flatten().chain(&self.eps).find(|&&s| !base.contains(s)) {
            return Err(Error::Format(format!("{}: {s} is not an element of {base}", self.name)));
        }
        let carrier = Module::free(base, n)?.with_name(self.name.clone());
        let basis_elem = |i: usize, s: Scalar| carrier.embed(i, CompElem::P(carrier.presented(i).scalar_nf(s).expect("scalar")));
        let gen_scalar = |c: usize, g: usize| match &carrier.presented(c).kind {
            AtomKind::Free { gen_scalars, .. } => gen_scalars[g],
            _ => unreachable!("free carrier"),
        };
        let one = base.one();
        let c = Semicoring::from_fns(
            self.name.clone(),
            carrier.clone(),
            |cc, i, g| {
                let s = gen_scalar(i, g);
                let mut terms = Vec::new();
                for j in 0..n {
                    for k in 0..n {
                        let a = base.mul(self.delta[i][j][k], s);
                        if a != base.zero() {
                            terms.push(cc.pure(&basis_elem(j, one), &basis_elem(k, a)));
                        }
                    }
                }
                Ok(cc.result().sum(&terms))
            },
            |i, g| Ok(base.mul(self.eps[i], gen_scalar(i, g))),
        )?;
        Ok(c.with_basis(self.basis.clone()))
    }

    /// Coassociativity and counit laws read off the structure constants (commutative base).
    pub fn constant_verdict(&self) -> bool {
        let s = &self.base;
        let n = self.rank();
        let d = &self.delta;
        let sum = |it: &mut dyn Iterator<Item = Scalar>| it.fold(s.zero(), |a, b| s.add(a, b));
        let delta_ij = |i: usize, j: usize| if i == j { s.one() } else { s.zero() };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs = sum(&mut (0..n).map(|m| s.mul(d[i][m][l], d[m][j][k])));
                        let rhs = sum(&mut (0..n).map(|m| s.mul(d[i][j][m], d[m][k][l])));
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
            for k in 0..n {
                if sum(&mut (0..n).map(|j| s.mul(self.eps[j], d[i][j][k]))) != delta_ij(i, k) {
                    return false;
                }
                if sum(&mut (0..n).map(|j| s.mul(d[i][k][j], self.eps[j]))) != delta_ij(i, k) {
                    return false;
                }
            }
        }
        true
    }

    /// Every change of a single structure constant to another scalar.
    pub fn single_mutations(&self) -> Vec<(String, FreeCoringData)> {
        let s = self.base.elements().unwrap_or_default();
        let mut out = Vec::new();
        let n = self.rank();
        for i in 0..n {
            for &v in &s {
                if v != self.eps[i] {
                    let mut m = self.clone();
                    m.eps[i] = v;
                    m.name = format!("{} [ε({}) := {}]", self.name, self.basis[i], self.base.label(v));
                    out.push((format!("eps {} {}", self.basis[i], self.base.label(v)), m));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for &v in &s {
                        if v != self.delta[i][j][k] {
                            let mut m = self.clone();
                            m.delta[i][j][k] = v;
                            m.name = format!(
                                "{} [Δ({}) coefficient of {}⊗{} := {}]",
                                self.name,
                                self.basis[i],
                                self.basis[j],
                                self.basis[k],
                                self.base.label(v)
                            );
                            out.push((format!("delta {} {} {} {}", self.basis[i], self.basis[j], self.basis[k], self.base.label(v)), m));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Coassociativity and both counit laws, compared on generators.
pub fn check_semicoring(c: &Semicoring) -> Result<ValidationReport> {
    let mut r = ValidationReport::new(format!("semicoring {}", c.name));
    let id = LinearMap::identity(&c.carrier);
    let a = associator(&c.carrier, &c.carrier, &c.carrier)?;
    let d_c = tensor_of_maps(&c.comult, &id, &a.mn, &a.mn_p)?;
    let c_d = tensor_of_maps(&id, &c.comult, &a.mn, &a.m_np)?;
    let lhs = a.forward.compose(&d_c)?.compose(&c.comult)?;
    let rhs = c_d.compose(&c.comult)?;
    r.push("Δ coassociative", lhs.differs_from(&rhs).map(|w| format!("(Δ⊗C)Δ vs (C⊗Δ)Δ {w}")));
    let (al, theta_l) = left_unitor(&c.carrier)?;
    let e_c = tensor_of_maps(&c.counit, &id, &c.cc, &al)?;
    let left = theta_l.compose(&e_c)?.compose(&c.comult)?;
    r.push("left counit", left.differs_from(&id).map(|w| format!("ϑ(ε⊗C)Δ vs id {w}")));
    let (ar, theta_r) = right_unitor(&c.carrier)?;
    let c_e = tensor_of_maps(&id, &c.counit, &c.cc, &ar)?;
    let right = theta_r.compose(&c_e)?.compose(&c.comult)?;
    r.push("right counit", right.differs_from(&id).map(|w| format!("ϑ(C⊗ε)Δ vs id {w}")));
    Ok(r)
}

/// Δ_C∘f = (f⊗f)∘Δ_D and ε_C∘f = ε_D for f: D → C.
pub fn check_morphism(f: &LinearMap, d: &Semicoring, c: &Semicoring) -> Result<ValidationReport> {
    let mut r = ValidationReport::new(format!("{} → {}", d.name, c.name));
    if !f.source().same_as(&d.carrier) || !f.target().same_as(&c.carrier) {
        return Err(Error::NotComposable("map does not join the coring carriers".into()));
    }
    let ff = tensor_of_maps(f, f, &d.cc, &c.cc)?;
    let lhs = c.comult.compose(f)?;
    let rhs = ff.compose(&d.comult)?;
    r.push("comultiplication square", lhs.differs_from(&rhs));
    r.push("counit triangle", c.counit.compose(f)?.differs_from(&d.counit));
    Ok(r)
}

/// Sweedler's semicoring A ⊗_B A for φ: B → A, with Δ(a⊗a′) = a⊗1⊗a′ and ε(a⊗a′) = aa′.
pub fn sweedler(phi: &SemiringMorphism, budget: Budget) -> Result<Semicoring> {
    let a = phi.target().clone();
    let a_mod = Arc::new(FiniteModule::free(&a, 1)?);
    let scalars = a.elements().ok_or_else(|| Error::Unsupported("Sweedler semicorings need a finite A".into()))?;
    // Element of A as a module over itself, for each scalar.
    let one_idx = a_mod.elements().find(|&i| a_mod.label(i) == a.label(a.one())).expect("one");
    let elem_of: Vec<usize> = scalars.iter().map(|&s| a_mod.act(one_idx, s)).collect();
    let scalar_of = |i: usize| scalars[elem_of.iter().position(|&e| e == i).expect("scalar")];
    let a_b = Arc::new(a_mod.restrict(phi)?);
    let t = saturation_tensor(&a_b, &a_b, budget)?;
    let sum = |d: &mut dyn Iterator<Item = usize>| d.fold(0, |acc, p| t.result.add(acc, p));
    let n = t.result.size();
    let right: Vec<Vec<usize>> = (0..n)
        .map(|e| scalars.iter().map(|&s| sum(&mut t.decompositions[e].iter().map(|&(x, y)| t.pure[x][a_mod.act(y, s)]))).collect())
        .collect();
    let left: Vec<Vec<usize>> = (0..n)
        .map(|e| scalars.iter().map(|&s| sum(&mut t.decompositions[e].iter().map(|&(x, y)| t.pure[a_mod.lact(s, x)][y]))).collect())
        .collect();
    for x in a_mod.elements() {
        for y in a_mod.elements() {
            for (si, &s) in scalars.iter().enumerate() {
                let p = t.pure[x][y];
                if right[p][si] != t.pure[x][a_mod.act(y, s)] || left[p][si] != t.pure[a_mod.lact(s, x)][y] {
                    return Err(Error::Internal("A-actions on A⊗_B A are not well defined".into()));
                }
            }
        }
    }
    let labels = t.result.labels().to_vec();
    let name = format!("{}⊗_{}{}", a.name(), phi.source().name(), a.name());
    let t_a = FiniteModule::new(a.clone(), name.clone(), labels, t.result.add_table().to_vec(), Action::Table(right), Some(Action::Table(left)))?;
    let (carrier, elems) = Module::from_finite(&t_a)?;
    let index: HashMap<Elem, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let pure_elem = |x: usize, y: usize| elems[t.pure[x][y]].clone();
    Semicoring::from_fns(
        format!("sweedler({name})"),
        carrier.clone(),
        |cc, c, g| {
            let e = index[&carrier.unit(c, g)];
            let terms: Vec<Elem> =
                t.decompositions[e].iter().map(|&(x, y)| cc.pure(&pure_elem(x, one_idx), &pure_elem(one_idx, y))).collect();
            Ok(cc.result().sum(&terms))
        },
        |c, g| {
            let e = index[&carrier.unit(c, g)];
            Ok(t.decompositions[e].iter().fold(a.zero(), |acc, &(x, y)| a.add(acc, a.mul(scalar_of(x), scalar_of(y)))))
        },
    )
}

/// A ⊕ M with Δ(a, m) = (a,0)⊗(1,0) + (1,0)⊗(0,m) + (0,m)⊗(1,0) and ε(a, m) = a.
pub fn trivial_coextension(m: &Module) -> Result<Semicoring> {
    let base = m.base().clone();
    let a = Module::base_module(&base)?;
    let carrier = Module::direct_sum(&[a.clone(), m.clone()])?.with_name(format!("{}⊕{}", base.name(), m.name()));
    let one = carrier.embed(0, a.from_scalar(base.one()).expect("one").0[0].clone());
    let gen_scalar = |g: usize| match &carrier.presented(0).kind {
        AtomKind::Free { gen_scalars, .. } => gen_scalars[g],
        _ => unreachable!("base atom"),
    };
    Semicoring::from_fns(
        format!("coext({}, {})", base.name(), m.name()),
        carrier.clone(),
        |cc, c, g| {
            let u = carrier.unit(c, g);
            if c == 0 {
                Ok(cc.pure(&u, &one))
            } else {
                Ok(cc.result().add(&cc.pure(&one, &u), &cc.pure(&u, &one)))
            }
        },
        |c, g| Ok(if c == 0 { gen_scalar(g) } else { base.zero() }),
    )
}

/// The free module on `names` with Δ(x) = x⊗x and ε(x) = 1.
pub fn grouplike_data(base: &Semiring, names: &[&str]) -> Result<FreeCoringData> {
    if !base.is_commutative() {
        return Err(Error::Unsupported(format!("grouplike coalgebras need a commutative base, {base} is not")));
    }
    let n = names.len();
    let mut delta = vec![vec![vec![base.zero(); n]; n]; n];
    for (i, row) in delta.iter_mut().enumerate() {
        row[i][i] = base.one();
    }
    Ok(FreeCoringData {
        name: format!("grouplike({}, {{{}}})", base.name(), names.join(",")),
        base: base.clone(),
        basis: names.iter().map(|s| s.to_string()).collect(),
        delta,
        eps: vec![base.one(); n],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyVariant {
    GrouplikePowers,
    Binomial,
}

fn power_name(i: usize) -> String {
    format!("x^{i}")
}

/// Polynomials of degree ≤ d, either with grouplike powers or with the binomial comultiplication
/// Δ(x^i) = Σ_j (i over j) x^j ⊗ x^(i−j).
pub fn polynomial_data(base: &Semiring, d: usize, variant: PolyVariant) -> Result<FreeCoringData> {
    if !base.is_finite() {
        return Err(Error::Unsupported("polynomial coalgebras are tabulated over finite bases".into()));
    }
    let names: Vec<String> = (0..=d).map(power_name).collect();
    let n = d + 1;
    let mut delta = vec![vec![vec![base.zero(); n]; n]; n];
    let mut eps = vec![base.zero(); n];
    match variant {
        PolyVariant::GrouplikePowers => {
            for i in 0..n {
                delta[i][i][i] = base.one();
                eps[i] = base.one();
            }
        }
        PolyVariant::Binomial => {
            for i in 0..n {
                let mut binom: u64 = 1;
                for j in 0..=i {
                    // Sums of 1 in the base, so characteristic effects are native.
                    delta[i][j][i - j] = base.from_nat(binom);
                    binom = binom * (i - j) as u64 / (j + 1) as u64;
                }
            }
            eps[0] = base.one();
        }
    }
    let tag = if variant == PolyVariant::GrouplikePowers { "poly1" } else { "poly2" };
    Ok(FreeCoringData { name: format!("{tag}({}, {d})", base.name()), base: base.clone(), basis: names, delta, eps })
}

fn words(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| ["x", "y"].map(|c| format!("{w}{c}"))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Boolean word coalgebras on words over {x, y} of length ≤ L: 1 grouplike, 2 deconcatenation,
/// 3 the coproduct multiplicative on letters with Δ(x) = 1⊗x + x⊗1.
pub fn word_data(max_len: usize, variant: u8) -> Result<FreeCoringData> {
    let b = Semiring::bool();
    let ws = words(max_len);
    let n = ws.len();
    let idx: HashMap<&str, usize> = ws.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    let mut delta = vec![vec![vec![0; n]; n]; n];
    let mut eps = vec![0; n];
    for (i, w) in ws.iter().enumerate() {
        match variant {
            1 => {
                delta[i][i][i] = 1;
                eps[i] = 1;
            }
            2 => {
                for cut in 0..=w.len() {
                    delta[i][idx[&w[..cut]]][idx[&w[cut..]]] = 1;
                }
                eps[i] = u64::from(w.is_empty());
            }
            3 => {
                let chars: Vec<char> = w.chars().collect();
                for mask in 0..(1u32 << chars.len()) {
                    let (l, r): (String, String) = (
                        chars.iter().enumerate().filter(|(p, _)| mask >> p & 1 == 1).map(|(_, c)| c).collect(),
                        chars.iter().enumerate().filter(|(p, _)| mask >> p & 1 == 0).map(|(_, c)| c).collect(),
                    );
                    delta[i][idx[l.as_str()]][idx[r.as_str()]] = 1;
                }
                eps[i] = u64::from(w.is_empty());
            }
            v => return Err(Error::Parameter(format!("word coalgebra variant {v} is not 1, 2 or 3"))),
        }
    }
    Ok(FreeCoringData {
        name: format!("words{variant}({max_len})"),
        base: b,
        basis: ws.into_iter().map(|w| if w.is_empty() { "1".to_string() } else { w }).collect(),
        delta,
        eps,
    })
}

/// NAT ⊕ CYCLIC(n) with Δ(l, m̄) = (l,0)⊗(1,0) + (1,0)⊗(0,m̄) + (0,m̄)⊗(1,0) + (0,m̄)⊗(0,1̄), ε(l, m̄) = l.
pub fn counterexample(n: u64) -> Result<Semicoring> {
    if n < 2 {
        return Err(Error::Parameter(format!("the counterexample needs n ≥ 2, got {n}")));
    }
    let carrier = Module::direct_sum(&[Module::nat(), Module::cyclic(n)?])?.with_name(format!("NAT⊕CYCLIC({n})"));
    let e = carrier.unit(0, 0);
    let g = carrier.unit(1, 0);
    Semicoring::from_fns(
        format!("counterexample({n})"),
        carrier.clone(),
        |cc, c, _| {
            Ok(if c == 0 {
                cc.pure(&e, &e)
            } else {
                cc.result().sum(&[cc.pure(&e, &g), cc.pure(&g, &e), cc.pure(&g, &g)])
            })
        },
        |c, _| Ok(if c == 0 { 1 } else { 0 }),
    )
}

/// The built-in corings, by name.
pub fn gallery() -> Result<Vec<Semicoring>> {
    let b = Semiring::bool();
    let z2 = Semiring::zmod(2);
    let mut out = vec![
        sweedler(&SemiringMorphism::identity(&b), Budget::DEFAULT)?,
        trivial_coextension(&Module::base_module(&b)?)?,
        trivial_coextension(&Module::base_module(&z2)?)?,
    ];
    for d in gallery_free_data()? {
        out.push(d.build()?);
    }
    out.push(counterexample(4)?);
    Ok(out)
}

/// The gallery corings given by structure constants, which the mutation corpus perturbs.
pub fn gallery_free_data() -> Result<Vec<FreeCoringData>> {
    let z2 = Semiring::zmod(2);
    Ok(vec![
        grouplike_data(&Semiring::bool(), &["x", "y"])?,
        polynomial_data(&z2, 3, PolyVariant::GrouplikePowers)?,
        polynomial_data(&z2, 3, PolyVariant::Binomial)?,
        word_data(2, 1)?,
        word_data(2, 2)?,
        word_data(2, 3)?,
    ])
}

/// Single-constant mutations of the free gallery corings that break the coring laws, at most
/// `per_coring` from each, spread evenly over each coring's mutation list.
pub fn mutation_corpus(per_coring: usize) -> Result<Vec<(String, FreeCoringData)>> {
    let mut out = Vec::new();
    for d in gallery_free_data()? {
        let bad: Vec<(String, FreeCoringData)> = d.single_mutations().into_iter().filter(|(_, m)| !m.constant_verdict()).collect();
        let step = (bad.len() / per_coring.max(1)).max(1);
        out.extend(bad.into_iter().step_by(step).take(per_coring));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CoidealReport {
    pub uniform: bool,
    pub delta_condition: Option<String>,
    pub counit_condition: Option<String>,
    /// `None` when K is not uniform and the criterion does not apply.
    pub is_coideal: Option<bool>,
}

/// The coideal conditions for K ≤ C, with K a subset of the enumerated carrier.
pub fn coideal_check(c: &Semicoring, carrier: &crate::module::Enumerated, k: &Sub, budget: Budget) -> Result<CoidealReport> {
    let uniform = k.is_subtractive();
    let cc = c.cc.result().to_finite(budget)?;
    let mut gens = Vec::new();
    for &x in &k.elements() {
        for y in &carrier.elems {
            gens.push(cc.index_of(&c.cc.pure(&carrier.elems[x], y)));
            gens.push(cc.index_of(&c.cc.pure(y, &carrier.elems[x])));
        }
    }
    let target = Sub::generated(&cc.table, &gens).closure();
    let delta_condition = k
        .elements()
        .into_iter()
        .find(|&x| !target.contains(cc.index_of(&c.comult.apply(&carrier.elems[x]))))
        .map(|x| format!("Δ({}) = {} leaves the closure", carrier.table.label(x), c.cc.result().label(&c.comult.apply(&carrier.elems[x]))));
    let counit_condition = k
        .elements()
        .into_iter()
        .find(|&x| c.eps(&carrier.elems[x]) != c.base().zero())
        .map(|x| format!("ε({}) ≠ 0", carrier.table.label(x)));
    let is_coideal = uniform.then(|| delta_condition.is_none() && counit_condition.is_none());
    Ok(CoidealReport { uniform, delta_condition, counit_condition, is_coideal })
}

/// C/K with the induced Δ and ε, and the projection.
pub fn quotient_semicoring(c: &Semicoring, carrier: &crate::module::Enumerated, k: &Sub) -> Result<(Semicoring, LinearMap)> {
    let (q_table, pi_table) = quotient_by_sub(k);
    let (q, q_elems) = Module::from_finite(&q_table)?;
    let q = q.with_name(format!("{}/K", c.carrier.name()));
    let pi = LinearMap::from_table(&c.carrier, &carrier.elems, &q, &q_elems, &pi_table)?;
    let qq = tensor(&q, &q)?;
    let pipi = tensor_of_maps(&pi, &pi, &c.cc, &qq)?;
    let q_index: HashMap<&Elem, usize> = q_elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let rep = |e: &Elem| -> usize {
        let cls = q_index[e];
        (0..carrier.elems.len()).find(|&x| pi_table.apply(x) == cls).expect("surjective")
    };
    let quotient = Semicoring::from_fns(
        format!("{}/K", c.name),
        q.clone(),
        |_, comp, g| Ok(pipi.apply(&c.comult.apply(&carrier.elems[rep(&q.unit(comp, g))]))),
        |comp, g| Ok(c.eps(&carrier.elems[rep(&q.unit(comp, g))])),
    )?;
    // Re-anchor π at the quotient's own tensor square.
    let pi = LinearMap::from_fn(&c.carrier, &quotient.carrier, |x| Ok(pi.apply(x)))?;
    Ok((quotient, pi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualSide {
    Left,
    Right,
    Two,
}

/// A convolution semiring of functionals C → A.
#[derive(Debug, Clone)]
pub struct DualSemiring {
    pub side: DualSide,
    pub functionals: Vec<LinearMap>,
    pub tables: crate::semiring::SemiringTables,
    pub report: ValidationReport,
}

pub const DUAL_CAP: usize = 64;

impl DualSemiring {
    pub fn semiring(&self) -> Result<Semiring> {
        Semiring::from_tables(self.tables.clone())
    }

    pub fn index_of(&self, f: &LinearMap) -> Option<usize> {
        self.functionals.iter().position(|g| g.equals(f))
    }
}

fn functional_label(c: &Semicoring, f: &LinearMap) -> String {
    let base = c.base();
    let parts: Vec<String> = c
        .carrier
        .generators()
        .iter()
        .map(|&(i, g)| {
            let u = c.carrier.unit(i, g);
            format!("{}↦{}", c.show(&u), base.label(f.scalar_value(&u).expect("scalar")))
        })
        .collect();
    format!("[{}]", parts.join(","))
}

/// (f ⋆ g) for the chosen side, evaluated through the Sweedler list of each generator.
pub fn convolve(c: &Semicoring, side: DualSide, f: &LinearMap, g: &LinearMap) -> Result<LinearMap> {
    let base = c.base();
    let val = |h: &LinearMap, x: &Elem| h.scalar_value(x).expect("functional");
    LinearMap::from_fn(&c.carrier, f.target(), |x| {
        let s = c.sweedler(x).iter().fold(base.zero(), |acc, (x1, x2)| {
            let term = match side {
                DualSide::Left => val(g, &c.carrier.act(x1, val(f, x2))),
                DualSide::Right => val(f, &c.carrier.lact(val(g, x1), x2)),
                DualSide::Two => base.mul(val(g, x1), val(f, x2)),
            };
            base.add(acc, term)
        });
        Ok(f.target().from_scalar(s).expect("scalar"))
    })
}

/// The functionals C → A under convolution, with unit ε, checked against the semiring axioms.
pub fn dual_semiring(c: &Semicoring, side: DualSide, budget: Budget) -> Result<DualSemiring> {
    if !c.base().is_finite() || !c.is_finite() {
        return Err(Error::Unsupported(format!("the dual of {} is not enumerable", c.name)));
    }
    let funcs = crate::probes::dual_functionals(&c.carrier, budget)?;
    if funcs.len() > DUAL_CAP {
        return Err(Error::Unsupported(format!("{} has {} functionals, above the cap of {DUAL_CAP}", c.name, funcs.len())));
    }
    let find = |h: &LinearMap| funcs.iter().position(|f| f.equals(h));
    let n = funcs.len();
    let mut add = vec![vec![0; n]; n];
    let mut mul = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            add[i][j] = find(&funcs[i].plus(&funcs[j])).ok_or_else(|| Error::Internal("sum of functionals".into()))?;
            let h = convolve(c, side, &funcs[i], &funcs[j])?;
            mul[i][j] = find(&h).ok_or_else(|| Error::Internal(format!("convolution {h} is not a functional")))?;
        }
    }
    let zero = find(&LinearMap::zero(&c.carrier, funcs[0].target())).expect("zero functional");
    let one = find(&c.counit).ok_or_else(|| Error::Internal("ε is not among the functionals".into()))?;
    let tag = match side {
        DualSide::Left => "*C",
        DualSide::Right => "C*",
        DualSide::Two => "*C*",
    };
    let tables = crate::semiring::SemiringTables {
        name: format!("{tag}({})", c.name),
        elements: funcs.iter().map(|f| functional_label(c, f)).collect(),
        add,
        mul,
        zero,
        one,
    };
    let report = crate::semiring::check_semiring_axioms(&tables)?;
    Ok(DualSemiring { side, functionals: funcs, tables, report })
}

/// True when every atom of the carrier is free over the base.
pub fn has_free_carrier(c: &Semicoring) -> bool {
    c.carrier.comps().iter().all(|x| matches!(x, Component::P(p) if matches!(p.kind, AtomKind::Free { .. })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouplike_passes() {
        let c = grouplike_data(&Semiring::bool(), &["x", "y"]).unwrap().build().unwrap();
        let r = check_semicoring(&c).unwrap();
        assert!(r.passed(), "{r}");
        let xy = c.carrier.add(&c.carrier.unit(0, 0), &c.carrier.unit(1, 0));
        assert_eq!(c.show_tensor(&c.comult.apply(&xy)), "x⊗x + y⊗y");
    }

    #[test]
    fn counterexample_passes() {
        let c = counterexample(4).unwrap();
        assert_eq!(c.cc.result().atoms(), "NAT ⊕ CYCLIC(4) ⊕ CYCLIC(4) ⊕ CYCLIC(4)");
        let r = check_semicoring(&c).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn planted_counit_failure() {
        let mut d = grouplike_data(&Semiring::bool(), &["x", "y"]).unwrap();
        d.eps[0] = 0;
        assert!(!d.constant_verdict());
        let r = check_semicoring(&d.build().unwrap()).unwrap();
        assert!(!r.check("left counit").unwrap().passed);
    }

    #[test]
    fn binomial_over_z2() {
        let d = polynomial_data(&Semiring::zmod(2), 2, PolyVariant::Binomial).unwrap();
        assert_eq!(d.delta[2][1][1], 0);
        assert_eq!(d.delta[2][0][2], 1);
        assert!(d.constant_verdict());
    }

    #[test]
    fn sweedler_identity_is_the_trivial_coring() {
        let c = sweedler(&SemiringMorphism::identity(&Semiring::bool()), Budget::DEFAULT).unwrap();
        assert_eq!(c.carrier.enumerate(Budget::DEFAULT).unwrap().len(), 2);
        assert!(check_semicoring(&c).unwrap().passed());
    }
}
