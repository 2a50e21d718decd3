//! Right semicomodules over a semicoring, measuring pairings and rational parts.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::coring::{convolve, counterexample, dual_semiring, DualSide, Semicoring};
use crate::error::{Budget, Error, Result};
use crate::finite::{all_subs, find_isomorphism, hom_enumerate, Action, Congruence, FiniteModule, Sub, TableMap};
use crate::linear::{linear_maps, Column, LinearMap};
use crate::module::{CompElem, Component, Elem, Enumerated, Module, Q};
use crate::probes::{dual_functionals, flatness_probe, FlatnessReport};
use crate::report::{Flag, Outcome, ValidationReport};
use crate::semiring::{Scalar, Semiring, SemiringMorphism};
use crate::tensor::{associator, right_unitor, tensor, tensor_of_maps, TensorProduct};

/// A right C-semicomodule (M, ρ: M → M⊗C).
#[derive(Debug, Clone)]
pub struct Semicomodule {
    pub name: String,
    pub coring: Arc<Semicoring>,
    pub carrier: Module,
    /// M ⊗ C.
    pub mc: TensorProduct,
    pub coaction: LinearMap,
}

impl Semicomodule {
    /// Builds ρ from its value on elements; only generators (and ℚ/ℤ probes) are evaluated.
    pub fn from_fn<F>(name: impl Into<String>, coring: &Arc<Semicoring>, carrier: Module, rho: F) -> Result<Semicomodule>
    where
        F: Fn(&TensorProduct, &Elem) -> Result<Elem>,
    {
        if carrier.base() != coring.base() {
            return Err(Error::BaseMismatch(format!("{} over {}, coring over {}", carrier.name(), carrier.base(), coring.base())));
        }
        let mc = tensor(&carrier, &coring.carrier)?;
        let coaction = LinearMap::from_fn(&carrier, mc.result(), |m| rho(&mc, m))?;
        Ok(Semicomodule { name: name.into(), coring: coring.clone(), carrier, mc, coaction })
    }

    /// (C, Δ).
    pub fn regular(coring: &Arc<Semicoring>) -> Semicomodule {
        Semicomodule {
            name: coring.name.clone(),
            coring: coring.clone(),
            carrier: coring.carrier.clone(),
            mc: coring.cc.clone(),
            coaction: coring.comult.clone(),
        }
    }

    pub fn base(&self) -> &Semiring {
        self.carrier.base()
    }

    pub fn show_tensor(&self, t: &Elem) -> String {
        let parts: Vec<String> =
            self.mc.decompose(t).iter().map(|(m, c)| format!("{}⊗{}", self.carrier.label(m), self.coring.show(c))).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Coassociativity (ρ⊗C)∘ρ = (M⊗Δ)∘ρ and the counit law ϑ∘(M⊗ε)∘ρ = id.
pub fn check_comodule(m: &Semicomodule) -> Result<ValidationReport> {
    let c = &m.coring;
    let mut r = ValidationReport::new(format!("comodule {}", m.name));
    let id_m = LinearMap::identity(&m.carrier);
    let id_c = LinearMap::identity(&c.carrier);
    let a = associator(&m.carrier, &c.carrier, &c.carrier)?;
    let rho_c = tensor_of_maps(&m.coaction, &id_c, &a.mn, &a.mn_p)?;
    let m_delta = tensor_of_maps(&id_m, &c.comult, &a.mn, &a.m_np)?;
    let lhs = a.forward.compose(&rho_c)?.compose(&m.coaction)?;
    let rhs = m_delta.compose(&m.coaction)?;
    r.push("ρ coassociative", lhs.differs_from(&rhs).map(|w| format!("(ρ⊗C)ρ vs (M⊗Δ)ρ {w}")));
    let (ar, theta) = right_unitor(&m.carrier)?;
    let m_eps = tensor_of_maps(&id_m, &c.counit, &a.mn, &ar)?;
    let back = theta.compose(&m_eps)?.compose(&m.coaction)?;
    r.push("counit retracts ρ", back.differs_from(&id_m).map(|w| format!("ϑ(M⊗ε)ρ vs id {w}")));
    Ok(r)
}

/// `None` when f: M → N satisfies ρ_N∘f = (f⊗C)∘ρ_M, otherwise a witness.
pub fn colinearity_violation(f: &LinearMap, m: &Semicomodule, n: &Semicomodule) -> Result<Option<String>> {
    let fc = tensor_of_maps(f, &LinearMap::identity(&m.coring.carrier), &m.mc, &n.mc)?;
    let lhs = n.coaction.compose(f)?;
    let rhs = fc.compose(&m.coaction)?;
    Ok(lhs.differs_from(&rhs))
}

pub fn is_colinear(f: &LinearMap, m: &Semicomodule, n: &Semicomodule) -> Result<bool> {
    Ok(colinearity_violation(f, m, n)?.is_none())
}

/// Every colinear map between finite comodules.
pub fn colinear_maps(m: &Semicomodule, n: &Semicomodule, budget: Budget) -> Result<Vec<LinearMap>> {
    let mut out = Vec::new();
    for f in linear_maps(&m.carrier, &n.carrier, budget)? {
        if is_colinear(&f, m, n)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// (X⊗C, X⊗Δ).
pub fn cofree(x: &Module, c: &Arc<Semicoring>) -> Result<Semicomodule> {
    let a = associator(x, &c.carrier, &c.carrier)?;
    let x_delta = tensor_of_maps(&LinearMap::identity(x), &c.comult, &a.mn, &a.m_np)?;
    let coaction = a.backward.compose(&x_delta)?;
    Ok(Semicomodule {
        name: a.mn.result().name().to_string(),
        coring: c.clone(),
        carrier: a.mn.result().clone(),
        mc: a.mn_p.clone(),
        coaction,
    })
}

/// The A-linear map X⊗C → X, x⊗c ↦ x·ε(c).
pub fn cofree_counit(x: &Module, c: &Semicoring) -> Result<LinearMap> {
    let xc = tensor(x, &c.carrier)?;
    let (ar, theta) = right_unitor(x)?;
    let x_eps = tensor_of_maps(&LinearMap::identity(x), &c.counit, &xc, &ar)?;
    theta.compose(&x_eps)
}

/// Hom^C(Y, X⊗C) ≅ Hom_A(Y, X) via f ↦ ϑ(X⊗ε)f and g ↦ (g⊗C)ρ_Y, checked by enumerating both sides.
pub fn adjunction_check(y: &Semicomodule, x: &Module, budget: Budget) -> Result<ValidationReport> {
    let c = &y.coring;
    let cof = cofree(x, c)?;
    let xc = tensor(x, &c.carrier)?;
    let eps_x = cofree_counit(x, c)?;
    let colin = colinear_maps(y, &cof, budget)?;
    let lin = linear_maps(&y.carrier, x, budget)?;
    let mut r = ValidationReport::new(format!("Hom^C({}, {}) ≅ Hom({}, {})", y.name, cof.name, y.name, x.name()));
    r.push(
        "equal cardinalities",
        (colin.len() != lin.len()).then(|| format!("{} colinear maps, {} linear maps", colin.len(), lin.len())),
    );
    let id_c = LinearMap::identity(&c.carrier);
    let mut lift_w = None;
    let mut round_w = None;
    for g in &lin {
        let h = tensor_of_maps(g, &id_c, &y.mc, &xc)?.compose(&y.coaction)?;
        if lift_w.is_none() {
            lift_w = colinearity_violation(&h, y, &cof)?.map(|w| format!("lift of {g}: {w}"));
        }
        if round_w.is_none() {
            round_w = eps_x.compose(&h)?.differs_from(g).map(|w| format!("{g}: {w}"));
        }
    }
    r.push("(g⊗C)ρ is colinear", lift_w);
    r.push("ϑ(X⊗ε)∘(g⊗C)ρ = g", round_w);
    let mut back_w = None;
    for f in &colin {
        let g = eps_x.compose(f)?;
        let h = tensor_of_maps(&g, &id_c, &y.mc, &xc)?.compose(&y.coaction)?;
        if let Some(w) = h.differs_from(f) {
            back_w = Some(format!("{f}: {w}"));
            break;
        }
    }
    r.push("(ϑ(X⊗ε)f ⊗ C)ρ = f", back_w);
    Ok(r)
}

/// The two coactions on CYCLIC(n) over the counterexample coring.
#[derive(Debug, Clone)]
pub struct TwoCoactions {
    pub coring: Arc<Semicoring>,
    pub rho1: Semicomodule,
    pub rho2: Semicomodule,
    /// ℚ/ℤ with q ↦ q⊗(1,0).
    pub qmodz: Semicomodule,
    /// 1̄ ↦ 1/n.
    pub iota: LinearMap,
    pub flatness: FlatnessReport,
    pub report: ValidationReport,
}

/// ρ₁(z) = z⊗(1,0) and ρ₂(z) = z⊗(1,0) + z⊗(0,1̄) on CYCLIC(n), both making ι: CYCLIC(n) → ℚ/ℤ colinear.
pub fn two_coactions_counterexample(n: u64, budget: Budget) -> Result<TwoCoactions> {
    let c = Arc::new(counterexample(n)?);
    let e = c.carrier.unit(0, 0);
    let g = c.carrier.unit(1, 0);
    let z = Module::cyclic(n)?;
    let rho1 = Semicomodule::from_fn("ρ₁", &c, z.clone(), |t, x| Ok(t.pure(x, &e)))?;
    let rho2 = Semicomodule::from_fn("ρ₂", &c, z.clone(), |t, x| Ok(t.result().add(&t.pure(x, &e), &t.pure(x, &g))))?;
    let qmodz = Semicomodule::from_fn("ℚ/ℤ", &c, Module::qmodz(), |t, x| Ok(t.pure(x, &e)))?;
    let iota = LinearMap::new(z.clone(), Module::qmodz(), vec![Column::Gens(vec![Elem(vec![CompElem::Q(Q::new(1, n as i64))])])])?;
    let mut r = ValidationReport::new(format!("two coactions on CYCLIC({n})"));
    r.extend("ρ₁", check_comodule(&rho1)?);
    r.extend("ρ₂", check_comodule(&rho2)?);
    r.extend("ℚ/ℤ", check_comodule(&qmodz)?);
    r.push(
        "ρ₁ ≠ ρ₂",
        rho1.coaction.differs_from(&rho2.coaction).is_none().then(|| "the two coactions agree".to_string()),
    );
    r.push("ι colinear for ρ₁", colinearity_violation(&iota, &rho1, &qmodz)?);
    r.push("ι colinear for ρ₂", colinearity_violation(&iota, &rho2, &qmodz)?);
    let flatness = flatness_probe(&c.carrier, std::slice::from_ref(&iota), budget)?;
    r.push(
        "mono-flat probe fails",
        (!flatness.mono_flat_on_family.is_fail()).then(|| format!("probe returned {:?}", flatness.mono_flat_on_family)),
    );
    Ok(TwoCoactions { coring: c, rho1, rho2, qmodz, iota, flatness, report: r })
}

/// A left pairing (V, W): each generator of V is sent to a functional W → A.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub name: String,
    pub v: Module,
    pub w: Module,
    /// κ(v_g) for the generators of V, in `v.generators()` order.
    pub kappa: Vec<LinearMap>,
}

#[derive(Debug, Clone)]
pub struct AlphaReport {
    pub injective: Flag,
    pub subtractive: Flag,
}

impl AlphaReport {
    pub fn holds(&self) -> bool {
        self.injective.holds && self.subtractive.holds
    }
}

impl Pairing {
    pub fn new(name: impl Into<String>, v: Module, w: Module, kappa: Vec<LinearMap>) -> Result<Pairing> {
        let name = name.into();
        if v.has_q() {
            return Err(Error::Unsupported("pairings with a ℚ/ℤ atom in V".into()));
        }
        if kappa.len() != v.generators().len() {
            return Err(Error::Format(format!("{name}: {} generators need as many functionals", v.generators().len())));
        }
        let a = Module::base_module(w.base())?;
        if kappa.iter().any(|k| !k.source().same_as(&w) || !k.target().same_as(&a)) {
            return Err(Error::Format(format!("{name}: κ must consist of functionals on {}", w.name())));
        }
        let p = Pairing { name, v, w, kappa };
        // The relations of V must be respected.
        let wg: Vec<Elem> = p.w.generators().iter().map(|&(i, g)| p.w.unit(i, g)).collect();
        for (i, comp) in p.v.comps().iter().enumerate() {
            let pres = comp.presented().expect("no ℚ/ℤ");
            for rule in pres.rs.rules() {
                let (l, r) = (p.v.embed(i, CompElem::P(rule.lhs.clone())), p.v.embed(i, CompElem::P(rule.rhs.clone())));
                if let Some(y) = wg.iter().find(|y| p.eval(&l, y) != p.eval(&r, y)) {
                    return Err(Error::NotLinear(format!(
                        "{}: ⟨·, {}⟩ separates {} and {}, which are equal in {}",
                        p.name,
                        p.w.label(y),
                        p.v.label(&l),
                        p.v.label(&r),
                        p.v.name()
                    )));
                }
            }
        }
        Ok(p)
    }

    /// (A, A) with ⟨a, b⟩ = ab.
    pub fn trivial(base: &Semiring) -> Result<Pairing> {
        let a = Module::base_module(base)?;
        let kappa = a
            .generators()
            .iter()
            .map(|&(i, g)| {
                let s = a.as_scalar(&a.unit(i, g)).expect("scalar");
                LinearMap::from_fn(&a, &a, |w| Ok(a.lact(s, w)))
            })
            .collect::<Result<Vec<_>>>()?;
        Pairing::new(format!("({0}, {0})", base.name()), a.clone(), a, kappa)
    }

    /// ⟨v, w⟩, linear in v through the generator counts.
    pub fn eval(&self, v: &Elem, w: &Elem) -> Scalar {
        let base = self.w.base();
        let mut acc = base.zero();
        let mut k = 0;
        for x in &v.0 {
            for &count in x.vector() {
                if count > 0 {
                    let val = self.kappa[k].scalar_value(w).expect("functional");
                    acc = base.add(acc, base.nat_mul(count, val));
                }
                k += 1;
            }
        }
        acc
    }

    /// Tabulated elements of Hom(V, M) by their values on the generators of V.
    fn hom_tuples(&self, m: &Module, budget: Budget) -> Result<Vec<Vec<Elem>>> {
        let vg: Vec<Elem> = self.v.generators().iter().map(|&(i, g)| self.v.unit(i, g)).collect();
        if self.v.is_finite() {
            let v_en = self.v.to_finite(budget)?;
            let m_en = m.to_finite(budget)?;
            let homs = hom_enumerate(&v_en.table, &m_en.table, budget)?;
            return Ok(homs.maps.iter().map(|f| vg.iter().map(|u| m_en.elems[f.apply(v_en.index_of(u))].clone()).collect()).collect());
        }
        let free_nat = matches!(self.v.base(), Semiring::Nat)
            && self.v.comps().iter().all(|c| c.presented().map_or(false, |p| p.rs.rules().is_empty()));
        if !free_nat {
            return Err(Error::Unsupported(format!("Hom({}, {}) is not tabulated", self.v.name(), m.name())));
        }
        let els = m.enumerate(budget)?;
        let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
        for _ in &vg {
            if out.len() * els.len() > budget.0 {
                return Err(budget.exceeded(format!("Hom({}, {})", self.v.name(), m.name())));
            }
            out = out.iter().flat_map(|t| els.iter().map(move |x| [t.clone(), vec![x.clone()]].concat())).collect();
        }
        Ok(out)
    }
}

/// α_M: M⊗W → Hom(V, M), Σ mᵢ⊗wᵢ ↦ [v ↦ Σ mᵢ⟨v, wᵢ⟩], on a finite M: is it injective and subtractive?
pub fn alpha_check(p: &Pairing, m: &Module, budget: Budget) -> Result<AlphaReport> {
    let t = tensor(m, &p.w)?;
    let vg: Vec<Elem> = p.v.generators().iter().map(|&(i, g)| p.v.unit(i, g)).collect();
    let alpha = |x: &Elem| -> Vec<Elem> {
        let d = t.decompose(x);
        vg.iter()
            .map(|v| {
                let parts: Vec<Elem> = d.iter().map(|(mi, wi)| m.act(mi, p.eval(v, wi))).collect();
                m.sum(&parts)
            })
            .collect()
    };
    let show = |x: &Elem| {
        let parts: Vec<String> = t.decompose(x).iter().map(|(a, b)| format!("{}⊗{}", m.label(a), p.w.label(b))).collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    };
    let mut seen: HashMap<Vec<Elem>, Elem> = HashMap::new();
    let mut order: Vec<Vec<Elem>> = Vec::new();
    let mut injective = Flag::yes();
    for x in t.result().enumerate(budget)? {
        let a = alpha(&x);
        if let Some(prev) = seen.get(&a) {
            if injective.holds {
                injective = Flag::no(format!("α({}) = α({})", show(prev), show(&x)));
            }
        } else {
            order.push(a.clone());
            seen.insert(a, x);
        }
    }
    let image: HashSet<&Vec<Elem>> = seen.keys().collect();
    let mut subtractive = Flag::yes();
    // The image is a finite submonoid of the group Hom(V, M), hence a subgroup.
    if is_group(m, budget)? {
        return Ok(AlphaReport { injective, subtractive });
    }
    'h: for h in p.hom_tuples(m, budget)? {
        if image.contains(&h) {
            continue;
        }
        for i in &order {
            let s: Vec<Elem> = h.iter().zip(i.iter()).map(|(a, b)| m.add(a, b)).collect();
            if image.contains(&s) {
                let lab = |t: &[Elem]| t.iter().map(|e| m.label(e)).collect::<Vec<_>>().join(",");
                subtractive = Flag::no(format!("[{}] + [{}] lies in the image but [{}] does not", lab(&h), lab(i), lab(&h)));
                break 'h;
            }
        }
    }
    Ok(AlphaReport { injective, subtractive })
}

fn is_group(m: &Module, budget: Budget) -> Result<bool> {
    if !m.is_finite() {
        return Ok(false);
    }
    let t = m.to_finite(budget)?.table;
    Ok(t.elements().all(|x| t.elements().any(|y| t.add(x, y) == 0)))
}

/// The pairing (NAT, NAT⊕CYCLIC(n)) with ⟨k, (l, m̄)⟩ = kl, the only functionals on the counterexample carrier.
pub fn counterexample_pairing(n: u64) -> Result<Pairing> {
    let c = counterexample(n)?;
    let nat = Module::nat();
    let w = c.carrier.clone();
    let kappa = LinearMap::new(w.clone(), nat.clone(), vec![Column::Gens(vec![nat.unit(0, 0)]), Column::Gens(vec![nat.zero()])])?;
    Pairing::new(format!("(NAT, {})", w.name()), nat, w, vec![kappa])
}

/// P ⊗ P′ = (V′⊗V, W⊗W′) with ⟨v′⊗v, w⊗w′⟩ = ⟨v, w⟨v′, w′⟩⟩.
pub fn pairing_tensor(p: &Pairing, q: &Pairing) -> Result<Pairing> {
    let v = tensor(&q.v, &p.v)?;
    let w = tensor(&p.w, &q.w)?;
    let base = p.w.base().clone();
    let a = Module::base_module(&base)?;
    let kappa = v
        .result()
        .generators()
        .iter()
        .map(|&(i, g)| {
            let parts = v.decompose(&v.result().unit(i, g));
            w.lift_bilinear(&a, |x, y| {
                let s = parts.iter().fold(base.zero(), |acc, (vq, vp)| base.add(acc, p.eval(vp, &p.w.act(x, q.eval(vq, y)))));
                a.from_scalar(s).ok_or_else(|| Error::Internal("scalar".into()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Pairing::new(format!("{}⊗{}", p.name, q.name), v.result().clone(), w.result().clone(), kappa)
}

/// A measuring left pairing (𝒜, C): a finite A-semiring 𝒜 with κ: 𝒜 → (*C, ⋆_l).
#[derive(Debug, Clone)]
pub struct MeasuringPairing {
    pub coring: Arc<Semicoring>,
    pub algebra: Semiring,
    /// A → 𝒜.
    pub unit: SemiringMorphism,
    /// κ(a), indexed by the scalars of 𝒜.
    pub kappa: Vec<LinearMap>,
}

impl MeasuringPairing {
    pub fn new(coring: &Arc<Semicoring>, algebra: Semiring, unit: SemiringMorphism, kappa: Vec<LinearMap>) -> Result<Self> {
        if algebra.size() != Some(kappa.len()) {
            return Err(Error::Format("κ needs one functional per element of 𝒜".into()));
        }
        let p = MeasuringPairing { coring: coring.clone(), algebra, unit, kappa };
        let r = p.check()?;
        if let Some(c) = r.first_failure() {
            return Err(Error::Hypothesis(format!("κ is not a semiring morphism: {} fails at {}", c.name, c.witness.clone().unwrap_or_default())));
        }
        Ok(p)
    }

    /// (*C, C) with the identity κ.
    pub fn from_dual(coring: &Arc<Semicoring>, budget: Budget) -> Result<Self> {
        let ds = dual_semiring(coring, DualSide::Left, budget)?;
        if let Some(c) = ds.report.first_failure() {
            return Err(Error::Hypothesis(format!("*C is not a semiring: {} fails", c.name)));
        }
        let algebra = ds.semiring()?;
        let base = coring.base().clone();
        let scalars = base.elements().ok_or_else(|| Error::Unsupported("duals need a finite base".into()))?;
        let a = ds.functionals[0].target().clone();
        let unit = scalars
            .iter()
            .map(|&s| {
                let f = LinearMap::from_fn(&coring.carrier, &a, |c| {
                    Ok(a.from_scalar(base.mul(coring.eps(c), s)).expect("scalar"))
                })?;
                ds.index_of(&f).map(|i| i as Scalar).ok_or_else(|| Error::Internal("ε·s is not a functional".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = SemiringMorphism::new(base, algebra.clone(), unit)?;
        MeasuringPairing::new(coring, algebra, unit, ds.functionals)
    }

    pub fn eval(&self, a: Scalar, c: &Elem) -> Scalar {
        self.kappa[a as usize].scalar_value(c).expect("functional")
    }

    /// κ preserves 0, 1, sums, products (into ⋆_l) and the unit map.
    pub fn check(&self) -> Result<ValidationReport> {
        let c = &self.coring;
        let s = &self.algebra;
        let base = c.base();
        let mut r = ValidationReport::new(format!("κ: {} → *{}", s.name(), c.name));
        let scalars = s.elements().expect("finite 𝒜");
        let z = &self.kappa[s.zero() as usize];
        r.push("κ(0) = 0", z.differs_from(&LinearMap::zero(&c.carrier, z.target())));
        r.push("κ(1) = ε", self.kappa[s.one() as usize].differs_from(&c.counit));
        let mut add_w = None;
        let mut mul_w = None;
        for &a in &scalars {
            for &b in &scalars {
                let (ka, kb) = (&self.kappa[a as usize], &self.kappa[b as usize]);
                if add_w.is_none() {
                    add_w = self.kappa[s.add(a, b) as usize].differs_from(&ka.plus(kb)).map(|w| format!("({}, {}): {w}", s.label(a), s.label(b)));
                }
                if mul_w.is_none() {
                    mul_w = self.kappa[s.mul(a, b) as usize]
                        .differs_from(&convolve(c, DualSide::Left, ka, kb)?)
                        .map(|w| format!("({}, {}): {w}", s.label(a), s.label(b)));
                }
            }
        }
        r.push("κ additive", add_w);
        r.push("κ multiplicative into ⋆_l", mul_w);
        let mut unit_w = None;
        for &t in &base.elements().unwrap_or_default() {
            let lhs = &self.kappa[self.unit.apply(t) as usize];
            let rhs = LinearMap::from_fn(&c.carrier, lhs.target(), |x| {
                Ok(lhs.target().from_scalar(base.mul(c.eps(x), t)).expect("scalar"))
            })?;
            if let Some(w) = lhs.differs_from(&rhs) {
                unit_w = Some(format!("{}: {w}", base.label(t)));
                break;
            }
        }
        r.push("κ respects A → 𝒜", unit_w);
        Ok(r)
    }

    /// 𝒜 as an A-module; element index = scalar of 𝒜.
    pub fn algebra_over_base(&self) -> Result<Arc<FiniteModule>> {
        let t = self.algebra.tables().expect("finite 𝒜");
        let base = self.coring.base();
        let scalars = base.elements().ok_or_else(|| Error::Unsupported("finite base required".into()))?;
        let u = |s: Scalar| self.unit.apply(s) as usize;
        let right = t.mul.iter().map(|row| scalars.iter().map(|&s| row[u(s)]).collect()).collect();
        let left = (0..t.elements.len()).map(|a| scalars.iter().map(|&s| t.mul[u(s)][a]).collect()).collect();
        Ok(Arc::new(FiniteModule::new(
            base.clone(),
            self.algebra.name(),
            t.elements.clone(),
            t.add.clone(),
            Action::Table(right),
            Some(Action::Table(left)),
        )?))
    }

    /// The left pairing (𝒜, C) underlying the measuring pairing.
    pub fn as_pairing(&self) -> Result<Pairing> {
        let (v, elems) = Module::from_finite(&*self.algebra_over_base()?)?;
        let index: HashMap<&Elem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let kappa = v.generators().iter().map(|&(i, g)| self.kappa[index[&v.unit(i, g)]].clone()).collect();
        Pairing::new(format!("({}, {})", self.algebra.name(), self.coring.name), v, self.coring.carrier.clone(), kappa)
    }

    pub fn alpha_check(&self, m: &Module, budget: Budget) -> Result<AlphaReport> {
        alpha_check(&self.as_pairing()?, m, budget)
    }
}

/// A comodule viewed as an 𝒜-module: `module` is over 𝒜 and shares indices with `elems`.
#[derive(Debug, Clone)]
pub struct Induced {
    pub module: Arc<FiniteModule>,
    pub elems: Enumerated,
}

/// m·a = Σ m₍₀₎⟨a, m₍₁₎⟩.
pub fn induced_action(p: &MeasuringPairing, m: &Semicomodule, budget: Budget) -> Result<Induced> {
    if !Arc::ptr_eq(&p.coring, &m.coring) && p.coring.name != m.coring.name {
        return Err(Error::BaseMismatch(format!("pairing over {}, comodule over {}", p.coring.name, m.coring.name)));
    }
    if !p.algebra.is_commutative() {
        return Err(Error::Unsupported(format!("{}-modules are one-sided; 𝒜 must be commutative", p.algebra.name())));
    }
    let en = m.carrier.to_finite(budget)?;
    let scalars = p.algebra.elements().expect("finite 𝒜");
    let act: Vec<Vec<usize>> = en
        .elems
        .iter()
        .map(|x| {
            let d = m.mc.decompose(&m.coaction.apply(x));
            scalars
                .iter()
                .map(|&a| {
                    let parts: Vec<Elem> = d.iter().map(|(y, c)| m.carrier.act(y, p.eval(a, c))).collect();
                    en.index_of(&m.carrier.sum(&parts))
                })
                .collect()
        })
        .collect();
    let module = FiniteModule::new(
        p.algebra.clone(),
        format!("{}_𝒜", m.name),
        en.table.labels().to_vec(),
        en.table.add_table().to_vec(),
        Action::Table(act),
        None,
    )?;
    let back = module.restrict(&p.unit)?;
    if let Some(x) = en.table.elements().find(|&x| {
        p.coring.base().elements().unwrap_or_default().iter().any(|&s| back.act(x, s) != en.table.act(x, s))
    }) {
        return Err(Error::Hypothesis(format!("the 𝒜-action on {} does not extend the A-action at {}", m.name, en.table.label(x))));
    }
    Ok(Induced { module: Arc::new(module), elems: en })
}

/// Rat^C(M) for a finite 𝒜-module, with its coaction.
#[derive(Debug, Clone)]
pub struct RationalPart {
    pub ambient: Arc<FiniteModule>,
    pub sub: Sub,
    /// For each ambient element of the part, its representing tensor as pure terms (ambient index, coring element).
    pub representing: Vec<Option<Vec<(usize, Elem)>>>,
    pub comodule: Semicomodule,
}

/// Restricts a coaction to a subobject, lifting through the injective map N⊗C → M⊗C.
fn restrict_coaction<F>(name: String, c: &Arc<Semicoring>, sub: &Module, incl: &LinearMap, big: &TensorProduct, value: F, budget: Budget) -> Result<Semicomodule>
where
    F: Fn(&Elem) -> Result<Elem>,
{
    let nc = tensor(sub, &c.carrier)?;
    let ic = tensor_of_maps(incl, &LinearMap::identity(&c.carrier), &nc, big)?;
    let mut lift: HashMap<Elem, Elem> = HashMap::new();
    for t in nc.result().enumerate(budget)? {
        if let Some(prev) = lift.insert(ic.apply(&t), t.clone()) {
            return Err(Error::Hypothesis(format!(
                "{}⊗C → {}⊗C identifies {} and {}",
                sub.name(),
                incl.target().name(),
                nc.result().label(&prev),
                nc.result().label(&t)
            )));
        }
    }
    Semicomodule::from_fn(name, c, sub.clone(), |_, e| {
        let v = value(e)?;
        lift.get(&v).cloned().ok_or_else(|| Error::Hypothesis(format!("ρ({}) does not lie in {}⊗C", sub.label(e), sub.name())))
    })
}

/// 𝒜-module → presented A-module, with the element correspondence.
fn over_base(p: &MeasuringPairing, m: &FiniteModule) -> Result<(Module, Vec<Elem>, HashMap<Elem, usize>)> {
    let (mp, elems) = Module::from_finite(&m.restrict(&p.unit)?)?;
    let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Ok((mp, elems, index))
}

/// The elements m with a (necessarily unique) Σ mᵢ⊗cᵢ such that ma = Σ mᵢ⟨a, cᵢ⟩ for every a ∈ 𝒜.
pub fn rational_part(p: &MeasuringPairing, m: &Arc<FiniteModule>, budget: Budget) -> Result<RationalPart> {
    if m.base() != &p.algebra {
        return Err(Error::BaseMismatch(format!("{} is not over {}", m.name(), p.algebra.name())));
    }
    if !p.algebra.is_commutative() {
        return Err(Error::Unsupported(format!("{}-modules are one-sided; 𝒜 must be commutative", p.algebra.name())));
    }
    let c = &p.coring;
    let (mp, elems, index) = over_base(p, m)?;
    let alpha = p.alpha_check(&mp, budget)?;
    if !alpha.holds() {
        let w = alpha.injective.witness.or(alpha.subtractive.witness).unwrap_or_default();
        return Err(Error::Refused(format!("α-condition fails on {}: {w}", m.name())));
    }
    let t = tensor(&mp, &c.carrier)?;
    let scalars = p.algebra.elements().expect("finite 𝒜");
    let mut by_tuple: HashMap<Vec<usize>, (Elem, Vec<(Elem, Elem)>)> = HashMap::new();
    for x in t.result().enumerate(budget)? {
        let d = t.decompose(&x);
        let tuple: Vec<usize> = scalars
            .iter()
            .map(|&a| {
                let parts: Vec<Elem> = d.iter().map(|(mi, ci)| mp.act(mi, p.eval(a, ci))).collect();
                index[&mp.sum(&parts)]
            })
            .collect();
        if let Some((prev, _)) = by_tuple.get(&tuple) {
            return Err(Error::Hypothesis(format!(
                "{} and {} represent the same action, refuting the α certificate",
                t.result().label(prev),
                t.result().label(&x)
            )));
        }
        by_tuple.insert(tuple, (x, d));
    }
    let mut representing = vec![None; m.size()];
    let mut tensor_of = vec![None; m.size()];
    let mut members = Vec::new();
    for i in m.elements() {
        let tuple: Vec<usize> = scalars.iter().map(|&a| m.act(i, a)).collect();
        if let Some((x, d)) = by_tuple.get(&tuple) {
            members.push(i);
            representing[i] = Some(d.iter().map(|(mi, ci)| (index[mi], ci.clone())).collect());
            tensor_of[i] = Some(x.clone());
        }
    }
    let sub = Sub::from_elements(m, &members).map_err(|e| Error::Internal(format!("Rat is not a subsemimodule: {e}")))?;
    let (n_tab, incl) = sub.as_module();
    let (np, nelems, nindex) = over_base(p, &n_tab)?;
    let iota = LinearMap::from_table(&np, &nelems, &mp, &elems, &incl.with_source(Arc::new(n_tab.restrict(&p.unit)?)).with_target(Arc::new(m.restrict(&p.unit)?)))?;
    let comodule = restrict_coaction(
        format!("Rat({})", m.name()),
        c,
        &np,
        &iota,
        &t,
        |e| Ok(tensor_of[incl.apply(nindex[e])].clone().expect("member")),
        budget,
    )?;
    Ok(RationalPart { ambient: m.clone(), sub, representing, comodule })
}

/// Closure properties on a family of finite 𝒜-modules: Rat is subtractive, Rat(L̄) = L̄ ∩ Rat(M),
/// Rat∘Rat = Rat, f(Rat M) ⊆ Rat N, and the membership criterion for K̄ ⊗ C.
pub fn rat_property_suite(p: &MeasuringPairing, family: &[Arc<FiniteModule>], budget: Budget) -> Result<ValidationReport> {
    let rats = family.iter().map(|m| rational_part(p, m, budget)).collect::<Result<Vec<_>>>()?;
    let mut w2 = None;
    let mut w3 = None;
    let mut w4 = None;
    let mut w5 = None;
    let mut wq = None;
    for (k, (m, r)) in family.iter().zip(&rats).enumerate() {
        if w2.is_none() && !r.sub.is_subtractive() {
            w2 = Some(format!("Rat({}) = {:?} is not subtractive", m.name(), r.sub.elements()));
        }
        if w3.is_none() {
            for l in all_subs(m) {
                let lbar = l.closure();
                let (lt, incl) = lbar.as_module();
                let rl = rational_part(p, &lt, budget)?;
                let pushed = rl.sub.image_under(&incl);
                if pushed.elements() != lbar.intersection(&r.sub).elements() {
                    w3 = Some(format!("{}: L̄ = {:?}, Rat(L̄) = {:?}, Rat(M) = {:?}", m.name(), lbar.elements(), pushed.elements(), r.sub.elements()));
                    break;
                }
            }
        }
        if w4.is_none() {
            let (rt, _) = r.sub.as_module();
            let rr = rational_part(p, &rt, budget)?;
            if rr.sub.len() != rt.size() {
                w4 = Some(format!("Rat(Rat({})) has {} of {} elements", m.name(), rr.sub.len(), rt.size()));
            }
        }
        if w5.is_none() {
            for (j, n) in family.iter().enumerate() {
                for f in hom_enumerate(m, n, budget)?.maps {
                    if !r.sub.image_under(&f).is_subset_of(&rats[j].sub) {
                        w5 = Some(format!("f: {} → {} with images {:?} leaves Rat", m.name(), n.name(), f.images()));
                        break;
                    }
                }
                if w5.is_some() {
                    break;
                }
            }
        }
        if wq.is_none() {
            wq = q2_violation(p, m, budget)?.map(|w| format!("family member {k}: {w}"));
        }
    }
    let mut rep = ValidationReport::new(format!("rational parts over ({}, {}) on {} modules", p.algebra.name(), p.coring.name, family.len()));
    rep.push("Rat(M) = closure of Rat(M)", w2);
    rep.push("Rat(L̄) = L̄ ∩ Rat(M)", w3);
    rep.push("Rat(Rat(M)) = Rat(M)", w4);
    rep.push("f(Rat(M)) ⊆ Rat(N)", w5);
    rep.push("t ∈ K̄⊗C iff Σ lᵢ⟨a, cᵢ⟩ ∈ K̄ for all a", wq);
    Ok(rep)
}

/// For L = M over A and every K ≤ L: t ∈ image(K̄⊗C → L⊗C) ⟺ α(t)(a) ∈ K̄ for all a.
pub fn q2_violation(p: &MeasuringPairing, m: &Arc<FiniteModule>, budget: Budget) -> Result<Option<String>> {
    let c = &p.coring;
    let l_tab = Arc::new(m.restrict(&p.unit)?);
    let (lp, lelems) = Module::from_finite(&l_tab)?;
    let lindex: HashMap<&Elem, usize> = lelems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let lc = tensor(&lp, &c.carrier)?;
    let ts = lc.result().enumerate(budget)?;
    let scalars = p.algebra.elements().expect("finite 𝒜");
    let values: Vec<Vec<usize>> = ts
        .iter()
        .map(|t| {
            let d = lc.decompose(t);
            scalars
                .iter()
                .map(|&a| {
                    let parts: Vec<Elem> = d.iter().map(|(x, ci)| lp.act(x, p.eval(a, ci))).collect();
                    lindex[&lp.sum(&parts)]
                })
                .collect()
        })
        .collect();
    let id_c = LinearMap::identity(&c.carrier);
    for k in all_subs(&l_tab) {
        let kbar = k.closure();
        let (kt, incl) = kbar.as_module();
        let (kp, kelems) = Module::from_finite(&kt)?;
        let iota = LinearMap::from_table(&kp, &kelems, &lp, &lelems, &incl)?;
        let kc = tensor(&kp, &c.carrier)?;
        let ic = tensor_of_maps(&iota, &id_c, &kc, &lc)?;
        let image: HashSet<Elem> = kc.result().enumerate(budget)?.iter().map(|x| ic.apply(x)).collect();
        for (t, vals) in ts.iter().zip(&values) {
            let lhs = image.contains(t);
            let rhs = vals.iter().all(|&v| kbar.contains(v));
            if lhs != rhs {
                return Ok(Some(format!(
                    "{}: K̄ = {:?}, t = {}: in K̄⊗C is {lhs}, criterion gives {rhs}",
                    m.name(),
                    kbar.elements(),
                    lc.result().label(t)
                )));
            }
        }
    }
    Ok(None)
}

/// 𝒜* = Hom_A(𝒜, A) with (φ·a)(b) = φ(ab); also returns each element's values on 𝒜.
pub fn dual_algebra_module(p: &MeasuringPairing, budget: Budget) -> Result<(Arc<FiniteModule>, Vec<Vec<Scalar>>)> {
    let t = p.algebra.tables().expect("finite 𝒜").clone();
    let (v, velems) = Module::from_finite(&*p.algebra_over_base()?)?;
    let base = p.coring.base();
    let mut vals: Vec<Vec<Scalar>> =
        dual_functionals(&v, budget)?.iter().map(|f| velems.iter().map(|e| f.scalar_value(e).expect("scalar")).collect()).collect();
    let zero = vals.iter().position(|row| row.iter().all(|&s| s == base.zero())).expect("zero functional");
    vals.swap(0, zero);
    let index: HashMap<Vec<Scalar>, usize> = vals.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let n = vals.len();
    let add: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| index[&vals[i].iter().zip(&vals[j]).map(|(&a, &b)| base.add(a, b)).collect::<Vec<_>>()]).collect())
        .collect();
    let act: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..t.elements.len()).map(|a| index[&(0..t.elements.len()).map(|b| vals[i][t.mul[a][b]]).collect::<Vec<_>>()]).collect())
        .collect();
    let labels = vals.iter().map(|r| format!("[{}]", r.iter().map(|&s| base.label(s)).collect::<Vec<_>>().join(","))).collect();
    let m = FiniteModule::new(p.algebra.clone(), format!("{}*", p.algebra.name()), labels, add, Action::Table(act), None)?;
    Ok((Arc::new(m), vals))
}

/// C → 𝒜*, c ↦ ⟨·, c⟩ is an 𝒜-linear bijection onto Rat(𝒜*).
pub fn rat_of_dual_check(p: &MeasuringPairing, budget: Budget) -> Result<ValidationReport> {
    let (dual, vals) = dual_algebra_module(p, budget)?;
    let index: HashMap<&Vec<Scalar>, usize> = vals.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let rat = rational_part(p, &dual, budget)?;
    let ind = induced_action(p, &Semicomodule::regular(&p.coring), budget)?;
    let scalars = p.algebra.elements().expect("finite 𝒜");
    let chi: Vec<usize> = ind
        .elems
        .elems
        .iter()
        .map(|c| index[&scalars.iter().map(|&a| p.eval(a, c)).collect::<Vec<_>>()])
        .collect();
    let mut r = ValidationReport::new(format!("Rat({}*) ≅ {}", p.algebra.name(), p.coring.name));
    let distinct: HashSet<usize> = chi.iter().copied().collect();
    r.push("χ injective", (distinct.len() != chi.len()).then(|| "two elements of C give the same functional".to_string()));
    r.push(
        "χ(C) = Rat(𝒜*)",
        (distinct != rat.sub.elements().into_iter().collect::<HashSet<_>>())
            .then(|| format!("χ(C) = {:?}, Rat = {:?}", sorted(&distinct), rat.sub.elements())),
    );
    let lin = ind.module.elements().find_map(|x| {
        scalars.iter().find(|&&a| chi[ind.module.act(x, a)] != dual.act(chi[x], a)).map(|&a| format!("{}·{}", ind.module.label(x), p.algebra.label(a)))
    });
    r.push("χ is 𝒜-linear", lin);
    let (rt, _) = rat.sub.as_module();
    r.push(
        "isomorphism witnessed",
        find_isomorphism(&rt, &ind.module).is_none().then(|| "no isomorphism found".to_string()),
    );
    Ok(r)
}

fn sorted(s: &HashSet<usize>) -> Vec<usize> {
    let mut v: Vec<usize> = s.iter().copied().collect();
    v.sort();
    v
}

/// rational_part(induced_action(M)) = M, with the recovered coaction equal to ρ.
pub fn round_trip_check(p: &MeasuringPairing, m: &Semicomodule, budget: Budget) -> Result<ValidationReport> {
    let ind = induced_action(p, m, budget)?;
    let rat = rational_part(p, &ind.module, budget)?;
    let mut r = ValidationReport::new(format!("round trip on {}", m.name));
    r.push(
        "Rat(M) = M",
        (rat.sub.len() != ind.module.size()).then(|| format!("Rat has {} of {} elements", rat.sub.len(), ind.module.size())),
    );
    let mut w = None;
    for (i, rep) in rat.representing.iter().enumerate() {
        let Some(rep) = rep else { continue };
        let parts: Vec<Elem> = rep.iter().map(|(j, c)| m.mc.pure(&ind.elems.elems[*j], c)).collect();
        let t = m.mc.result().sum(&parts);
        let x = &ind.elems.elems[i];
        if t != m.coaction.apply(x) {
            w = Some(format!("{}: recovered {}, original {}", m.carrier.label(x), m.show_tensor(&t), m.show_tensor(&m.coaction.apply(x))));
            break;
        }
    }
    r.push("recovered coaction = ρ", w);
    Ok(r)
}

/// Hom^C(M, N) = Hom_𝒜(M, N) as sets of tables.
pub fn hom_equality_check(p: &MeasuringPairing, m: &Semicomodule, n: &Semicomodule, budget: Budget) -> Result<ValidationReport> {
    let im = induced_action(p, m, budget)?;
    let inn = induced_action(p, n, budget)?;
    let colin: HashSet<Vec<usize>> = colinear_maps(m, n, budget)?
        .iter()
        .map(|f| f.to_table(&im.elems, &inn.elems).map(|t| t.images().to_vec()))
        .collect::<Result<_>>()?;
    let alin: HashSet<Vec<usize>> = hom_enumerate(&im.module, &inn.module, budget)?.maps.iter().map(|f| f.images().to_vec()).collect();
    let mut r = ValidationReport::new(format!("Hom^C({0}, {1}) = Hom_𝒜({0}, {1})", m.name, n.name));
    r.push(
        "same maps",
        (colin != alin).then(|| format!("{} colinear, {} 𝒜-linear, {} in common", colin.len(), alin.len(), colin.intersection(&alin).count())),
    );
    Ok(r)
}

/// (C*, ⋆_r) ≅ End^C(C) via f ↦ [c ↦ Σ f(c₁)c₂], inverse g ↦ ε∘g.
pub fn biend_check(c: &Arc<Semicoring>, budget: Budget) -> Result<ValidationReport> {
    let ds = dual_semiring(c, DualSide::Right, budget)?;
    let reg = Semicomodule::regular(c);
    let ends = colinear_maps(&reg, &reg, budget)?;
    let phi = |f: &LinearMap| {
        LinearMap::from_fn(&c.carrier, &c.carrier, |x| {
            let parts: Vec<Elem> = c.sweedler(x).iter().map(|(x1, x2)| c.carrier.lact(f.scalar_value(x1).expect("scalar"), x2)).collect();
            Ok(c.carrier.sum(&parts))
        })
    };
    let images = ds.functionals.iter().map(phi).collect::<Result<Vec<_>>>()?;
    let mut r = ValidationReport::new(format!("{}* ≅ End^C({})", c.name, c.name));
    let mut w = None;
    for (f, g) in ds.functionals.iter().zip(&images) {
        if let Some(v) = colinearity_violation(g, &reg, &reg)? {
            w = Some(format!("Φ({f}) not colinear: {v}"));
            break;
        }
    }
    r.push("Φ(f) colinear", w);
    r.push(
        "ε∘Φ(f) = f",
        ds.functionals.iter().zip(&images).find_map(|(f, g)| c.counit.compose(g).ok()?.differs_from(f).map(|v| format!("{f}: {v}"))),
    );
    let onto = ends.iter().find(|e| !images.iter().any(|g| g.equals(e)));
    r.push("Φ onto End^C(C)", onto.map(|e| format!("{e} is not of the form Φ(f)")));
    r.push(
        "|C*| = |End^C(C)|",
        (ends.len() != ds.functionals.len()).then(|| format!("{} functionals, {} colinear endomorphisms", ds.functionals.len(), ends.len())),
    );
    let n = images.len();
    let mut mul_w = None;
    'm: for i in 0..n {
        for j in 0..n {
            let prod = &images[ds.tables.mul[i][j]];
            if let Some(v) = prod.differs_from(&images[i].compose(&images[j])?) {
                mul_w = Some(format!("Φ(f⋆g) vs Φ(f)Φ(g) at ({}, {}): {v}", ds.tables.elements[i], ds.tables.elements[j]));
                break 'm;
            }
        }
    }
    r.push("Φ multiplicative", mul_w);
    r.push("Φ(ε) = id", images[ds.tables.one].differs_from(&LinearMap::identity(&c.carrier)));
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct Coequalizer {
    pub object: Semicomodule,
    pub projection: LinearMap,
    /// Colinear maps h with hf = hg that were factored through the projection.
    pub factored: usize,
    pub report: ValidationReport,
}

/// The coequalizer of colinear f, g: M → N, formed in modules; the universal property is tested
/// against every colinear map into the candidate comodules.
pub fn comodule_coequalizer(
    f: &LinearMap,
    g: &LinearMap,
    m: &Semicomodule,
    n: &Semicomodule,
    candidates: &[Semicomodule],
    budget: Budget,
) -> Result<Coequalizer> {
    for h in [f, g] {
        if let Some(w) = colinearity_violation(h, m, n)? {
            return Err(Error::Hypothesis(format!("{h} is not colinear: {w}")));
        }
    }
    let c = &m.coring;
    let n_en = n.carrier.to_finite(budget)?;
    let pairs: Vec<(usize, usize)> =
        m.carrier.enumerate(budget)?.iter().map(|x| (n_en.index_of(&f.apply(x)), n_en.index_of(&g.apply(x)))).collect();
    let (q_tab, pi_t) = Congruence::generated_by_pairs(&n_en.table, &pairs).quotient();
    let (qp, q_elems) = Module::from_finite(&q_tab)?;
    let qp = qp.with_name(format!("Coeq({}, {})", n.name, m.name));
    let pi = LinearMap::from_table(&n.carrier, &n_en.elems, &qp, &q_elems, &pi_t)?;
    let q_index: HashMap<&Elem, usize> = q_elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rep = vec![usize::MAX; q_tab.size()];
    for x in (0..n_en.elems.len()).rev() {
        rep[pi_t.apply(x)] = x;
    }
    let q_mc = tensor(&qp, &c.carrier)?;
    let pic = tensor_of_maps(&pi, &LinearMap::identity(&c.carrier), &n.mc, &q_mc)?;
    let object = Semicomodule::from_fn(qp.name().to_string(), c, qp.clone(), |_, e| {
        Ok(pic.apply(&n.coaction.apply(&n_en.elems[rep[q_index[e]]])))
    })?;
    let mut r = ValidationReport::new(format!("coequalizer of two maps {} → {}", m.name, n.name));
    r.extend("Coeq", check_comodule(&object)?);
    r.push("π colinear", colinearity_violation(&pi, n, &object)?);
    r.push("πf = πg", pi.compose(f)?.differs_from(&pi.compose(g)?));
    let mut factored = 0;
    let mut w = None;
    'p: for p in candidates {
        for h in colinear_maps(n, p, budget)? {
            if !h.compose(f)?.equals(&h.compose(g)?) {
                continue;
            }
            if let Some(x) = n_en.elems.iter().enumerate().find(|(i, x)| h.apply(x) != h.apply(&n_en.elems[rep[pi_t.apply(*i)]])) {
                w = Some(format!("{h} is not constant on the class of {}", n.carrier.label(x.1)));
                break 'p;
            }
            let k = match LinearMap::from_fn(&qp, &p.carrier, |e| Ok(h.apply(&n_en.elems[rep[q_index[e]]]))) {
                Ok(k) => k,
                Err(e) => {
                    w = Some(format!("factor of {h} is not linear: {e}"));
                    break 'p;
                }
            };
            if let Some(v) = colinearity_violation(&k, &object, p)? {
                w = Some(format!("factor of {h} is not colinear: {v}"));
                break 'p;
            }
            if let Some(v) = k.compose(&pi)?.differs_from(&h) {
                w = Some(format!("kπ ≠ h for {h}: {v}"));
                break 'p;
            }
            factored += 1;
        }
    }
    r.push("universal property on candidates", w);
    Ok(Coequalizer { object, projection: pi, factored, report: r })
}

#[derive(Debug, Clone)]
pub struct Equalizer {
    pub object: Semicomodule,
    pub inclusion: LinearMap,
    pub factored: usize,
    pub report: ValidationReport,
}

/// {m | f(m) = g(m)} with the restricted coaction. Refused unless the flatness certificate passed.
pub fn comodule_equalizer(
    f: &LinearMap,
    g: &LinearMap,
    m: &Semicomodule,
    n: &Semicomodule,
    certificate: &FlatnessReport,
    candidates: &[Semicomodule],
    budget: Budget,
) -> Result<Equalizer> {
    match &certificate.mono_flat_on_family {
        Outcome::Pass => {}
        Outcome::Fail(w) => {
            return Err(Error::Refused(format!("{} is not mono-flat on the certificate family: {w}", m.coring.name)));
        }
        Outcome::Undecided(w) => return Err(Error::Refused(format!("flatness of {} is undecided: {w}", m.coring.name))),
    }
    for h in [f, g] {
        if let Some(w) = colinearity_violation(h, m, n)? {
            return Err(Error::Hypothesis(format!("{h} is not colinear: {w}")));
        }
    }
    let c = &m.coring;
    let m_en = m.carrier.to_finite(budget)?;
    let members: Vec<usize> = (0..m_en.elems.len()).filter(|&i| f.apply(&m_en.elems[i]) == g.apply(&m_en.elems[i])).collect();
    let sub = Sub::from_elements(&m_en.table, &members)?;
    let (e_tab, incl) = sub.as_module();
    let (ep, eelems) = Module::from_finite(&e_tab)?;
    let ep = ep.with_name(format!("Eq({}, {})", m.name, n.name));
    let iota = LinearMap::from_table(&ep, &eelems, &m.carrier, &m_en.elems, &incl)?;
    let object = restrict_coaction(ep.name().to_string(), c, &ep, &iota, &m.mc, |e| Ok(m.coaction.apply(&iota.apply(e))), budget)?;
    let back: HashMap<Elem, Elem> = eelems.iter().map(|e| (iota.apply(e), e.clone())).collect();
    let mut r = ValidationReport::new(format!("equalizer of two maps {} → {}", m.name, n.name));
    r.extend("Eq", check_comodule(&object)?);
    r.push("ι colinear", colinearity_violation(&iota, &object, m)?);
    r.push("fι = gι", f.compose(&iota)?.differs_from(&g.compose(&iota)?));
    let mut factored = 0;
    let mut w = None;
    'p: for p in candidates {
        for h in colinear_maps(p, m, budget)? {
            if !f.compose(&h)?.equals(&g.compose(&h)?) {
                continue;
            }
            let k = LinearMap::from_fn(&p.carrier, &ep, |x| {
                back.get(&h.apply(x)).cloned().ok_or_else(|| Error::Hypothesis("h leaves the equalizer".into()))
            });
            let k = match k {
                Ok(k) => k,
                Err(e) => {
                    w = Some(format!("{h} does not factor: {e}"));
                    break 'p;
                }
            };
            if let Some(v) = colinearity_violation(&k, p, &object)? {
                w = Some(format!("factor of {h} is not colinear: {v}"));
                break 'p;
            }
            if let Some(v) = iota.compose(&k)?.differs_from(&h) {
                w = Some(format!("ιk ≠ h for {h}: {v}"));
                break 'p;
            }
            factored += 1;
        }
    }
    r.push("universal property on candidates", w);
    Ok(Equalizer { object, inclusion: iota, factored, report: r })
}

#[derive(Debug, Clone)]
pub struct FinitenessClosure {
    /// N = Σ mᵢ𝒜 inside the induced 𝒜-module.
    pub sub: Sub,
    pub comodule: Semicomodule,
    /// Generators of N over A.
    pub generators: Vec<String>,
    pub report: ValidationReport,
}

/// The subcomodule Σ m𝒜 over m ∈ F, for a completely subtractive comodule.
pub fn finiteness_closure(p: &MeasuringPairing, m: &Semicomodule, f: &[Elem], budget: Budget) -> Result<FinitenessClosure> {
    let en = m.carrier.to_finite(budget)?;
    if let Some(s) = all_subs(&en.table).into_iter().find(|s| !s.is_subtractive()) {
        let labels: Vec<String> = s.elements().iter().map(|&x| en.table.label(x).to_string()).collect();
        return Err(Error::Hypothesis(format!("{} is not completely subtractive: {{{}}} is not subtractive", m.name, labels.join(", "))));
    }
    let ind = induced_action(p, m, budget)?;
    let gens: Vec<usize> = f.iter().map(|e| ind.elems.index_of(e)).collect();
    let sub = Sub::generated(&ind.module, &gens);
    let (s_tab, incl) = sub.as_module();
    let s_a = s_tab.restrict(&p.unit)?;
    let (sp, selems) = Module::from_finite(&s_a)?;
    let sp = sp.with_name(format!("N({})", m.name));
    let iota = LinearMap::from_table(&sp, &selems, &m.carrier, &ind.elems.elems, &incl.with_source(Arc::new(s_a.clone())).with_target(en.table.clone()))?;
    let comodule = restrict_coaction(sp.name().to_string(), &m.coring, &sp, &iota, &m.mc, |e| Ok(m.coaction.apply(&iota.apply(e))), budget)?;
    let mut r = ValidationReport::new(format!("finiteness closure in {}", m.name));
    r.push("contains F", gens.iter().find(|&&x| !sub.contains(x)).map(|&x| ind.module.label(x).to_string()));
    r.extend("N", check_comodule(&comodule)?);
    r.push("inclusion colinear", colinearity_violation(&iota, &comodule, m)?);
    let generators = s_a.module_generators().iter().map(|&x| s_a.label(x).to_string()).collect();
    Ok(FinitenessClosure { sub, comodule, generators, report: r })
}

/// A pair of colinear maps f, g: M → N.
#[derive(Debug, Clone)]
pub struct ColinearPair {
    pub source: Semicomodule,
    pub target: Semicomodule,
    pub f: LinearMap,
    pub g: LinearMap,
}

/// Does every pair with f ≠ g get separated by some colinear h: N → Q⊗C?
pub fn cogenerator_probe(q: &Module, c: &Arc<Semicoring>, pairs: &[ColinearPair], budget: Budget) -> Result<Outcome> {
    let xc = tensor(q, &c.carrier)?;
    let id_c = LinearMap::identity(&c.carrier);
    for pr in pairs {
        if pr.f.equals(&pr.g) {
            continue;
        }
        let n = &pr.target;
        let mut separated = false;
        for k in linear_maps(&n.carrier, q, budget)? {
            let h = tensor_of_maps(&k, &id_c, &n.mc, &xc)?.compose(&n.coaction)?;
            if !h.compose(&pr.f)?.equals(&h.compose(&pr.g)?) {
                separated = true;
                break;
            }
        }
        if !separated {
            return Ok(Outcome::Fail(format!(
                "no colinear map {} → {}⊗{} separates {} and {}",
                n.name,
                q.name(),
                c.carrier.name(),
                pr.f,
                pr.g
            )));
        }
    }
    Ok(Outcome::Pass)
}

/// A comodule over a grouplike coring: X_i placed in degree i, ρ(x) = x⊗gᵢ.
pub fn graded_comodule(c: &Arc<Semicoring>, parts: &[(Module, usize)]) -> Result<Semicomodule> {
    let mods: Vec<Module> = parts.iter().map(|(m, _)| m.clone()).collect();
    let carrier = Module::direct_sum(&mods)?;
    let mut comp_of = Vec::new();
    for (k, (m, deg)) in parts.iter().enumerate() {
        if *deg >= c.carrier.comps().len() {
            return Err(Error::Parameter(format!("degree {deg} is not a basis element of {}", c.name)));
        }
        comp_of.extend(std::iter::repeat((k, *deg)).take(m.comps().len()));
    }
    let one = |deg: usize| c.carrier.embed(deg, CompElem::P(c.carrier.presented(deg).scalar_nf(c.base().one()).expect("free")));
    let name = parts.iter().map(|(m, d)| format!("{}·{}", m.name(), c.basis.as_ref().map_or(d.to_string(), |b| b[*d].clone()))).collect::<Vec<_>>().join("⊕");
    let carrier = carrier.with_name(name.clone());
    Semicomodule::from_fn(name, c, carrier.clone(), |t, x| {
        let terms: Vec<Elem> = x
            .0
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut only = carrier.zero();
                only.0[i] = v.clone();
                t.pure(&only, &one(comp_of[i].1))
            })
            .collect();
        Ok(t.result().sum(&terms))
    })
}

/// True when the carrier has only finitely generated atoms over a finite base.
pub fn is_tabulable(m: &Semicomodule) -> bool {
    m.carrier.is_finite() && m.carrier.comps().iter().all(|c| !matches!(c, Component::QmodZ))
}

#[allow(dead_code)]
fn table_of(f: &LinearMap, src: &Enumerated, tgt: &Enumerated) -> Result<TableMap> {
    f.to_table(src, tgt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coring::grouplike_data;

    fn grouplike() -> Arc<Semicoring> {
        Arc::new(grouplike_data(&Semiring::bool(), &["x", "y"]).unwrap().build().unwrap())
    }

    #[test]
    fn regular_comodule_passes() {
        let c = grouplike();
        assert!(check_comodule(&Semicomodule::regular(&c)).unwrap().passed());
    }

    #[test]
    fn counterexample_reproduces() {
        let t = two_coactions_counterexample(4, Budget::DEFAULT).unwrap();
        assert!(t.report.passed(), "{}", t.report);
    }

    #[test]
    fn dropped_summand_breaks_coassociativity() {
        let c = Arc::new(counterexample(4).unwrap());
        let g = c.carrier.unit(1, 0);
        let bad = Semicomodule::from_fn("bad", &c, Module::cyclic(4).unwrap(), |t, x| Ok(t.pure(x, &g))).unwrap();
        let r = check_comodule(&bad).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn grouplike_dual_pairing() {
        let c = grouplike();
        let p = MeasuringPairing::from_dual(&c, Budget::DEFAULT).unwrap();
        assert_eq!(p.algebra.size(), Some(4));
        let reg = Semicomodule::regular(&c);
        assert!(round_trip_check(&p, &reg, Budget::DEFAULT).unwrap().passed());
        assert!(rat_of_dual_check(&p, Budget::DEFAULT).unwrap().passed());
        assert!(biend_check(&c, Budget::DEFAULT).unwrap().passed());
    }

    #[test]
    fn alpha_fails_on_counterexample_carrier() {
        let p = counterexample_pairing(4).unwrap();
        let r = alpha_check(&p, &Module::cyclic(4).unwrap(), Budget::DEFAULT).unwrap();
        assert!(!r.injective.holds);
    }

    #[test]
    fn adjunction_on_grouplike() {
        let c = grouplike();
        let r = adjunction_check(&Semicomodule::regular(&c), &Module::base_module(&Semiring::bool()).unwrap(), Budget::DEFAULT).unwrap();
        assert!(r.passed(), "{r}");
    }
}
