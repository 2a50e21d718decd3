//! Family-relative probes and desk checks on tensor products: flatness, dual bases,
//! product interchange, unit laws and the kernel of a tensor of quotient maps.

use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::finite::{
    cancellative_reflection, finite_tensor_of_maps, find_isomorphism, quotient_by_sub, saturation_tensor, FiniteModule, Sub,
    TableMap,
};
use crate::linear::LinearMap;
use crate::module::{Component, Elem, Module};
use crate::report::{Flag, Outcome, ValidationReport};
use crate::semiring::Semiring;
use crate::tensor::{left_unitor, right_unitor, takahashi_tensor, tensor, tensor_of_maps, TensorProduct};

/// Whether the image of f is subtractive. `None` when this cannot be decided.
pub fn image_is_subtractive(f: &LinearMap, budget: Budget) -> Result<Option<bool>> {
    let (s, t) = (f.source(), f.target());
    if s.is_finite() && t.is_finite() {
        let src = s.to_finite(budget)?;
        let tgt = t.to_finite(budget)?;
        return Ok(Some(f.to_table(&src, &tgt)?.is_i_uniform()));
    }
    // A finite submonoid of a group is a subgroup, and subgroups are subtractive.
    let group = |m: &Module| {
        m.comps().iter().all(|c| match c {
            Component::QmodZ => true,
            Component::P(p) => matches!(p.kind, crate::module::AtomKind::Cyclic(_)),
        })
    };
    if s.is_finite() && group(s) && group(t) {
        return Ok(Some(true));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessReport {
    pub mono_flat_on_family: Outcome,
    pub uniformly_flat_on_family: Outcome,
}

/// Tests M ⊗ f for every monomorphism f in the family. A pass certifies only the family.
pub fn flatness_probe(m: &Module, family: &[LinearMap], budget: Budget) -> Result<FlatnessReport> {
    let mut mono = Outcome::Pass;
    let mut uniform = Outcome::Pass;
    for f in family {
        let (x, y) = (f.source(), f.target());
        if x.is_finite() {
            if let Some((a, b)) = f.injectivity_witness(budget)? {
                return Err(Error::Hypothesis(format!("family member {f} is not injective: {} and {} collide", x.label(&a), x.label(&b))));
            }
        }
        let member = |e: Error| match e {
            Error::Undecided { .. } | Error::NoRule(..) => Ok(Outcome::Undecided(format!("{}: {e}", f))),
            e => Err(e),
        };
        let (tx, ty) = match (tensor(m, x), tensor(m, y)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                let o = member(e)?;
                mono = mono.and(o.clone());
                uniform = uniform.and(o);
                continue;
            }
        };
        let mf = tensor_of_maps(&LinearMap::identity(m), f, &tx, &ty)?;
        let inj = if tx.result().is_finite() {
            match mf.injectivity_witness(budget) {
                Ok(None) => Outcome::Pass,
                Ok(Some((a, b))) => Outcome::Fail(collision(&tx, &mf, &a, &b)),
                Err(e) => member(e)?,
            }
        } else {
            Outcome::Undecided(format!("{} is infinite", tx.result().name()))
        };
        mono = mono.and(inj.clone());
        match image_is_subtractive(f, budget)? {
            Some(true) => {
                let sub = match image_is_subtractive(&mf, budget)? {
                    Some(true) => Outcome::Pass,
                    Some(false) => Outcome::Fail(format!("image of {} ⊗ {f} is not subtractive", m.name())),
                    None => Outcome::Undecided(format!("subtractivity of the image of {} ⊗ {f}", m.name())),
                };
                uniform = uniform.and(inj).and(sub);
            }
            Some(false) => {}
            None => uniform = uniform.and(Outcome::Undecided(format!("whether {f} is uniform"))),
        }
    }
    Ok(FlatnessReport { mono_flat_on_family: mono, uniformly_flat_on_family: uniform })
}

fn collision(t: &TensorProduct, f: &LinearMap, a: &Elem, b: &Elem) -> String {
    let show = |e: &Elem| {
        let parts: Vec<String> =
            t.decompose(e).iter().map(|(x, y)| format!("{}⊗{}", t.left().label(x), t.right().label(y))).collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    };
    format!("{} and {} both map to {}", show(a), show(b), f.target().label(&f.apply(a)))
}

/// The linear functionals P → S, for a finite P.
pub fn dual_functionals(p: &Module, budget: Budget) -> Result<Vec<LinearMap>> {
    let s = Module::base_module(p.base())?;
    let Some(scalars) = p.base().elements() else {
        if p.is_finite() {
            // Every element of a finite monoid has kx = lx with k ≠ l, so f(x) = 0 in NAT.
            return Ok(vec![LinearMap::zero(p, &s)]);
        }
        return Err(Error::Unsupported(format!("functionals on the infinite module {}", p.name())));
    };
    let gens = p.generators();
    let values: Vec<Elem> = scalars.iter().map(|&a| s.from_scalar(a).expect("scalar")).collect();
    let total = values.len().checked_pow(gens.len() as u32).filter(|&t| t <= budget.0);
    if total.is_none() {
        return Err(budget.exceeded(format!("enumerating functionals on {}", p.name())));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let mut cols = Vec::new();
        let mut k = 0;
        for c in p.comps() {
            let n = c.presented().expect("finite base has no QMODZ").nvars();
            cols.push(crate::linear::Column::Gens(idx[k..k + n].iter().map(|&i| values[i].clone()).collect()));
            k += n;
        }
        if let Ok(f) = LinearMap::new(p.clone(), s.clone(), cols) {
            out.push(f);
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < values.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// p = Σ p_λ · f_λ(p) for every p in a finite P.
pub fn dual_basis_check(p: &Module, pairs: &[(Elem, LinearMap)], budget: Budget) -> Result<Flag> {
    let s = Module::base_module(p.base())?;
    for x in p.enumerate(budget)? {
        let terms: Vec<Elem> = pairs
            .iter()
            .map(|(pl, f)| {
                let a = s.as_scalar(&f.apply(&x)).expect("functional into S");
                p.act(pl, a)
            })
            .collect();
        let back = p.sum(&terms);
        if back != x {
            return Ok(Flag::no(format!("Σ p_λ f_λ({}) = {}", p.label(&x), p.label(&back))));
        }
    }
    Ok(Flag::yes())
}

/// Searches dual bases of at most `bound` pairs. `Err(Undecided)` when the search space exceeds the budget.
pub fn search_dual_basis(p: &Module, bound: usize, budget: Budget) -> Result<Option<Vec<(Elem, LinearMap)>>> {
    let elems = p.enumerate(budget)?;
    let funcs = dual_functionals(p, budget)?;
    let s = Module::base_module(p.base())?;
    let candidates: Vec<(usize, usize)> = (1..elems.len())
        .flat_map(|e| (0..funcs.len()).map(move |f| (e, f)))
        .filter(|&(_, f)| funcs[f].differs_from(&LinearMap::zero(p, &s)).is_some())
        .collect();
    // value[c][x] = p_λ · f_λ(x)
    let value: Vec<Vec<Elem>> = candidates
        .iter()
        .map(|&(e, f)| elems.iter().map(|x| p.act(&elems[e], s.as_scalar(&funcs[f].apply(x)).expect("scalar"))).collect())
        .collect();
    let mut work = 0usize;
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        bound: usize,
        p: &Module,
        elems: &[Elem],
        value: &[Vec<Elem>],
        acc: Vec<Elem>,
        chosen: &mut Vec<usize>,
        work: &mut usize,
        budget: Budget,
    ) -> Result<bool> {
        *work += 1;
        if *work > budget.0 {
            return Err(budget.exceeded("dual basis search"));
        }
        if acc.iter().zip(elems).all(|(a, x)| a == x) {
            return Ok(true);
        }
        if chosen.len() == bound {
            return Ok(false);
        }
        for c in start..value.len() {
            let next: Vec<Elem> = acc.iter().zip(&value[c]).map(|(a, v)| p.add(a, v)).collect();
            chosen.push(c);
            if rec(c + 1, bound, p, elems, value, next, chosen, work, budget)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    // Smallest bases first.
    for b in 0..=bound {
        let zero = vec![p.zero(); elems.len()];
        if rec(0, b, p, &elems, &value, zero, &mut chosen, &mut work, budget)? {
            return Ok(Some(chosen.iter().map(|&c| (elems[candidates[c].0].clone(), funcs[candidates[c].1].clone())).collect()));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct ProductInterchange {
    pub map: LinearMap,
    pub injective: Option<bool>,
    pub surjective: Option<bool>,
}

/// φ: M ⊗ ∏ X_λ → ∏ (M ⊗ X_λ) for a finite family.
pub fn product_interchange(m: &Module, family: &[Module], budget: Budget) -> Result<ProductInterchange> {
    let product = if family.is_empty() { Module::zero_module(m.base()) } else { Module::direct_sum(family)? };
    let src = tensor(m, &product)?;
    let parts = family.iter().map(|x| tensor(m, x)).collect::<Result<Vec<_>>>()?;
    let results: Vec<Module> = parts.iter().map(|t| t.result().clone()).collect();
    let target = if results.is_empty() { Module::zero_module(m.base()) } else { Module::direct_sum(&results)? };
    let offsets: Vec<usize> = family.iter().scan(0, |o, x| { let r = *o; *o += x.comps().len(); Some(r) }).collect();
    let map = src.lift_bilinear(&target, |a, x| {
        let mut comps = Vec::new();
        for (k, t) in parts.iter().enumerate() {
            let n = family[k].comps().len();
            let xk = Elem(x.0[offsets[k]..offsets[k] + n].to_vec());
            comps.extend(t.pure(a, &xk).0);
        }
        Ok(Elem(comps))
    })?;
    let (injective, surjective) = if src.result().is_finite() && target.is_finite() {
        let s = src.result().to_finite(budget)?;
        let t = target.to_finite(budget)?;
        let tm = map.to_table(&s, &t)?;
        (Some(tm.is_injective()), Some(tm.is_surjective()))
    } else {
        (None, None)
    };
    Ok(ProductInterchange { map, injective, surjective })
}

/// Checks that f has a two-sided inverse g (compared on generators).
fn inverse_pair(f: &LinearMap, g: &LinearMap) -> Option<String> {
    let there = g.compose(f).ok()?;
    if let Some(w) = there.differs_from(&LinearMap::identity(f.source())) {
        return Some(format!("g∘f ≠ id {w}"));
    }
    let back = f.compose(g).ok()?;
    back.differs_from(&LinearMap::identity(f.target())).map(|w| format!("f∘g ≠ id {w}"))
}

/// ϑ^r and ϑ^l are isomorphisms, and M ⊠ S ≅ c(M) when M is finite.
pub fn unit_laws(m: &Module, budget: Budget) -> Result<ValidationReport> {
    let mut r = ValidationReport::new(format!("unit laws for {}", m.name()));
    let s = Module::base_module(m.base())?;
    let one = s.from_scalar(m.base().one()).expect("one");
    let (tr, theta_r) = right_unitor(m)?;
    let inv_r = LinearMap::from_fn(m, tr.result(), |x| Ok(tr.pure(x, &one)))?;
    r.push("M⊗S ≅ M", inverse_pair(&theta_r, &inv_r));
    let (tl, theta_l) = left_unitor(m)?;
    let inv_l = LinearMap::from_fn(m, tl.result(), |y| Ok(tl.pure(&one, y)))?;
    r.push("S⊗M ≅ M", inverse_pair(&theta_l, &inv_l));
    if m.is_finite() {
        let boxed = takahashi_tensor(m, &s, budget)?;
        let cm = cancellative_reflection(&m.to_finite(budget)?.table).0;
        r.push(
            "M⊠S ≅ c(M)",
            match find_isomorphism(&boxed, &cm) {
                Some(_) => None,
                None => Some(format!("|M⊠S| = {}, |c(M)| = {}", boxed.size(), cm.size())),
            },
        );
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BouReport {
    /// Ker(π_K⊗π_M) equals the closure of the two images.
    pub kernel_formula: Flag,
    pub surjective: bool,
    pub k_uniform: bool,
}

/// For K ≤ L and M ≤ N, compares Ker(π_K ⊗ π_M) with the closure of
/// (ι_K̄ ⊗ N)(K̄ ⊗ N) + (L ⊗ ι_M̄)(L ⊗ M̄).
pub fn bou_check(k: &Sub, m: &Sub, budget: Budget) -> Result<BouReport> {
    let (l, n) = (k.ambient().clone(), m.ambient().clone());
    let t = saturation_tensor(&l, &n, budget)?;
    let (kb, incl_k) = k.closure().as_module();
    let (mb, incl_m) = m.closure().as_module();
    let id_l = TableMap::identity(&l);
    let id_n = TableMap::identity(&n);
    let t1 = saturation_tensor(&kb, &n, budget)?;
    let t2 = saturation_tensor(&l, &mb, budget)?;
    let f1 = finite_tensor_of_maps(&incl_k, &id_n, &t1, &t)?;
    let f2 = finite_tensor_of_maps(&id_l, &incl_m, &t2, &t)?;
    let (lk, pk) = quotient_by_sub(k);
    let (nm, pm) = quotient_by_sub(m);
    let tq = saturation_tensor(&lk, &nm, budget)?;
    let pp = finite_tensor_of_maps(&pk, &pm, &t, &tq)?;
    let ambient: Arc<FiniteModule> = t.result.clone();
    let formula = f1.image().sum(&f2.image()).closure();
    let kernel = pp.kernel();
    let kernel_formula = match ambient.elements().find(|&x| formula.contains(x) != kernel.contains(x)) {
        None => Flag::yes(),
        Some(x) => Flag::no(format!(
            "{} is {} the kernel but {} the closure",
            ambient.label(x),
            if kernel.contains(x) { "in" } else { "outside" },
            if formula.contains(x) { "in" } else { "outside" }
        )),
    };
    Ok(BouReport { kernel_formula, surjective: pp.is_surjective(), k_uniform: pp.is_k_uniform() })
}

/// A base module as a finite table, for finite bases.
pub fn base_table(base: &Semiring) -> Result<Arc<FiniteModule>> {
    Ok(Arc::new(FiniteModule::free(base, 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_has_no_dual_basis_over_nat() {
        let c = Module::cyclic(2).unwrap();
        assert_eq!(search_dual_basis(&c, 4, Budget::DEFAULT).unwrap().map(|v| v.len()), None);
    }

    #[test]
    fn free_modules_have_dual_bases() {
        let p = Module::free(&Semiring::zmod(2), 2).unwrap();
        let basis = search_dual_basis(&p, 4, Budget::DEFAULT).unwrap().expect("free");
        assert_eq!(basis.len(), 2);
        assert!(dual_basis_check(&p, &basis, Budget::DEFAULT).unwrap().holds);
    }

    #[test]
    fn counterexample_carrier_is_not_mono_flat() {
        let c = Module::direct_sum(&[Module::nat(), Module::cyclic(4).unwrap()]).unwrap();
        let q = Module::qmodz();
        let z4 = Module::cyclic(4).unwrap();
        let iota = LinearMap::new(z4, q.clone(), vec![crate::linear::Column::Gens(vec![q.parse("1/4").unwrap()])]).unwrap();
        let r = flatness_probe(&c, &[iota.clone()], Budget::DEFAULT).unwrap();
        assert!(r.mono_flat_on_family.is_fail());
        let free = Module::free(&Semiring::Nat, 2).unwrap();
        assert!(flatness_probe(&free, &[iota], Budget::DEFAULT).unwrap().mono_flat_on_family.is_pass());
    }

    #[test]
    fn unit_laws_for_small_modules() {
        for m in [Module::cyclic(4).unwrap(), Module::bool_atom(), Module::qmodz(), Module::free(&Semiring::bool(), 2).unwrap()] {
            let r = unit_laws(&m, Budget::DEFAULT).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn product_interchange_over_bool() {
        let s = Semiring::bool();
        let m = Module::free(&s, 1).unwrap();
        let x = Module::base_module(&s).unwrap();
        let pi = product_interchange(&m, &[x.clone(), x], Budget::DEFAULT).unwrap();
        assert_eq!((pi.injective, pi.surjective), (Some(true), Some(true)));
    }
}
