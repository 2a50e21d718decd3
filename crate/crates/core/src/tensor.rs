//! Tensor products of presented modules: an atom rule table, with rewriting
//! completion for the atom pairs no rule covers.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Budget, Error, Result};
use crate::finite::{cancellative_reflection, FiniteModule};
use crate::linear::LinearMap;
use crate::module::{frac, AtomKind, CompElem, Component, Elem, Module, Presented, Q};
use crate::rewrite::{RewriteSystem, Vector};
use crate::semiring::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Atom rules where one applies, completion otherwise.
    Rules,
    /// Completion for every pair of presented atoms.
    Completion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginKind {
    /// S ⊗ N ≅ N.
    FreeLeft,
    /// M ⊗ S ≅ M.
    FreeRight,
    /// CYCLIC(a) ⊗ CYCLIC(b) ≅ CYCLIC(gcd(a, b)).
    CyclicGcd,
    BoolBool,
    /// QMODZ ⊗ NAT ≅ QMODZ.
    QLeftNat,
    /// NAT ⊗ QMODZ ≅ QMODZ.
    NatLeftQ,
    /// The pair tensors to zero.
    Vanishes,
    Completion,
}

/// The piece of the result contributed by one pair of atoms.
#[derive(Debug, Clone)]
pub struct Origin {
    pub lc: usize,
    pub rc: usize,
    pub kind: OriginKind,
    /// Index of the result component; `None` when the pair vanishes.
    pub comp: Option<usize>,
    /// `gen_reps[g][h]` is g⊗h in the result component.
    pub gen_reps: Vec<Vec<Vector>>,
    /// A pure tensor (x, y) with x⊗y equal to each result generator.
    pub sections: Vec<(CompElem, CompElem)>,
}

#[derive(Debug, Clone)]
pub struct TensorProduct {
    left: Module,
    right: Module,
    result: Module,
    origins: Vec<Origin>,
    origin_of: Vec<Vec<usize>>,
}

pub fn tensor(m: &Module, n: &Module) -> Result<TensorProduct> {
    TensorProduct::new(m, n, Strategy::Rules, Budget::DEFAULT)
}

fn is_free_nat(p: &Presented) -> bool {
    matches!(&p.kind, AtomKind::Free { scalar_nf, .. } if scalar_nf.is_empty())
}

/// `Σ_i c_i v_i` without normalizing.
fn raw_combination(len: usize, terms: impl IntoIterator<Item = (u64, Vector)>) -> Vector {
    let mut acc = vec![0u64; len];
    for (c, v) in terms {
        for (a, x) in acc.iter_mut().zip(&v) {
            *a += c * x;
        }
    }
    acc
}

impl TensorProduct {
    /// M ⊗ N for a right module M and a left module N. The result keeps the left action of M
    /// and the right action of N.
    pub fn new(m: &Module, n: &Module, strategy: Strategy, budget: Budget) -> Result<TensorProduct> {
        if m.base() != n.base() {
            return Err(Error::BaseMismatch(format!("{} ⊗ {}", m.name(), n.name())));
        }
        if !m.base().is_commutative() {
            return Err(Error::Unsupported(format!("structured tensors over the non-commutative {}", m.base().name())));
        }
        let mut comps = Vec::new();
        let mut origins = Vec::new();
        let mut origin_of = vec![vec![0; n.comps().len()]; m.comps().len()];
        for (lc, a) in m.comps().iter().enumerate() {
            for (rc, b) in n.comps().iter().enumerate() {
                let (kind, piece) = pair(a, b, strategy, budget)?;
                let comp = piece.as_ref().map(|_| comps.len());
                let (gen_reps, sections) = match piece {
                    Some((c, reps, secs)) => {
                        comps.push(c);
                        (reps, secs)
                    }
                    None => (Vec::new(), Vec::new()),
                };
                origin_of[lc][rc] = origins.len();
                origins.push(Origin { lc, rc, kind, comp, gen_reps, sections });
            }
        }
        let result = Module::new(m.base().clone(), format!("{}⊗{}", paren(m.name()), paren(n.name())), comps)?;
        Ok(TensorProduct { left: m.clone(), right: n.clone(), result, origins, origin_of })
    }

    pub fn left(&self) -> &Module {
        &self.left
    }

    pub fn right(&self) -> &Module {
        &self.right
    }

    pub fn result(&self) -> &Module {
        &self.result
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    pub fn origin(&self, lc: usize, rc: usize) -> &Origin {
        &self.origins[self.origin_of[lc][rc]]
    }

    /// x ⊗ y.
    pub fn pure(&self, x: &Elem, y: &Elem) -> Elem {
        let mut raw = self.result.zero().0;
        for o in &self.origins {
            let Some(k) = o.comp else { continue };
            let (a, b) = (&x.0[o.lc], &y.0[o.rc]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            match (o.kind, &mut raw[k]) {
                (OriginKind::QLeftNat, CompElem::Q(acc)) => *acc = frac(*acc + Q::from_integer(b.vector()[0] as i64) * a.q()),
                (OriginKind::NatLeftQ, CompElem::Q(acc)) => *acc = frac(*acc + Q::from_integer(a.vector()[0] as i64) * b.q()),
                (_, CompElem::P(acc)) => {
                    for (g, &cg) in a.vector().iter().enumerate() {
                        if cg == 0 {
                            continue;
                        }
                        for (h, &ch) in b.vector().iter().enumerate() {
                            if ch == 0 {
                                continue;
                            }
                            for (s, r) in acc.iter_mut().zip(&o.gen_reps[g][h]) {
                                *s += cg * ch * r;
                            }
                        }
                    }
                }
                _ => unreachable!("origin kind matches its component"),
            }
        }
        self.normalize(raw)
    }

    fn normalize(&self, raw: Vec<CompElem>) -> Elem {
        Elem(
            raw.into_iter()
                .zip(self.result.comps())
                .map(|(x, c)| match (x, c) {
                    (CompElem::P(v), Component::P(p)) => CompElem::P(p.normalize(v)),
                    (x, _) => x,
                })
                .collect(),
        )
    }

    /// Pure tensors summing to `t`.
    pub fn decompose(&self, t: &Elem) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for o in &self.origins {
            let Some(k) = o.comp else { continue };
            match &t.0[k] {
                CompElem::Q(q) => {
                    if *q.numer() == 0 {
                        continue;
                    }
                    let one = CompElem::P(vec![1]);
                    let (x, y) = match o.kind {
                        OriginKind::QLeftNat => (CompElem::Q(*q), one),
                        _ => (one, CompElem::Q(*q)),
                    };
                    out.push((self.left.embed(o.lc, x), self.right.embed(o.rc, y)));
                }
                CompElem::P(v) => {
                    for (i, &c) in v.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        let (x, y) = &o.sections[i];
                        let x = self.left.nat_mul(c, &self.left.embed(o.lc, x.clone()));
                        out.push((x, self.right.embed(o.rc, y.clone())));
                    }
                }
            }
        }
        out
    }

    /// The linear map M⊗N → target induced by a balanced bilinear map.
    pub fn lift_bilinear<F>(&self, target: &Module, b: F) -> Result<LinearMap>
    where
        F: Fn(&Elem, &Elem) -> Result<Elem>,
    {
        LinearMap::from_fn(&self.result, target, |t| {
            let parts = self.decompose(t).iter().map(|(x, y)| b(x, y)).collect::<Result<Vec<_>>>()?;
            Ok(target.sum(&parts))
        })
    }

    /// Every element with the budget, as a finite table.
    pub fn to_finite(&self, budget: Budget) -> Result<crate::module::Enumerated> {
        self.result.to_finite(budget)
    }
}

fn paren(name: &str) -> String {
    if name.contains('⊗') || name.contains('⊕') {
        format!("({name})")
    } else {
        name.to_string()
    }
}

type Piece = Option<(Component, Vec<Vec<Vector>>, Vec<(CompElem, CompElem)>)>;

fn pair(a: &Component, b: &Component, strategy: Strategy, budget: Budget) -> Result<(OriginKind, Piece)> {
    match (a, b) {
        (Component::QmodZ, Component::QmodZ) => Err(Error::NoRule("QMODZ".into(), "QMODZ".into())),
        (Component::QmodZ, Component::P(p)) => q_pair(p, OriginKind::QLeftNat, true),
        (Component::P(p), Component::QmodZ) => q_pair(p, OriginKind::NatLeftQ, false),
        (Component::P(p), Component::P(q)) => {
            if strategy == Strategy::Rules {
                if let Some(r) = rule(p, q) {
                    return Ok(r);
                }
            }
            Ok(complete_pair(p, q, budget)?)
        }
    }
}

fn q_pair(p: &Arc<Presented>, nat: OriginKind, q_left: bool) -> Result<(OriginKind, Piece)> {
    if is_free_nat(p) {
        return Ok((nat, Some((Component::QmodZ, Vec::new(), Vec::new()))));
    }
    // Over NAT a finite atom is killed by QMODZ: some multiple of every element is idempotent.
    if p.rs.is_finite() {
        return Ok((OriginKind::Vanishes, None));
    }
    let (l, r) = if q_left { ("QMODZ".to_string(), p.label.clone()) } else { (p.label.clone(), "QMODZ".to_string()) };
    Err(Error::NoRule(l, r))
}

fn single(c: Component) -> Piece {
    Some((c, vec![vec![vec![1]]], vec![(CompElem::P(vec![1]), CompElem::P(vec![1]))]))
}

fn rule(p: &Arc<Presented>, q: &Arc<Presented>) -> Option<(OriginKind, Piece)> {
    if let AtomKind::Free { gen_scalars, scalar_nf } = &p.kind {
        // s ⊗ n ↦ s·n
        let reps = gen_scalars.iter().map(|&s| (0..q.nvars()).map(|h| q.lact(s, &q.unit(h))).collect()).collect();
        let one = if scalar_nf.is_empty() { vec![1] } else { scalar_nf[1].clone() };
        let secs = (0..q.nvars()).map(|h| (CompElem::P(one.clone()), CompElem::P(q.unit(h)))).collect();
        return Some((OriginKind::FreeLeft, Some((Component::P(q.clone()), reps, secs))));
    }
    if let AtomKind::Free { gen_scalars, scalar_nf } = &q.kind {
        let reps = (0..p.nvars()).map(|g| gen_scalars.iter().map(|&s| p.act(&p.unit(g), s)).collect()).collect();
        let one = if scalar_nf.is_empty() { vec![1] } else { scalar_nf[1].clone() };
        let secs = (0..p.nvars()).map(|g| (CompElem::P(p.unit(g)), CompElem::P(one.clone()))).collect();
        return Some((OriginKind::FreeRight, Some((Component::P(p.clone()), reps, secs))));
    }
    match (&p.kind, &q.kind) {
        (AtomKind::Cyclic(a), AtomKind::Cyclic(b)) => {
            let g = a.gcd(b);
            if g == 1 {
                Some((OriginKind::Vanishes, None))
            } else {
                let c = if g == *a { p.clone() } else if g == *b { q.clone() } else { Arc::new(Presented::cyclic(g).ok()?) };
                Some((OriginKind::CyclicGcd, single(Component::P(c))))
            }
        }
        (AtomKind::Bool, AtomKind::Bool) => Some((OriginKind::BoolBool, single(Component::P(p.clone())))),
        (AtomKind::Bool, AtomKind::Cyclic(_)) | (AtomKind::Cyclic(_), AtomKind::Bool) => Some((OriginKind::Vanishes, None)),
        _ => None,
    }
}

/// Presentation of p ⊗ q on the pair generators g⊗h.
fn complete_pair(p: &Arc<Presented>, q: &Arc<Presented>, budget: Budget) -> Result<(OriginKind, Piece)> {
    let (np, nq) = (p.nvars(), q.nvars());
    let nv = np * nq;
    let var = |g: usize, h: usize| g * nq + h;
    let left_of = |v: &[u64], h: usize| raw_combination(nv, v.iter().enumerate().map(|(g, &c)| (c, rewrite_unit(nv, var(g, h)))));
    let right_of = |g: usize, v: &[u64]| raw_combination(nv, v.iter().enumerate().map(|(h, &c)| (c, rewrite_unit(nv, var(g, h)))));
    let mut rels = Vec::new();
    for r in p.rs.rules() {
        for h in 0..nq {
            rels.push((left_of(&r.lhs, h), left_of(&r.rhs, h)));
        }
    }
    for r in q.rs.rules() {
        for g in 0..np {
            rels.push((right_of(g, &r.lhs), right_of(g, &r.rhs)));
        }
    }
    let scalars: Vec<Scalar> = match &p.right {
        Some(t) => (0..t.first().map_or(0, |row| row.len()) as Scalar).collect(),
        None => Vec::new(),
    };
    for g in 0..np {
        for h in 0..nq {
            for &s in &scalars {
                let l = left_of(&p.act(&p.unit(g), s), h);
                let r = right_of(g, &q.lact(s, &q.unit(h)));
                if l != r {
                    rels.push((l, r));
                }
            }
        }
    }
    rels.retain(|(l, r)| l != r);
    let rs = RewriteSystem::complete(nv, rels, budget)?;
    let gens: Vec<String> = (0..np).flat_map(|g| (0..nq).map(move |h| (g, h))).map(|(g, h)| format!("{}⊗{}", p.gens[g], q.gens[h])).collect();
    let right = q.right.as_ref().map(|_| {
        (0..np)
            .flat_map(|g| (0..nq).map(move |h| (g, h)))
            .map(|(g, h)| scalars.iter().map(|&s| rs.normalize(right_of(g, &q.act(&q.unit(h), s)))).collect())
            .collect::<Vec<Vec<Vector>>>()
    });
    let left = p.right.as_ref().map(|_| {
        (0..np)
            .flat_map(|g| (0..nq).map(move |h| (g, h)))
            .map(|(g, h)| scalars.iter().map(|&s| rs.normalize(left_of(&p.lact(s, &p.unit(g)), h))).collect())
            .collect::<Vec<Vec<Vector>>>()
    });
    let left = if left == right { None } else { left };
    let atom = Presented {
        label: format!("{}⊗{}", paren(&p.label), paren(&q.label)),
        kind: AtomKind::Generic,
        gens,
        rs,
        right,
        left,
        names: Default::default(),
    };
    if atom.is_trivial() {
        return Ok((OriginKind::Completion, None));
    }
    let reps = (0..np).map(|g| (0..nq).map(|h| atom.normalize(rewrite_unit(nv, var(g, h)))).collect()).collect();
    let secs = (0..np).flat_map(|g| (0..nq).map(move |h| (g, h))).map(|(g, h)| (CompElem::P(p.unit(g)), CompElem::P(q.unit(h)))).collect();
    Ok((OriginKind::Completion, Some((Component::P(Arc::new(atom)), reps, secs))))
}

fn rewrite_unit(n: usize, i: usize) -> Vector {
    crate::rewrite::unit(n, i)
}

/// f ⊗ g: src.left ⊗ src.right → tgt.left ⊗ tgt.right.
pub fn tensor_of_maps(f: &LinearMap, g: &LinearMap, src: &TensorProduct, tgt: &TensorProduct) -> Result<LinearMap> {
    if !f.source().same_as(src.left()) || !g.source().same_as(src.right()) {
        return Err(Error::NotComposable("maps do not start at the tensor factors".into()));
    }
    if !f.target().same_as(tgt.left()) || !g.target().same_as(tgt.right()) {
        return Err(Error::NotComposable("maps do not end at the tensor factors".into()));
    }
    src.lift_bilinear(tgt.result(), |x, y| Ok(tgt.pure(&f.apply(x), &g.apply(y))))
        .map_err(|e| match e {
            Error::NotLinear(w) => Error::Internal(format!("f⊗g is not well defined: {w}")),
            e => e,
        })
}

/// ϑ^l: S ⊗ N → N, s⊗n ↦ s·n.
pub fn left_unitor(n: &Module) -> Result<(TensorProduct, LinearMap)> {
    let s = Module::base_module(n.base())?;
    let t = tensor(&s, n)?;
    let map = t.lift_bilinear(n, |a, y| {
        let k = s.as_scalar(a).ok_or_else(|| Error::Internal("not a scalar".into()))?;
        Ok(n.lact(k, y))
    })?;
    Ok((t, map))
}

/// ϑ^r: M ⊗ S → M, m⊗s ↦ m·s.
pub fn right_unitor(m: &Module) -> Result<(TensorProduct, LinearMap)> {
    let s = Module::base_module(m.base())?;
    let t = tensor(m, &s)?;
    let map = t.lift_bilinear(m, |x, a| {
        let k = s.as_scalar(a).ok_or_else(|| Error::Internal("not a scalar".into()))?;
        Ok(m.act(x, k))
    })?;
    Ok((t, map))
}

/// The maps (M⊗N)⊗P ⇄ M⊗(N⊗P) and the four tensor products involved.
#[derive(Debug, Clone)]
pub struct Associator {
    pub mn: TensorProduct,
    pub mn_p: TensorProduct,
    pub np: TensorProduct,
    pub m_np: TensorProduct,
    pub forward: LinearMap,
    pub backward: LinearMap,
}

pub fn associator(m: &Module, n: &Module, p: &Module) -> Result<Associator> {
    let mn = tensor(m, n)?;
    let mn_p = tensor(mn.result(), p)?;
    let np = tensor(n, p)?;
    let m_np = tensor(m, np.result())?;
    let forward = mn_p.lift_bilinear(m_np.result(), |u, z| {
        let parts: Vec<Elem> = mn.decompose(u).iter().map(|(x, y)| m_np.pure(x, &np.pure(y, z))).collect();
        Ok(m_np.result().sum(&parts))
    })?;
    let backward = m_np.lift_bilinear(mn_p.result(), |x, v| {
        let parts: Vec<Elem> = np.decompose(v).iter().map(|(y, z)| mn_p.pure(&mn.pure(x, y), z)).collect();
        Ok(mn_p.result().sum(&parts))
    })?;
    Ok(Associator { mn, mn_p, np, m_np, forward, backward })
}

/// c(M ⊗ N), the cancellative reflection of a finite tensor product.
pub fn takahashi_tensor(m: &Module, n: &Module, budget: Budget) -> Result<Arc<FiniteModule>> {
    let t = tensor(m, n)?;
    let e = t.to_finite(budget)?;
    Ok(cancellative_reflection(&e.table).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;

    #[test]
    fn cyclic_pairs_follow_gcd() {
        let t = tensor(&Module::cyclic(4).unwrap(), &Module::cyclic(6).unwrap()).unwrap();
        assert_eq!(t.result().atoms(), "CYCLIC(2)");
        let t = tensor(&Module::cyclic(2).unwrap(), &Module::cyclic(3).unwrap()).unwrap();
        assert!(t.result().comps().is_empty());
    }

    #[test]
    fn completion_agrees_with_gcd_rule() {
        let a = Module::cyclic(4).unwrap();
        let b = Module::cyclic(6).unwrap();
        let t = TensorProduct::new(&a, &b, Strategy::Completion, Budget::DEFAULT).unwrap();
        assert_eq!(t.result().enumerate(Budget::DEFAULT).unwrap().len(), 2);
        let t = TensorProduct::new(&Module::bool_atom(), &b, Strategy::Completion, Budget::DEFAULT).unwrap();
        assert!(t.result().comps().is_empty());
    }

    #[test]
    fn counterexample_square_has_four_atoms() {
        let c = Module::direct_sum(&[Module::nat(), Module::cyclic(3).unwrap()]).unwrap();
        let t = tensor(&c, &c).unwrap();
        assert_eq!(t.result().atoms(), "NAT ⊕ CYCLIC(3) ⊕ CYCLIC(3) ⊕ CYCLIC(3)");
        let x = c.parse("(2, 1)").unwrap();
        let y = c.parse("(1, 2)").unwrap();
        let xy = t.pure(&x, &y);
        assert_eq!(t.result().label(&xy), "(2, 1, 1, 2)");
        let back: Vec<Elem> = t.decompose(&xy).iter().map(|(a, b)| t.pure(a, b)).collect();
        assert_eq!(t.result().sum(&back), xy);
    }

    #[test]
    fn unitors_over_finite_bases() {
        for base in [Semiring::bool(), Semiring::zmod(3)] {
            let m = Module::free(&base, 2).unwrap();
            let (t, r) = right_unitor(&m).unwrap();
            assert!(r.injectivity_witness(Budget::DEFAULT).unwrap().is_none());
            assert_eq!(t.result().enumerate(Budget::DEFAULT).unwrap().len(), m.enumerate(Budget::DEFAULT).unwrap().len());
            let (_, l) = left_unitor(&m).unwrap();
            assert!(l.injectivity_witness(Budget::DEFAULT).unwrap().is_none());
        }
    }

    #[test]
    fn qmodz_rules() {
        let q = Module::qmodz();
        let t = tensor(&q, &Module::nat()).unwrap();
        assert_eq!(t.result().atoms(), "QMODZ");
        assert!(tensor(&q, &Module::cyclic(4).unwrap()).unwrap().result().comps().is_empty());
        assert!(matches!(tensor(&q, &q), Err(Error::NoRule(..))));
    }

    #[test]
    fn associator_round_trip() {
        let c = Module::direct_sum(&[Module::nat(), Module::cyclic(2).unwrap()]).unwrap();
        let a = associator(&c, &c, &c).unwrap();
        let id = LinearMap::identity(a.mn_p.result());
        assert!(a.backward.compose(&a.forward).unwrap().equals(&id));
    }
}
