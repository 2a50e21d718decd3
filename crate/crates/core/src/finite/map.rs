use std::sync::Arc;

use super::module::FiniteModule;
use super::sub::Sub;
use crate::error::{Error, Result};
use crate::report::Flag;

/// A linear map between finite modules, stored as its table of images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMap {
    source: Arc<FiniteModule>,
    target: Arc<FiniteModule>,
    images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapPredicates {
    pub injective: Flag,
    pub surjective: Flag,
    pub i_uniform: Flag,
    pub k_uniform: Flag,
    pub uniform: Flag,
}

pub(crate) fn same_module(a: &Arc<FiniteModule>, b: &Arc<FiniteModule>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl TableMap {
    /// Validates additivity and compatibility with both actions.
    pub fn new(source: Arc<FiniteModule>, target: Arc<FiniteModule>, images: Vec<usize>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, images)?;
        if let Some(w) = f.linearity_violation() {
            return Err(Error::NotLinear(w));
        }
        Ok(f)
    }

    /// Checks shape only.
    pub fn new_unchecked(source: Arc<FiniteModule>, target: Arc<FiniteModule>, images: Vec<usize>) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::BaseMismatch(format!("{} → {}", source.name(), target.name())));
        }
        if images.len() != source.size() {
            return Err(Error::Format(format!("map table has {} entries, expected {}", images.len(), source.size())));
        }
        if images.iter().any(|&x| x >= target.size()) {
            return Err(Error::Format("map value outside target".into()));
        }
        Ok(TableMap { source, target, images })
    }

    pub fn linearity_violation(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        let f = |x: usize| self.images[x];
        if f(0) != 0 {
            return Some(format!("f(0) = {}", t.label(f(0))));
        }
        for a in s.elements() {
            for b in s.elements() {
                if f(s.add(a, b)) != t.add(f(a), f(b)) {
                    return Some(format!("f({}+{}) ≠ f({})+f({})", s.label(a), s.label(b), s.label(a), s.label(b)));
                }
            }
        }
        for sc in s.test_scalars() {
            for a in s.elements() {
                if f(s.act(a, sc)) != t.act(f(a), sc) {
                    return Some(format!("f({}·{}) ≠ f({})·{}", s.label(a), s.base().label(sc), s.label(a), s.base().label(sc)));
                }
                if f(s.lact(sc, a)) != t.lact(sc, f(a)) {
                    return Some(format!("f({}·{}) ≠ {}·f({})", s.base().label(sc), s.label(a), s.base().label(sc), s.label(a)));
                }
            }
        }
        None
    }

    pub fn identity(m: &Arc<FiniteModule>) -> Self {
        TableMap { source: m.clone(), target: m.clone(), images: m.elements().collect() }
    }

    pub fn zero(source: &Arc<FiniteModule>, target: &Arc<FiniteModule>) -> Self {
        TableMap { source: source.clone(), target: target.clone(), images: vec![0; source.size()] }
    }

    pub fn source(&self) -> &Arc<FiniteModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteModule> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, m: usize) -> usize {
        self.images[m]
    }

    /// `self ∘ before`.
    pub fn compose(&self, before: &TableMap) -> Result<TableMap> {
        if !same_module(&before.target, &self.source) {
            return Err(Error::NotComposable(format!(
                "{} → {} then {} → {}",
                before.source.name(),
                before.target.name(),
                self.source.name(),
                self.target.name()
            )));
        }
        Ok(TableMap {
            source: before.source.clone(),
            target: self.target.clone(),
            images: before.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    /// Pointwise sum of two parallel maps.
    pub fn plus(&self, other: &TableMap) -> TableMap {
        TableMap {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.iter().zip(&other.images).map(|(&a, &b)| self.target.add(a, b)).collect(),
        }
    }

    /// Same map with a different (equal) target object.
    pub fn with_target(&self, target: Arc<FiniteModule>) -> TableMap {
        assert_eq!(target.size(), self.target.size());
        TableMap { target, ..self.clone() }
    }

    pub fn with_source(&self, source: Arc<FiniteModule>) -> TableMap {
        assert_eq!(source.size(), self.source.size());
        TableMap { source, ..self.clone() }
    }

    pub fn kernel(&self) -> Sub {
        Sub::from_mask_unchecked(self.source.clone(), self.images.iter().map(|&x| x == 0).collect())
    }

    pub fn image(&self) -> Sub {
        let mut mask = vec![false; self.target.size()];
        for &x in &self.images {
            mask[x] = true;
        }
        Sub::from_mask_unchecked(self.target.clone(), mask)
    }

    /// Coker f = N/≡_{f(M)} with its projection.
    pub fn cokernel(&self) -> (Arc<FiniteModule>, TableMap) {
        super::Congruence::mod_sub(&self.image()).quotient()
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    fn injectivity_witness(&self) -> Option<(usize, usize)> {
        let mut seen = vec![usize::MAX; self.target.size()];
        for (m, &y) in self.images.iter().enumerate() {
            if seen[y] != usize::MAX {
                return Some((seen[y], m));
            }
            seen[y] = m;
        }
        None
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.size()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> Option<TableMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.target.size()];
        for (m, &y) in self.images.iter().enumerate() {
            inv[y] = m;
        }
        Some(TableMap { source: self.target.clone(), target: self.source.clone(), images: inv })
    }

    fn k_uniform_witness(&self) -> Option<(usize, usize)> {
        let s = &self.source;
        let ker = self.kernel();
        let ker_el = ker.elements();
        for a in s.elements() {
            for b in (a + 1)..s.size() {
                if self.images[a] != self.images[b] {
                    continue;
                }
                let fixable =
                    ker_el.iter().any(|&k| ker_el.iter().any(|&k2| s.add(a, k) == s.add(b, k2)));
                if !fixable {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_k_uniform(&self) -> bool {
        self.k_uniform_witness().is_none()
    }

    pub fn is_i_uniform(&self) -> bool {
        self.image().is_subtractive()
    }

    pub fn predicates(&self) -> MapPredicates {
        let (s, t) = (&self.source, &self.target);
        let injective = match self.injectivity_witness() {
            None => Flag::yes(),
            Some((a, b)) => Flag::no(format!("f({}) = f({})", s.label(a), s.label(b))),
        };
        let img = self.image();
        let surjective = match t.elements().find(|&y| !img.contains(y)) {
            None => Flag::yes(),
            Some(y) => Flag::no(format!("{} not in the image", t.label(y))),
        };
        let closure = img.closure();
        let i_uniform = match t.elements().find(|&y| closure.contains(y) && !img.contains(y)) {
            None => Flag::yes(),
            Some(y) => Flag::no(format!("{} lies in the closure of the image but not in the image", t.label(y))),
        };
        let k_uniform = match self.k_uniform_witness() {
            None => Flag::yes(),
            Some((a, b)) => Flag::no(format!(
                "f({}) = f({}) but no kernel elements k, k′ give {}+k = {}+k′",
                s.label(a),
                s.label(b),
                s.label(a),
                s.label(b)
            )),
        };
        let uniform = match (&i_uniform.witness, &k_uniform.witness) {
            (None, None) => Flag::yes(),
            (Some(w), _) | (None, Some(w)) => Flag::no(w.clone()),
        };
        MapPredicates { injective, surjective, i_uniform, k_uniform, uniform }
    }

    /// Two maps g, h with g∘f = h∘f but g ≠ h, showing f is not epic; `None` if f is surjective.
    /// Dually `not_monic_witness` finds elements a ≠ b with f(a) = f(b).
    pub fn not_monic_witness(&self) -> Option<(usize, usize)> {
        self.injectivity_witness()
    }
}

/// The induced map M/Ker f → f(M), if f is k-uniform it is an isomorphism.
pub fn first_iso_map(f: &TableMap) -> Result<TableMap> {
    let (q, pi) = super::Congruence::mod_sub(&f.kernel()).quotient();
    let (img, incl) = f.image().as_module();
    // Each class maps to f of any representative; ≡_{Ker f} classes have a single f-value.
    let mut images = vec![usize::MAX; q.size()];
    for m in f.source().elements() {
        let c = pi.apply(m);
        let y = f.apply(m);
        let yi = incl.images().iter().position(|&z| z == y).expect("in image");
        if images[c] != usize::MAX && images[c] != yi {
            return Err(Error::Internal("f is not constant on ≡_{Ker f} classes".into()));
        }
        images[c] = yi;
    }
    TableMap::new(q, img, images)
}
