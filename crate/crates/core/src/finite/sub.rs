use std::collections::HashSet;
use std::sync::Arc;

use super::map::TableMap;
use super::module::FiniteModule;
use crate::error::{Error, Result};

/// A subsemimodule of a finite module, stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sub {
    ambient: Arc<FiniteModule>,
    mask: Vec<bool>,
}

impl Sub {
    pub(crate) fn from_mask_unchecked(ambient: Arc<FiniteModule>, mask: Vec<bool>) -> Self {
        Sub { ambient, mask }
    }

    /// The smallest subsemimodule containing `gens`.
    pub fn generated(ambient: &Arc<FiniteModule>, gens: &[usize]) -> Self {
        let mask = ambient.closure_of(gens);
        Sub { ambient: ambient.clone(), mask }
    }

    pub fn zero(ambient: &Arc<FiniteModule>) -> Self {
        Sub::generated(ambient, &[])
    }

    pub fn whole(ambient: &Arc<FiniteModule>) -> Self {
        Sub { ambient: ambient.clone(), mask: vec![true; ambient.size()] }
    }

    /// Accepts an explicit element set, rejecting it with a witness unless it is closed.
    pub fn from_elements(ambient: &Arc<FiniteModule>, elements: &[usize]) -> Result<Self> {
        if let Some(&bad) = elements.iter().find(|&&x| x >= ambient.size()) {
            return Err(Error::Format(format!("element {bad} outside {}", ambient.name())));
        }
        let mut mask = vec![false; ambient.size()];
        for &x in elements {
            mask[x] = true;
        }
        let closed = ambient.closure_of(elements);
        if let Some(x) = closed.iter().zip(&mask).position(|(c, m)| *c && !*m) {
            return Err(Error::Hypothesis(format!(
                "not a subsemimodule of {}: {} is forced in",
                ambient.name(),
                ambient.label(x)
            )));
        }
        Ok(Sub { ambient: ambient.clone(), mask })
    }

    pub fn ambient(&self) -> &Arc<FiniteModule> {
        &self.ambient
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&i| self.mask[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_subset_of(&self, other: &Sub) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b)
    }

    /// L̄ = {g | g + l′ = l″ for some l′, l″ ∈ L}.
    pub fn closure(&self) -> Sub {
        let m = &self.ambient;
        let els = self.elements();
        let mask = m
            .elements()
            .map(|g| els.iter().any(|&l1| self.mask[m.add(g, l1)]))
            .collect();
        Sub { ambient: m.clone(), mask }
    }

    pub fn is_subtractive(&self) -> bool {
        self.closure() == *self
    }

    /// L + L′, the subsemimodule generated by both.
    pub fn sum(&self, other: &Sub) -> Sub {
        let mut gens = self.elements();
        gens.extend(other.elements());
        Sub::generated(&self.ambient, &gens)
    }

    pub fn intersection(&self, other: &Sub) -> Sub {
        Sub {
            ambient: self.ambient.clone(),
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect(),
        }
    }

    /// The subobject as a module in its own right, with its inclusion.
    pub fn as_module(&self) -> (Arc<FiniteModule>, TableMap) {
        let amb = &self.ambient;
        let els = self.elements();
        let pos = |x: usize| els.binary_search(&x).expect("closed");
        let left: Option<&dyn Fn(u64, usize) -> usize> =
            if amb.is_symmetric() { None } else { Some(&|s, i| pos(amb.lact(s, els[i]))) };
        let m = FiniteModule::from_fns(
            amb.base(),
            format!("sub({})", amb.name()),
            els.iter().map(|&x| amb.label(x).to_string()).collect(),
            |a, b| pos(amb.add(els[a], els[b])),
            |a, s| pos(amb.act(els[a], s)),
            left,
        );
        let m = Arc::new(m);
        let incl = TableMap::new_unchecked(m.clone(), amb.clone(), els.clone()).expect("inclusion");
        (m, incl)
    }

    /// Pushes the subobject forward along a map.
    pub fn image_under(&self, f: &TableMap) -> Sub {
        let mut mask = vec![false; f.target().size()];
        for x in self.elements() {
            mask[f.apply(x)] = true;
        }
        Sub { ambient: f.target().clone(), mask }
    }

    pub fn preimage_under(f: &TableMap, target_sub: &Sub) -> Sub {
        Sub {
            ambient: f.source().clone(),
            mask: f.source().elements().map(|x| target_sub.contains(f.apply(x))).collect(),
        }
    }
}

/// Every subsemimodule of a finite module, in a deterministic order.
pub fn all_subs(m: &Arc<FiniteModule>) -> Vec<Sub> {
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let zero = Sub::zero(m);
    seen.insert(zero.mask.clone());
    let mut out = vec![zero];
    let mut i = 0;
    while i < out.len() {
        let cur = out[i].clone();
        for x in m.elements() {
            if cur.contains(x) {
                continue;
            }
            let mut gens = cur.elements();
            gens.push(x);
            let s = Sub::generated(m, &gens);
            if seen.insert(s.mask.clone()) {
                out.push(s);
            }
        }
        i += 1;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.mask.cmp(&a.mask)));
    out
}
