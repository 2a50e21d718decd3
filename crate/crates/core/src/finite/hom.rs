use std::sync::Arc;

use super::map::TableMap;
use super::module::FiniteModule;
use crate::error::{Budget, Error, Result};

/// All linear maps M → N, with Hom(M, N) as a module under pointwise operations.
#[derive(Debug, Clone)]
pub struct HomSet {
    pub maps: Vec<TableMap>,
    /// Present when the base is commutative, so that (f·s)(m) = f(m)·s is linear again.
    pub module: Option<Arc<FiniteModule>>,
}

/// How to rebuild every element from generators: each entry is (element, step).
#[derive(Debug, Clone, Copy)]
enum Step {
    Gen(usize),
    Add(usize, usize),
    Right(usize, u64),
    Left(u64, usize),
}

fn derivation(m: &FiniteModule, gens: &[usize]) -> Vec<(usize, Step)> {
    let n = m.size();
    let mut known = vec![false; n];
    known[0] = true;
    let mut order: Vec<(usize, Step)> = Vec::new();
    let mut members = vec![0usize];
    for (i, &g) in gens.iter().enumerate() {
        if !known[g] {
            known[g] = true;
            order.push((g, Step::Gen(i)));
            members.push(g);
        }
    }
    let scalars = m.base().elements().unwrap_or_default();
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        let mut new = Vec::new();
        for &y in members.iter() {
            new.push((m.add(x, y), Step::Add(x, y)));
        }
        for &s in &scalars {
            new.push((m.act(x, s), Step::Right(x, s)));
            new.push((m.lact(s, x), Step::Left(s, x)));
        }
        for (z, st) in new {
            if !known[z] {
                known[z] = true;
                order.push((z, st));
                members.push(z);
            }
        }
        i += 1;
    }
    debug_assert!(known.iter().all(|&k| k), "generators must generate");
    order
}

fn extend(m: &FiniteModule, n: &FiniteModule, deriv: &[(usize, Step)], gen_images: &[usize]) -> Vec<usize> {
    let mut img = vec![0usize; m.size()];
    for &(x, st) in deriv {
        img[x] = match st {
            Step::Gen(i) => gen_images[i],
            Step::Add(a, b) => n.add(img[a], img[b]),
            Step::Right(a, s) => n.act(img[a], s),
            Step::Left(s, a) => n.lact(s, img[a]),
        };
    }
    img
}

/// Every linear map M → N, by backtracking over generator images.
pub fn hom_enumerate(m: &Arc<FiniteModule>, n: &Arc<FiniteModule>, budget: Budget) -> Result<HomSet> {
    if m.base() != n.base() {
        return Err(Error::BaseMismatch(format!("Hom({}, {})", m.name(), n.name())));
    }
    let gens = m.module_generators();
    let deriv = derivation(m, &gens);
    let candidates = (n.size() as f64).powi(gens.len() as i32);
    if candidates > budget.0 as f64 {
        return Err(budget.exceeded(format!("enumerating Hom({}, {})", m.name(), n.name())));
    }
    let mut maps = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let img = extend(m, n, &deriv, &choice);
        if let Ok(f) = TableMap::new(m.clone(), n.clone(), img) {
            maps.push(f);
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == choice.len() {
                let module = hom_module(m, n, &maps);
                return Ok(HomSet { maps, module });
            }
            choice[i] += 1;
            if choice[i] < n.size() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn hom_module(m: &Arc<FiniteModule>, n: &Arc<FiniteModule>, maps: &[TableMap]) -> Option<Arc<FiniteModule>> {
    if !m.base().is_commutative() {
        return None;
    }
    let index: std::collections::HashMap<&[usize], usize> =
        maps.iter().enumerate().map(|(i, f)| (f.images(), i)).collect();
    let idx = |img: &[usize]| *index.get(img).expect("Hom is closed");
    let labels = maps
        .iter()
        .map(|f| {
            format!("[{}]", m.elements().map(|x| n.label(f.apply(x)).to_string()).collect::<Vec<_>>().join(","))
        })
        .collect();
    // The all-zero choice comes first, so the zero map has index 0.
    debug_assert!(maps[0].images().iter().all(|&y| y == 0));
    let add = |a: usize, b: usize| idx(maps[a].plus(&maps[b]).images());
    let right = |a: usize, s: u64| idx(&maps[a].images().iter().map(|&y| n.act(y, s)).collect::<Vec<_>>());
    Some(Arc::new(FiniteModule::from_fns(
        m.base(),
        format!("Hom({},{})", m.name(), n.name()),
        labels,
        add,
        right,
        None,
    )))
}

/// Searches for an isomorphism M → N by mapping generators.
pub fn find_isomorphism(m: &Arc<FiniteModule>, n: &Arc<FiniteModule>) -> Option<TableMap> {
    if m.size() != n.size() || m.base() != n.base() {
        return None;
    }
    let gens = m.module_generators();
    let deriv = derivation(m, &gens);
    let mut choice = vec![0usize; gens.len()];
    loop {
        let img = extend(m, n, &deriv, &choice);
        if let Ok(f) = TableMap::new(m.clone(), n.clone(), img) {
            if f.is_bijective() {
                return Some(f);
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return None;
            }
            choice[i] += 1;
            if choice[i] < n.size() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
