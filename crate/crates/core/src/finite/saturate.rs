//! Tensor products of finite modules by saturation: enumerate formal sums of pure-tensor
//! symbols, merging nodes with union-find until every relation holds at every node.

use std::collections::VecDeque;
use std::sync::Arc;

use super::map::TableMap;
use super::module::{Action, FiniteModule};
use crate::error::{Budget, Error, Result};

type Word = Vec<usize>;

struct Enumeration {
    next: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    ngens: usize,
    budget: Budget,
}

impl Enumeration {
    fn new(ngens: usize, budget: Budget) -> Self {
        Enumeration { next: vec![vec![None; ngens]], parent: vec![0], ngens, budget }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn step(&mut self, x: usize, g: usize) -> Result<usize> {
        let x = self.find(x);
        if let Some(y) = self.next[x][g] {
            return Ok(self.find(y));
        }
        if self.parent.len() >= self.budget.0 {
            return Err(self.budget.exceeded("tensor saturation"));
        }
        let y = self.parent.len();
        self.parent.push(y);
        self.next.push(vec![None; self.ngens]);
        self.next[x][g] = Some(y);
        Ok(y)
    }

    fn trace(&mut self, x: usize, w: &[usize]) -> Result<usize> {
        w.iter().try_fold(x, |x, &g| self.step(x, g))
    }

    fn coincide(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::from([(a, b)]);
        while let Some((a, b)) = queue.pop_front() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, drop) = (a.min(b), a.max(b));
            self.parent[drop] = keep;
            for g in 0..self.ngens {
                if let Some(t) = self.next[drop][g] {
                    match self.next[keep][g] {
                        None => self.next[keep][g] = Some(t),
                        Some(u) => queue.push_back((t, u)),
                    }
                }
            }
        }
    }

    fn alive(&mut self, x: usize) -> bool {
        self.find(x) == x
    }
}

/// M ⊗ N of finite modules, with the pure tensor table and a decomposition of every element.
#[derive(Debug, Clone)]
pub struct FiniteTensor {
    pub left: Arc<FiniteModule>,
    pub right: Arc<FiniteModule>,
    pub result: Arc<FiniteModule>,
    /// `pure[m][n]` is the element m⊗n.
    pub pure: Vec<Vec<usize>>,
    /// Each element as a sum of pure tensors (m, n).
    pub decompositions: Vec<Vec<(usize, usize)>>,
}

impl FiniteTensor {
    pub fn pure(&self, m: usize, n: usize) -> usize {
        self.pure[m][n]
    }
}

fn relations(m: &FiniteModule, n: &FiniteModule, sym: &dyn Fn(usize, usize) -> Word) -> Vec<(Word, Word)> {
    let mut rels = Vec::new();
    let concat = |a: Word, b: Word| a.into_iter().chain(b).collect::<Word>();
    for a in m.elements() {
        for b in m.elements() {
            for y in n.elements() {
                rels.push((sym(m.add(a, b), y), concat(sym(a, y), sym(b, y))));
            }
        }
    }
    for x in m.elements() {
        for a in n.elements() {
            for b in n.elements() {
                rels.push((sym(x, n.add(a, b)), concat(sym(x, a), sym(x, b))));
            }
        }
    }
    if let Some(scalars) = m.base().elements() {
        for x in m.elements() {
            for y in n.elements() {
                for &s in &scalars {
                    rels.push((sym(m.act(x, s), y), sym(x, n.lact(s, y))));
                }
            }
        }
    }
    rels.retain(|(u, v)| u != v);
    rels.sort();
    rels.dedup();
    rels
}

pub fn saturation_tensor(m: &Arc<FiniteModule>, n: &Arc<FiniteModule>, budget: Budget) -> Result<FiniteTensor> {
    if m.base() != n.base() {
        return Err(Error::BaseMismatch(format!("{} ⊗ {}", m.name(), n.name())));
    }
    let (mm, nn) = (m.size(), n.size());
    // Symbols for pairs of nonzero elements.
    let gen_of = |x: usize, y: usize| (x - 1) * (nn - 1) + (y - 1);
    let ngens = (mm - 1) * (nn - 1);
    let sym = |x: usize, y: usize| if x == 0 || y == 0 { Vec::new() } else { vec![gen_of(x, y)] };
    let mut rels = relations(m, n, &sym);
    for a in 0..ngens {
        for b in a + 1..ngens {
            rels.push((vec![a, b], vec![b, a]));
        }
    }
    let mut e = Enumeration::new(ngens, budget);
    let mut i = 0;
    while i < e.parent.len() {
        if e.alive(i) {
            for (u, v) in &rels {
                if !e.alive(i) {
                    break;
                }
                let a = e.trace(i, u)?;
                let b = e.trace(i, v)?;
                e.coincide(a, b);
            }
            for g in 0..ngens {
                if e.alive(i) {
                    e.step(i, g)?;
                }
            }
        }
        i += 1;
    }
    // Number the surviving nodes breadth-first from 0, recording a word for each.
    let mut index = vec![usize::MAX; e.parent.len()];
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut order = vec![e.find(0)];
    index[order[0]] = 0;
    let mut k = 0;
    while k < order.len() {
        let x = order[k];
        for g in 0..ngens {
            let y = e.step(x, g)?;
            if index[y] == usize::MAX {
                index[y] = order.len();
                order.push(y);
                let mut w = words[k].clone();
                w.push(g);
                words.push(w);
            }
        }
        k += 1;
    }
    let size = order.len();
    let node = |e: &mut Enumeration, w: &[usize]| -> Result<usize> {
        let x = e.trace(order[0], w)?;
        let x = e.find(x);
        Ok(index[x])
    };
    let mut add = vec![vec![0; size]; size];
    for a in 0..size {
        for b in 0..size {
            let x = e.trace(order[a], &words[b])?;
            add[a][b] = index[e.find(x)];
        }
    }
    let pairs_of = |w: &Word| -> Vec<(usize, usize)> { w.iter().map(|&g| (g / (nn - 1) + 1, g % (nn - 1) + 1)).collect() };
    let decompositions: Vec<Vec<(usize, usize)>> = words.iter().map(pairs_of).collect();
    let mut pure = vec![vec![0; nn]; mm];
    for x in 1..mm {
        for y in 1..nn {
            pure[x][y] = node(&mut e, &[gen_of(x, y)])?;
        }
    }
    let sum_pure = |add: &Vec<Vec<usize>>, ps: &mut dyn Iterator<Item = usize>| ps.fold(0, |acc, p| add[acc][p]);
    let (right, left) = match m.base().elements() {
        None => (Action::Additive, None),
        Some(scalars) => {
            let r: Vec<Vec<usize>> = decompositions
                .iter()
                .map(|d| scalars.iter().map(|&s| sum_pure(&add, &mut d.iter().map(|&(x, y)| pure[x][n.act(y, s)]))).collect())
                .collect();
            let l: Vec<Vec<usize>> = decompositions
                .iter()
                .map(|d| scalars.iter().map(|&s| sum_pure(&add, &mut d.iter().map(|&(x, y)| pure[m.lact(s, x)][y]))).collect())
                .collect();
            let left = if l == r { None } else { Some(Action::Table(l)) };
            (Action::Table(r), left)
        }
    };
    let labels = decompositions
        .iter()
        .map(|d| {
            if d.is_empty() {
                "0".to_string()
            } else {
                d.iter().map(|&(x, y)| format!("{}⊗{}", m.label(x), n.label(y))).collect::<Vec<_>>().join("+")
            }
        })
        .collect();
    let result = FiniteModule::from_tables(m.base().clone(), format!("{}⊗{}", m.name(), n.name()), labels, add, right, left)?;
    Ok(FiniteTensor { left: m.clone(), right: n.clone(), result: Arc::new(result), pure, decompositions })
}

/// f ⊗ g between saturated tensor products, checked against every defining relation.
pub fn finite_tensor_of_maps(f: &TableMap, g: &TableMap, src: &FiniteTensor, tgt: &FiniteTensor) -> Result<TableMap> {
    let image = |w: &[(usize, usize)]| w.iter().fold(0, |acc, &(x, y)| tgt.result.add(acc, tgt.pure[f.apply(x)][g.apply(y)]));
    let (m, n) = (&src.left, &src.right);
    let sym = |x: usize, y: usize| if x == 0 || y == 0 { Vec::new() } else { vec![(x, y)] };
    let concat = |a: Vec<(usize, usize)>, b: Vec<(usize, usize)>| a.into_iter().chain(b).collect::<Vec<_>>();
    let mut rels: Vec<(Vec<(usize, usize)>, Vec<(usize, usize)>)> = Vec::new();
    for a in m.elements() {
        for b in m.elements() {
            for y in n.elements() {
                rels.push((sym(m.add(a, b), y), concat(sym(a, y), sym(b, y))));
            }
        }
    }
    for x in m.elements() {
        for a in n.elements() {
            for b in n.elements() {
                rels.push((sym(x, n.add(a, b)), concat(sym(x, a), sym(x, b))));
            }
        }
    }
    if let Some(scalars) = m.base().elements() {
        for x in m.elements() {
            for y in n.elements() {
                for &s in &scalars {
                    rels.push((sym(m.act(x, s), y), sym(x, n.lact(s, y))));
                }
            }
        }
    }
    if let Some((u, v)) = rels.iter().find(|(u, v)| image(u) != image(v)) {
        return Err(Error::Internal(format!("f⊗g does not respect the relation {u:?} = {v:?}")));
    }
    let images = src.decompositions.iter().map(|d| image(d)).collect();
    TableMap::new(src.result.clone(), tgt.result.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;

    #[test]
    fn coprime_cyclics_vanish() {
        let a = Arc::new(FiniteModule::cyclic(2).unwrap());
        let b = Arc::new(FiniteModule::cyclic(3).unwrap());
        assert_eq!(saturation_tensor(&a, &b, Budget::DEFAULT).unwrap().result.size(), 1);
        let c = Arc::new(FiniteModule::cyclic(4).unwrap());
        assert_eq!(saturation_tensor(&a, &c, Budget::DEFAULT).unwrap().result.size(), 2);
    }

    #[test]
    fn bool_tensor_cyclic_vanishes() {
        let b = Arc::new(FiniteModule::bool_over_nat());
        let c = Arc::new(FiniteModule::cyclic(3).unwrap());
        assert_eq!(saturation_tensor(&b, &c, Budget::DEFAULT).unwrap().result.size(), 1);
        assert_eq!(saturation_tensor(&b, &b, Budget::DEFAULT).unwrap().result.size(), 2);
    }

    #[test]
    fn free_over_bool_is_a_unit() {
        let s = Arc::new(FiniteModule::free(&Semiring::bool(), 1).unwrap());
        let m = Arc::new(FiniteModule::free(&Semiring::bool(), 2).unwrap());
        let t = saturation_tensor(&s, &m, Budget::DEFAULT).unwrap();
        assert_eq!(t.result.size(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let a = Arc::new(FiniteModule::cyclic(4).unwrap());
        assert!(matches!(saturation_tensor(&a, &a, Budget(3)), Err(Error::Undecided { .. })));
    }
}
