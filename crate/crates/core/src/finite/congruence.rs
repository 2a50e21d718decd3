use std::sync::Arc;

use super::map::TableMap;
use super::module::FiniteModule;
use super::sub::Sub;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CongruenceKind {
    /// m₁ ≡_L m₂ iff m₁ + l₁ = m₂ + l₂.
    ModL,
    /// m₁ [≡]_L m₂ iff m₁ + l₁ + m′ = m₂ + l₂ + m′.
    BracketL,
    Custom,
}

/// A congruence on a finite module; each element is labelled by the least element of its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    ambient: Arc<FiniteModule>,
    kind: CongruenceKind,
    witness: Option<Sub>,
    class_of: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }

    fn labels(mut self) -> Vec<usize> {
        (0..self.0.len()).map(|x| self.find(x)).collect()
    }
}

impl Congruence {
    pub fn mod_sub(l: &Sub) -> Congruence {
        let m = l.ambient();
        let els = l.elements();
        // m₁ and m₂ are related when their translates by L meet.
        let mut owner = vec![usize::MAX; m.size()];
        let mut uf = UnionFind::new(m.size());
        for x in m.elements() {
            for &k in &els {
                let v = m.add(x, k);
                if owner[v] == usize::MAX {
                    owner[v] = x;
                } else {
                    uf.union(owner[v], x);
                }
            }
        }
        Congruence { ambient: m.clone(), kind: CongruenceKind::ModL, witness: Some(l.clone()), class_of: uf.labels() }
    }

    pub fn bracket_sub(l: &Sub) -> Congruence {
        let m = l.ambient();
        let els = l.elements();
        let mut uf = UnionFind::new(m.size());
        for shift in m.elements() {
            let mut owner = vec![usize::MAX; m.size()];
            for x in m.elements() {
                for &k in &els {
                    let v = m.add(m.add(x, k), shift);
                    if owner[v] == usize::MAX {
                        owner[v] = x;
                    } else {
                        uf.union(owner[v], x);
                    }
                }
            }
        }
        Congruence {
            ambient: m.clone(),
            kind: CongruenceKind::BracketL,
            witness: Some(l.clone()),
            class_of: uf.labels(),
        }
    }

    /// A user-supplied partition, given as a class label per element.
    pub fn custom(ambient: &Arc<FiniteModule>, labels: &[usize]) -> Result<Congruence> {
        let m = ambient;
        if labels.len() != m.size() {
            return Err(Error::Format(format!("partition has {} entries, expected {}", labels.len(), m.size())));
        }
        let mut class_of = vec![0; m.size()];
        for x in m.elements() {
            class_of[x] = (0..=x).find(|&y| labels[y] == labels[x]).expect("reflexive");
        }
        let same = |a: usize, b: usize| class_of[a] == class_of[b];
        let scalars = m.test_scalars();
        for a in m.elements() {
            for b in m.elements() {
                if !same(a, b) {
                    continue;
                }
                for z in m.elements() {
                    if !same(m.add(a, z), m.add(b, z)) {
                        return Err(Error::Hypothesis(format!(
                            "not a congruence: {} ~ {} but {}+{} ≁ {}+{}",
                            m.label(a),
                            m.label(b),
                            m.label(a),
                            m.label(z),
                            m.label(b),
                            m.label(z)
                        )));
                    }
                }
                for &s in &scalars {
                    if !same(m.act(a, s), m.act(b, s)) || !same(m.lact(s, a), m.lact(s, b)) {
                        return Err(Error::Hypothesis(format!(
                            "not a congruence: {} ~ {} but not after acting by {}",
                            m.label(a),
                            m.label(b),
                            m.base().label(s)
                        )));
                    }
                }
            }
        }
        Ok(Congruence { ambient: m.clone(), kind: CongruenceKind::Custom, witness: None, class_of })
    }

    /// The least congruence relating each given pair.
    pub fn generated_by_pairs(ambient: &Arc<FiniteModule>, pairs: &[(usize, usize)]) -> Congruence {
        let m = ambient;
        let mut uf = UnionFind::new(m.size());
        for &(a, b) in pairs {
            uf.union(a, b);
        }
        let scalars = m.test_scalars();
        loop {
            let mut changed = false;
            for a in m.elements() {
                for b in (a + 1)..m.size() {
                    if uf.find(a) != uf.find(b) {
                        continue;
                    }
                    for z in m.elements() {
                        changed |= uf.union(m.add(a, z), m.add(b, z));
                    }
                    for &s in &scalars {
                        changed |= uf.union(m.act(a, s), m.act(b, s));
                        changed |= uf.union(m.lact(s, a), m.lact(s, b));
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Congruence { ambient: m.clone(), kind: CongruenceKind::Custom, witness: None, class_of: uf.labels() }
    }

    pub fn kind(&self) -> CongruenceKind {
        self.kind
    }

    pub fn witness(&self) -> Option<&Sub> {
        self.witness.as_ref()
    }

    pub fn ambient(&self) -> &Arc<FiniteModule> {
        &self.ambient
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Least representatives of the classes, ascending.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.class_of.len()).filter(|&x| self.class_of[x] == x).collect()
    }

    pub fn class_count(&self) -> usize {
        self.representatives().len()
    }

    /// The quotient module and the projection onto it.
    pub fn quotient(&self) -> (Arc<FiniteModule>, TableMap) {
        let m = &self.ambient;
        let reps = self.representatives();
        let idx = |x: usize| reps.binary_search(&self.class_of[x]).expect("representative");
        let left: Option<&dyn Fn(u64, usize) -> usize> =
            if m.is_symmetric() { None } else { Some(&|s, c| idx(m.lact(s, reps[c]))) };
        let q = FiniteModule::from_fns(
            m.base(),
            format!("{}/~", m.name()),
            reps.iter().map(|&r| format!("[{}]", m.label(r))).collect(),
            |a, b| idx(m.add(reps[a], reps[b])),
            |a, s| idx(m.act(reps[a], s)),
            left,
        );
        let q = Arc::new(q);
        let pi = TableMap::new_unchecked(m.clone(), q.clone(), m.elements().map(idx).collect()).expect("projection");
        (q, pi)
    }
}

/// c(M) = M/[≡]_{0} with its projection.
pub fn cancellative_reflection(m: &Arc<FiniteModule>) -> (Arc<FiniteModule>, TableMap) {
    Congruence::bracket_sub(&Sub::zero(m)).quotient()
}

/// M/L := M/≡_L.
pub fn quotient_by_sub(l: &Sub) -> (Arc<FiniteModule>, TableMap) {
    Congruence::mod_sub(l).quotient()
}
