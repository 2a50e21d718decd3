//! Convergent rewriting systems for finitely presented commutative monoids.
//!
//! Elements of the free commutative monoid on `n` generators are exponent vectors.
//! A relation set is completed into a reduced convergent system under the
//! degree-lexicographic order; normal forms are then canonical class representatives.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use crate::error::{Budget, Result};

pub type Vector = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Vector,
    pub rhs: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteSystem {
    nvars: usize,
    rules: Vec<Rule>,
}

/// Degree-lexicographic order on exponent vectors.
pub fn deglex(a: &[u64], b: &[u64]) -> Ordering {
    let da: u128 = a.iter().map(|&x| x as u128).sum();
    let db: u128 = b.iter().map(|&x| x as u128).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn divides(l: &[u64], v: &[u64]) -> bool {
    l.iter().zip(v).all(|(a, b)| a <= b)
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn add(a: &[u64], b: &[u64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(k: u64, a: &[u64]) -> Vector {
    a.iter().map(|x| x * k).collect()
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&x| x == 0)
}

impl RewriteSystem {
    /// The free commutative monoid on `nvars` generators.
    pub fn free(nvars: usize) -> Self {
        RewriteSystem { nvars, rules: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Completes a set of relations into a reduced convergent system.
    ///
    /// Termination follows from Dickson's lemma; the budget bounds the number of
    /// processed pairs and fails with `Undecided` instead of truncating.
    pub fn complete(nvars: usize, relations: Vec<(Vector, Vector)>, budget: Budget) -> Result<Self> {
        let mut sys = RewriteSystem { nvars, rules: Vec::new() };
        let mut queue: VecDeque<(Vector, Vector)> = relations.into_iter().collect();
        let mut work = 0usize;
        while let Some((a, b)) = queue.pop_front() {
            work += 1;
            if work > budget.0 {
                return Err(budget.exceeded("completing a monoid presentation"));
            }
            let a = sys.normalize(a);
            let b = sys.normalize(b);
            if a == b {
                continue;
            }
            let (lhs, rhs) = if deglex(&a, &b) == Ordering::Greater { (a, b) } else { (b, a) };
            // Rules whose left side the new rule reduces are turned back into relations.
            let mut kept = Vec::with_capacity(sys.rules.len() + 1);
            for r in sys.rules.drain(..) {
                if divides(&lhs, &r.lhs) {
                    queue.push_back((r.lhs, r.rhs));
                } else {
                    kept.push(r);
                }
            }
            sys.rules = kept;
            for r in &sys.rules {
                if !disjoint(&r.lhs, &lhs) {
                    let lcm: Vector = r.lhs.iter().zip(&lhs).map(|(x, y)| *x.max(y)).collect();
                    let s1: Vector = lcm.iter().zip(&r.lhs).zip(&r.rhs).map(|((l, a), b)| l - a + b).collect();
                    let s2: Vector = lcm.iter().zip(&lhs).zip(&rhs).map(|((l, a), b)| l - a + b).collect();
                    queue.push_back((s1, s2));
                }
            }
            sys.rules.push(Rule { lhs, rhs });
            let snapshot = sys.clone();
            for r in sys.rules.iter_mut() {
                r.rhs = snapshot.normalize(std::mem::take(&mut r.rhs));
            }
            if sys.rules.len() > budget.0 {
                return Err(budget.exceeded("completing a monoid presentation"));
            }
        }
        sys.rules.sort_by(|x, y| deglex(&x.lhs, &y.lhs));
        Ok(sys)
    }

    /// Rewrites to the unique irreducible representative.
    pub fn normalize(&self, mut v: Vector) -> Vector {
        debug_assert_eq!(v.len(), self.nvars);
        'outer: loop {
            for r in &self.rules {
                if !divides(&r.lhs, &v) {
                    continue;
                }
                let t = times_applicable(r, &v);
                for i in 0..v.len() {
                    v[i] = v[i] + t * r.rhs[i] - t * r.lhs[i];
                }
                continue 'outer;
            }
            return v;
        }
    }

    pub fn is_normal(&self, v: &[u64]) -> bool {
        !self.rules.iter().any(|r| divides(&r.lhs, v))
    }

    /// Finite iff every generator has a pure power among the leading terms.
    pub fn is_finite(&self) -> bool {
        (0..self.nvars).all(|i| {
            self.rules.iter().any(|r| r.lhs[i] > 0 && r.lhs.iter().enumerate().all(|(j, &x)| j == i || x == 0))
        })
    }

    /// All normal forms, in breadth-first order from zero; fails past the budget.
    pub fn enumerate(&self, budget: Budget) -> Result<Vec<Vector>> {
        let zero = vec![0; self.nvars];
        let mut seen: HashSet<Vector> = HashSet::new();
        let mut out = vec![zero.clone()];
        seen.insert(zero);
        let mut i = 0;
        while i < out.len() {
            for g in 0..self.nvars {
                let mut w = out[i].clone();
                w[g] += 1;
                let w = self.normalize(w);
                if seen.insert(w.clone()) {
                    if out.len() >= budget.0 {
                        return Err(budget.exceeded("enumerating normal forms"));
                    }
                    out.push(w);
                }
            }
            i += 1;
        }
        Ok(out)
    }
}

/// How many times a rule can be applied in one step without changing the result.
fn times_applicable(r: &Rule, v: &[u64]) -> u64 {
    let max_by_lhs = r
        .lhs
        .iter()
        .zip(v)
        .filter(|(l, _)| **l > 0)
        .map(|(l, x)| x / l)
        .min()
        .unwrap_or(1);
    if disjoint(&r.lhs, &r.rhs) {
        return max_by_lhs.max(1);
    }
    if r.rhs.iter().zip(&r.lhs).all(|(b, a)| b <= a) {
        // Each step removes lhs - rhs; keep going while lhs still divides.
        let mut t = u64::MAX;
        for i in 0..v.len() {
            let d = r.lhs[i] - r.rhs[i];
            if d > 0 {
                t = t.min((v[i] - r.lhs[i]) / d + 1);
            }
        }
        return t.max(1);
    }
    1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sys(n: usize, rels: &[(&[u64], &[u64])]) -> RewriteSystem {
        RewriteSystem::complete(n, rels.iter().map(|(a, b)| (a.to_vec(), b.to_vec())).collect(), Budget::DEFAULT)
            .unwrap()
    }

    #[test]
    fn cyclic_relations_reduce_by_gcd() {
        let s = sys(1, &[(&[4], &[0]), (&[6], &[0])]);
        assert_eq!(s.rules(), &[Rule { lhs: vec![2], rhs: vec![0] }]);
        assert_eq!(s.enumerate(Budget::DEFAULT).unwrap().len(), 2);
    }

    #[test]
    fn idempotent_generator() {
        let s = sys(1, &[(&[2], &[1])]);
        assert_eq!(s.normalize(vec![1000]), vec![1]);
        assert!(s.is_finite());
    }

    #[test]
    fn large_multiplicities_reduce_quickly() {
        let s = sys(2, &[(&[4, 0], &[0, 0]), (&[0, 3], &[0, 1])]);
        assert_eq!(s.normalize(vec![1_000_003, 1_000_000]), vec![3, 2]);
    }

    #[test]
    fn free_monoid_is_infinite() {
        let s = RewriteSystem::free(2);
        assert!(!s.is_finite());
        assert!(s.enumerate(Budget(50)).unwrap_err().is_undecided());
    }

    #[test]
    fn budget_exhaustion_is_undecided() {
        let rels = vec![(vec![5, 0], vec![0, 3]), (vec![0, 7], vec![2, 0]), (vec![3, 3], vec![1, 1])];
        assert!(RewriteSystem::complete(2, rels, Budget(1)).unwrap_err().is_undecided());
    }

    fn relation() -> impl Strategy<Value = (Vector, Vector)> {
        (prop::collection::vec(0u64..4, 2), prop::collection::vec(0u64..4, 2))
    }

    proptest! {
        // Any two vectors related by a generating relation get the same normal form,
        // and normal forms are stable under further normalization.
        #[test]
        fn completion_respects_relations(rels in prop::collection::vec(relation(), 1..4), extra in prop::collection::vec(0u64..5, 2)) {
            let s = RewriteSystem::complete(2, rels.clone(), Budget::DEFAULT).unwrap();
            for (a, b) in &rels {
                let a2 = add(a, &extra);
                let b2 = add(b, &extra);
                prop_assert_eq!(s.normalize(a2), s.normalize(b2));
            }
            let nf = s.normalize(extra.clone());
            prop_assert!(s.is_normal(&nf));
            prop_assert_eq!(s.normalize(nf.clone()), nf);
        }
    }
}
