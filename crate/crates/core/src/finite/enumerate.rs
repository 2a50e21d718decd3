//! Exhaustive enumeration of small modules up to isomorphism.

use std::collections::BTreeSet;

use super::module::{Action, FiniteModule};
use crate::error::{Error, Result};
use crate::semiring::Semiring;

type Table = Vec<Vec<usize>>;

fn permutations_fixing_zero(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![0], &mut (1..k).collect(), &mut out);
    out
}

/// Commutative monoids on {0..k-1} with identity 0, one per isomorphism class.
pub fn commutative_monoids(k: usize) -> Vec<Table> {
    if k == 0 {
        return Vec::new();
    }
    let cells: Vec<(usize, usize)> = (1..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
    let mut t: Vec<Vec<Option<usize>>> = vec![vec![None; k]; k];
    for x in 0..k {
        t[0][x] = Some(x);
        t[x][0] = Some(x);
    }
    let perms = permutations_fixing_zero(k);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    fn assoc_ok(t: &[Vec<Option<usize>>]) -> bool {
        let k = t.len();
        for a in 0..k {
            for b in 0..k {
                let Some(ab) = t[a][b] else { continue };
                for c in 0..k {
                    let (Some(bc), Some(l)) = (t[b][c], t[ab][c]) else { continue };
                    if let Some(r) = t[a][bc] {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    fn rec(
        i: usize,
        cells: &[(usize, usize)],
        t: &mut Vec<Vec<Option<usize>>>,
        perms: &[Vec<usize>],
        seen: &mut BTreeSet<Table>,
        out: &mut Vec<Table>,
    ) {
        let k = t.len();
        if i == cells.len() {
            let full: Table = t.iter().map(|r| r.iter().map(|x| x.unwrap()).collect()).collect();
            let canon = perms.iter().map(|p| relabel(&full, p)).min().unwrap();
            if seen.insert(canon.clone()) {
                out.push(canon);
            }
            return;
        }
        let (a, b) = cells[i];
        for v in 0..k {
            t[a][b] = Some(v);
            t[b][a] = Some(v);
            if assoc_ok(t) {
                rec(i + 1, cells, t, perms, seen, out);
            }
        }
        t[a][b] = None;
        t[b][a] = None;
    }
    rec(0, &cells, &mut t, &perms, &mut seen, &mut out);
    out
}

/// Table of the relabelled structure: new[p[a]][p[b]] = p[old[a][b]].
fn relabel(t: &Table, p: &[usize]) -> Table {
    let k = t.len();
    let mut out = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            out[p[a]][p[b]] = p[t[a][b]];
        }
    }
    out
}

fn endomorphisms(add: &Table) -> Vec<Vec<usize>> {
    let k = add.len();
    let mut out = Vec::new();
    let mut f = vec![0usize; k];
    loop {
        if f[0] == 0 && (0..k).all(|a| (0..k).all(|b| f[add[a][b]] == add[f[a]][f[b]])) {
            out.push(f.clone());
        }
        let mut i = 1;
        loop {
            if i >= k {
                return out;
            }
            f[i] += 1;
            if f[i] < k {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if k == 1 {
            return out;
        }
    }
}

/// All modules over a commutative semiring S with at most `max_size` elements, up to isomorphism.
///
/// Over NAT the action is forced, so this lists commutative monoids.
pub fn enumerate_modules(base: &Semiring, max_size: usize) -> Result<Vec<FiniteModule>> {
    if !base.is_commutative() {
        return Err(Error::Unsupported("module enumeration needs a commutative base".into()));
    }
    let mut out = Vec::new();
    for k in 1..=max_size {
        let perms = permutations_fixing_zero(k);
        let mut seen: BTreeSet<(Table, Table)> = BTreeSet::new();
        for add in commutative_monoids(k) {
            let actions: Vec<Table> = match base.elements() {
                None => vec![Vec::new()],
                Some(scalars) => actions_on(base, &add, &scalars),
            };
            for act in actions {
                // act[s][m] = m·s, stored scalar-major while searching.
                let canon = perms
                    .iter()
                    .map(|p| {
                        let a = relabel(&add, p);
                        let mut r = vec![vec![0; act.len()]; k];
                        for (s, row) in act.iter().enumerate() {
                            for m in 0..k {
                                r[p[m]][s] = p[row[m]];
                            }
                        }
                        (a, r)
                    })
                    .min()
                    .unwrap();
                if !seen.insert(canon.clone()) {
                    continue;
                }
                let (a, r) = canon;
                let right = if base.is_finite() { Action::Table(r) } else { Action::Additive };
                let labels = (0..k).map(|i| if i == 0 { "0".to_string() } else { ((b'a' + i as u8 - 1) as char).to_string() }).collect();
                let idx = out.len();
                out.push(FiniteModule::from_tables(base.clone(), format!("M{k}_{idx}"), labels, a, right, None)?);
            }
        }
    }
    Ok(out)
}

fn actions_on(base: &Semiring, add: &Table, scalars: &[u64]) -> Vec<Table> {
    let k = add.len();
    let endos = endomorphisms(add);
    let id: Vec<usize> = (0..k).collect();
    let zero_map = vec![0usize; k];
    let (zero, one) = (base.zero() as usize, base.one() as usize);
    let mut assign: Vec<Option<Vec<usize>>> = vec![None; scalars.len()];
    assign[zero] = Some(zero_map);
    assign[one] = Some(id);
    let free: Vec<usize> = (0..scalars.len()).filter(|&s| s != zero && s != one).collect();
    let mut out = Vec::new();
    fn consistent(base: &Semiring, add: &Table, assign: &[Option<Vec<usize>>]) -> bool {
        let n = assign.len();
        for s in 0..n {
            let Some(fs) = &assign[s] else { continue };
            for t in 0..n {
                let Some(ft) = &assign[t] else { continue };
                if let Some(fst) = &assign[base.add(s as u64, t as u64) as usize] {
                    if (0..add.len()).any(|m| fst[m] != add[fs[m]][ft[m]]) {
                        return false;
                    }
                }
                // (m·s)·t = m·(st)
                if let Some(fp) = &assign[base.mul(s as u64, t as u64) as usize] {
                    if (0..add.len()).any(|m| fp[m] != ft[fs[m]]) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn rec(
        i: usize,
        free: &[usize],
        endos: &[Vec<usize>],
        base: &Semiring,
        add: &Table,
        assign: &mut Vec<Option<Vec<usize>>>,
        out: &mut Vec<Table>,
    ) {
        if i == free.len() {
            out.push(assign.iter().map(|a| a.clone().unwrap()).collect());
            return;
        }
        for e in endos {
            assign[free[i]] = Some(e.clone());
            if consistent(base, add, assign) {
                rec(i + 1, free, endos, base, add, assign, out);
            }
        }
        assign[free[i]] = None;
    }
    if consistent(base, add, &assign) {
        rec(0, &free, &endos, base, add, &mut assign, &mut out);
    }
    out
}
